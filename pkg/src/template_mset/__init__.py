"""Mandelbrot sets for template iterations of two quadratic maps."""

import os as _os

import numba as _numba

# the system TBB is too old for numba; skip it instead of warning on every run
if "NUMBA_THREADING_LAYER" not in _os.environ:
    _numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

from .core import (BudgetExceededError, OrbitResult, Outcome, ParamPair, escape_radius,
                   iterate_root, survives)
from .fields import (BoolField, GridSpec, ScalarField, central_plateau,
                     classical_mandelbrot_mask, contour_field, hybrid_field,
                     multi_mandelbrot_slice, multi_mandelbrot_voxels)
from .julia import CoverageError, JuliaMask, component_count, connectedness_field, julia_mask
from .msets import (CriticalMode, PlateauHistogram, StepFunction, accumulation_map,
                    fixed_map_set, full_root_value, is_well_behaved, loglog_points,
                    plateau_histogram, survivor_count)
from .templates import (DyadicIntervalSet, RandomTemplateSpec, TemplateRoot, psi_value,
                        random_root, root_from_index, suffix)

__version__ = "0.1.0"
