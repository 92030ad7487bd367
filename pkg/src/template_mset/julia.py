"""Filled-Julia-set masks for a fixed root and connected-component counts.

The mask approximates the filled Julia set of the template iteration by the
z-grid cells whose orbit stays in the escape disc for every step of the root.
Counting components of that mask is what separates the connectedness locus
(one component) from parameters with broken-up Julia sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .core import ParamPair, _as_complex, check_budget, survival_grid
from .fields import GridSpec, ScalarField
from .templates import as_root

DEFAULT_Z_CELLS = 501
DEFAULT_ROOT_LENGTH = 50
REFINED_ROOT_LENGTH = 200

_STRUCTURE = {
    4: ndimage.generate_binary_structure(2, 1),
    8: ndimage.generate_binary_structure(2, 2),
}


class CoverageError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class JuliaMask:
    grid: GridSpec
    data: np.ndarray

    def __eq__(self, other) -> bool:
        if not isinstance(other, JuliaMask):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.data, other.data)

    def at(self, z: complex) -> bool:
        return bool(self.data[self.grid.cell_of(z)])


def default_z_grid(radius: float, cells: int = DEFAULT_Z_CELLS) -> GridSpec:
    return GridSpec.square(radius + 0.1, cells)


def julia_mask(pair: ParamPair, root, grid: GridSpec) -> JuliaMask:
    if not grid.covers_disc(pair.escape_radius):
        raise CoverageError(
            f"z-grid must contain [-{pair.escape_radius}, {pair.escape_radius}]^2, got {grid}")
    bits = as_root(root).as_array()
    data = survival_grid(grid.re_centers(), grid.im_centers(), *pair.kernel_args(), bits)
    return JuliaMask(grid, data)


def component_count(mask, connectivity: int = 4) -> int:
    """Number of connected groups of true cells (4- or 8-neighbour adjacency)."""
    if connectivity not in _STRUCTURE:
        raise ValueError("connectivity must be 4 or 8")
    data = np.asarray(getattr(mask, "data", mask), dtype=bool)
    _, n = ndimage.label(data, structure=_STRUCTURE[connectivity])
    return int(n)


def connectedness_field(c0, c1_grid: GridSpec, root, z_grid: GridSpec,
                        connectivity: int = 4, budget: int | None = None) -> ScalarField:
    """Component count of the Julia mask for every c1 cell, stored as floats."""
    c0 = _as_complex(c0)
    root = as_root(root)
    check_budget(c1_grid.size * z_grid.size * max(root.length, 1), budget)
    points = c1_grid.points()
    worst = max(2.0, abs(c0), float(np.abs(points).max()))
    if not z_grid.covers_disc(worst):
        raise CoverageError(f"z-grid must contain [-{worst}, {worst}]^2 for every c1 cell")
    out = np.zeros(c1_grid.shape)
    for (r, c), c1 in np.ndenumerate(points):
        out[r, c] = component_count(julia_mask(ParamPair(c0, c1), root, z_grid), connectivity)
    return ScalarField(c1_grid, out)
