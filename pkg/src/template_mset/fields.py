"""Parameter-plane sweeps: hybrid, contour and multi-Mandelbrot fields.

Every cell is an independent work item evaluated at its center, and results
are integer survivor counts scaled by 2**-N, so the output does not depend on
how many threads evaluate the cells or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .core import _as_complex, check_budget, estimate_work
from .msets import CriticalMode, walk_roots
from .templates import check_depth


@dataclass(frozen=True)
class GridSpec:
    """Rectangle of the complex plane split into ``rows x cols`` cells.

    Row 0 is the top row (largest imaginary part) so that row-major data
    reads like an image; column 0 is the leftmost (smallest real part).
    """

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    cols: int
    rows: int

    def __post_init__(self):
        for name in ("re_min", "re_max", "im_min", "im_max"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "cols", int(self.cols))
        object.__setattr__(self, "rows", int(self.rows))
        if not self.re_min < self.re_max or not self.im_min < self.im_max:
            raise ValueError("grid bounds must satisfy re_min < re_max and im_min < im_max")
        if self.cols < 1 or self.rows < 1:
            raise ValueError("grid needs at least one row and one column")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 6:
            raise ValueError(f"grid must be re_min,re_max,im_min,im_max,cols,rows; got {text!r}")
        return cls(*map(float, parts[:4]), int(parts[4]), int(parts[5]))

    @classmethod
    def square(cls, half_width: float, n: int, center: complex = 0j) -> "GridSpec":
        return cls(center.real - half_width, center.real + half_width,
                   center.imag - half_width, center.imag + half_width, n, n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def re_centers(self) -> np.ndarray:
        dx = (self.re_max - self.re_min) / self.cols
        return self.re_min + (np.arange(self.cols) + 0.5) * dx

    def im_centers(self) -> np.ndarray:
        dy = (self.im_max - self.im_min) / self.rows
        return self.im_max - (np.arange(self.rows) + 0.5) * dy

    def points(self) -> np.ndarray:
        """Complex cell centers, shape ``(rows, cols)``."""
        return self.re_centers()[None, :] + 1j * self.im_centers()[:, None]

    def cell_of(self, z: complex) -> tuple[int, int]:
        """(row, col) of the cell containing ``z``."""
        z = complex(z)
        col = int(math.floor((z.real - self.re_min) / (self.re_max - self.re_min) * self.cols))
        row = int(math.floor((self.im_max - z.imag) / (self.im_max - self.im_min) * self.rows))
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise ValueError(f"{z} lies outside the grid")
        return row, col

    def covers_disc(self, radius: float) -> bool:
        return (self.re_min <= -radius and self.re_max >= radius
                and self.im_min <= -radius and self.im_max >= radius)

    def __str__(self) -> str:
        return f"{self.re_min!r},{self.re_max!r},{self.im_min!r},{self.im_max!r},{self.cols},{self.rows}"


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != self.grid.shape:
            raise ValueError(f"data shape {self.data.shape} does not match grid {self.grid.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.data, other.data)

    def at(self, z: complex) -> float:
        return float(self.data[self.grid.cell_of(z)])


@dataclass(frozen=True, eq=False)
class BoolField:
    grid: GridSpec
    data: np.ndarray

    def __post_init__(self):
        if self.data.shape != self.grid.shape:
            raise ValueError(f"data shape {self.data.shape} does not match grid {self.grid.shape}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolField):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.data, other.data)

    def at(self, z: complex) -> bool:
        return bool(self.data[self.grid.cell_of(z)])


@numba.njit(cache=True, nogil=True)
def _pair_r2(c0r, c0i, c1r, c1i):
    return max(4.0, c0r * c0r + c0i * c0i, c1r * c1r + c1i * c1i)


@numba.njit(cache=True, parallel=True)
def _count_cells(c0r, c0i, c1r, c1i, depth, multicritical):
    n = c0r.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for k in numba.prange(n):
        r2 = _pair_r2(c0r[k], c0i[k], c1r[k], c1i[k])
        count, _, _, _ = walk_roots(c0r[k], c0i[k], c1r[k], c1i[k], r2, depth,
                                    multicritical, False, False)
        out[k] = count
    return out


@numba.njit(cache=True, parallel=True)
def _well_behaved_cells(c0r, c0i, c1r, c1i, depth):
    n = c0r.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for k in numba.prange(n):
        r2 = _pair_r2(c0r[k], c0i[k], c1r[k], c1i[k])
        _, _, _, escaped = walk_roots(c0r[k], c0i[k], c1r[k], c1i[k], r2, depth,
                                      False, False, True)
        out[k] = not escaped
    return out


@numba.njit(cache=True, parallel=True)
def _contour_counts(c0r, c0i, c1r, c1i, depth, multicritical):
    n0 = c0r.shape[0]
    n1 = c1r.shape[0]
    full = np.int64(1) << depth
    out = np.zeros(n0, dtype=np.int64)
    for k in numba.prange(n0):
        best = np.int64(0)
        for m in range(n1):
            r2 = _pair_r2(c0r[k], c0i[k], c1r[m], c1i[m])
            count, _, _, _ = walk_roots(c0r[k], c0i[k], c1r[m], c1i[m], r2, depth,
                                        multicritical, False, False)
            if count > best:
                best = count
                if best == full:
                    break
        out[k] = best
    return out


@numba.njit(cache=True, parallel=True)
def _classical_cells(cr, ci, iters):
    n = cr.shape[0]
    out = np.zeros(n, dtype=np.bool_)
    for k in numba.prange(n):
        r2 = max(4.0, cr[k] * cr[k] + ci[k] * ci[k])
        x = 0.0
        y = 0.0
        alive = True
        for _ in range(iters):
            nx = x * x - y * y + cr[k]
            y = 2.0 * x * y + ci[k]
            x = nx
            if not (x * x + y * y <= r2):
                alive = False
                break
        out[k] = alive
    return out


def _split(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    return np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag)


def _scale(counts: np.ndarray, depth: int) -> np.ndarray:
    return np.ldexp(counts.astype(np.float64), -depth)


def hybrid_field(c0, grid: GridSpec, depth: int, mode=CriticalMode.REGULAR,
                 budget: int | None = None) -> ScalarField:
    """Full root value of (c0, c1) for every c1 cell center of ``grid``."""
    depth = check_depth(depth)
    check_budget(estimate_work(grid.size, depth), budget)
    multi = CriticalMode.parse(mode) is CriticalMode.MULTICRITICAL
    c0 = _as_complex(c0)
    c1r, c1i = _split(grid.points())
    c0r = np.full_like(c1r, c0.real)
    c0i = np.full_like(c1r, c0.imag)
    counts = _count_cells(c0r, c0i, c1r, c1i, depth, multi)
    return ScalarField(grid, _scale(counts, depth).reshape(grid.shape))


def central_plateau(f: ScalarField) -> BoolField:
    return BoolField(f.grid, f.data == 1.0)


def contour_field(grid_c0: GridSpec, grid_c1: GridSpec, depth: int,
                  mode=CriticalMode.REGULAR, budget: int | None = None) -> ScalarField:
    """Per c0 cell, the largest full root value over all c1 cells.

    The maximum over a finite c1 grid bounds the supremum over the plane
    from below; refine ``grid_c1`` to tighten it.
    """
    depth = check_depth(depth)
    check_budget(estimate_work(grid_c0.size * grid_c1.size, depth), budget)
    multi = CriticalMode.parse(mode) is CriticalMode.MULTICRITICAL
    c0r, c0i = _split(grid_c0.points())
    c1r, c1i = _split(grid_c1.points())
    counts = _contour_counts(c0r, c0i, c1r, c1i, depth, multi)
    return ScalarField(grid_c0, _scale(counts, depth).reshape(grid_c0.shape))


def multi_mandelbrot_slice(grid: GridSpec, depth: int, *, c0=None, c1=None,
                           budget: int | None = None) -> BoolField:
    """Well-behavedness over the free parameter's grid with the other one fixed.

    Regular and multicritical tests agree on well-behaved pairs, so only the
    cheaper regular test is run.
    """
    if (c0 is None) == (c1 is None):
        raise ValueError("fix exactly one of c0, c1")
    depth = check_depth(depth)
    check_budget(estimate_work(grid.size, depth), budget)
    fr, fi = _split(grid.points())
    if c0 is not None:
        c0 = _as_complex(c0)
        args = (np.full_like(fr, c0.real), np.full_like(fr, c0.imag), fr, fi)
    else:
        c1 = _as_complex(c1)
        args = (fr, fi, np.full_like(fr, c1.real), np.full_like(fr, c1.imag))
    return BoolField(grid, _well_behaved_cells(*args, depth).reshape(grid.shape))


def line_samples(re_min: float, re_max: float, samples: int) -> np.ndarray:
    """Cell-center samples of [re_min, re_max]."""
    if not re_min < re_max or samples < 1:
        raise ValueError("need re_min < re_max and at least one sample")
    return re_min + (np.arange(samples) + 0.5) * ((re_max - re_min) / samples)


def multi_mandelbrot_voxels(re_range: tuple[float, float], samples: int, im_offset: float,
                            grid: GridSpec, depth: int, budget: int | None = None) -> np.ndarray:
    """3D slice: c0 = x + i*im_offset along the line, c1 over ``grid``.

    Returns rows ``(re_c0, re_c1, im_c1)`` of well-behaved pairs, ordered by
    c0 sample and then row-major over the c1 grid.
    """
    depth = check_depth(depth)
    check_budget(estimate_work(samples * grid.size, depth), budget)
    chunks = []
    for x in line_samples(re_range[0], re_range[1], samples):
        mask = multi_mandelbrot_slice(grid, depth, c0=complex(x, im_offset)).data
        pts = grid.points()[mask]
        chunks.append(np.column_stack((np.full(pts.size, x), pts.real, pts.imag)))
    return np.concatenate(chunks) if chunks else np.empty((0, 3))


def classical_mandelbrot_mask(grid: GridSpec, iters: int) -> BoolField:
    """Orbit of 0 under z**2 + c stays within max(2, |c|) for ``iters`` steps."""
    if iters < 0:
        raise ValueError("iters must be non-negative")
    cr, ci = _split(grid.points())
    return BoolField(grid, _classical_cells(cr, ci, int(iters)).reshape(grid.shape))
