"""N-rooted fixed-map Mandelbrot sets, accumulation maps and plateau statistics.

Roots are enumerated depth first over the binary prefix tree, 0-branch
before 1-branch, so survivors come out in increasing index order. A prefix
whose orbit leaves the escape disc is never revisited: every root below it
escapes too. In multicritical mode the walker carries one orbit per start
step along the current path (the critical point re-injected at every step)
and prunes as soon as any of them escapes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numba
import numpy as np

from .core import BudgetExceededError, ParamPair
from .templates import DyadicIntervalSet, check_depth

DEFAULT_MAX_DEPTH = 24


class CriticalMode(Enum):
    REGULAR = "regular"
    MULTICRITICAL = "multicritical"

    @classmethod
    def parse(cls, value) -> "CriticalMode":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


@numba.njit(cache=True, nogil=True)
def walk_roots(c0r, c0i, c1r, c1i, r2, depth, multicritical, collect, stop_on_escape):
    """Depth-first survivor enumeration.

    Returns ``(count, members, n_members, escaped_any)``. With
    ``stop_on_escape`` the walk ends at the first escaping node and ``count``
    is only a partial tally.
    """
    if depth == 0:
        members = np.zeros(1, dtype=np.int64)
        return 1, members, 1 if collect else 0, False

    width = depth if multicritical else 1
    zr = np.zeros((depth + 1, width))
    zi = np.zeros((depth + 1, width))
    nxt = np.zeros(depth + 1, dtype=np.int8)
    idx = np.zeros(depth + 1, dtype=np.int64)
    members = np.empty(1024 if collect else 1, dtype=np.int64)
    n_members = 0
    count = 0
    escaped = False

    d = 0
    while True:
        b = nxt[d]
        if b == 2:
            if d == 0:
                break
            d -= 1
            continue
        nxt[d] = b + 1
        if b == 0:
            cr = c0r
            ci = c0i
        else:
            cr = c1r
            ci = c1i

        if multicritical:
            nact = d
        elif d > 0:
            nact = 1
        else:
            nact = 0
        ok = True
        for k in range(nact):
            x = zr[d, k]
            y = zi[d, k]
            nx = x * x - y * y + cr
            ny = 2.0 * x * y + ci
            if not (nx * nx + ny * ny <= r2):
                ok = False
                break
            zr[d + 1, k] = nx
            zi[d + 1, k] = ny
        if not ok:
            escaped = True
            if stop_on_escape:
                return count, members, n_members, True
            continue

        # orbit of the critical point injected at this step; |c| <= R_e always
        if multicritical or d == 0:
            col = d if multicritical else 0
            zr[d + 1, col] = 0.0 * 0.0 - 0.0 * 0.0 + cr
            zi[d + 1, col] = 2.0 * 0.0 * 0.0 + ci

        j = idx[d] * 2 + b
        if d + 1 == depth:
            count += 1
            if collect:
                if n_members == members.shape[0]:
                    grown = np.empty(members.shape[0] * 2, dtype=np.int64)
                    grown[:n_members] = members
                    members = grown
                members[n_members] = j
                n_members += 1
            continue
        idx[d + 1] = j
        nxt[d + 1] = 0
        d += 1

    return count, members, n_members, escaped


def _check(depth: int, max_depth: int | None) -> int:
    depth = check_depth(depth)
    if max_depth is not None and depth > max_depth:
        raise BudgetExceededError(1 << depth, 1 << max_depth)
    return depth


def survivor_count(pair: ParamPair, depth: int, mode=CriticalMode.REGULAR,
                   max_depth: int | None = DEFAULT_MAX_DEPTH) -> int:
    """Number of depth-N roots passing the mode's survival test."""
    depth = _check(depth, max_depth)
    multi = CriticalMode.parse(mode) is CriticalMode.MULTICRITICAL
    count, _, _, _ = walk_roots(*pair.kernel_args(), depth, multi, False, False)
    return int(count)


def fixed_map_set(pair: ParamPair, depth: int, mode=CriticalMode.REGULAR,
                  max_depth: int | None = DEFAULT_MAX_DEPTH) -> DyadicIntervalSet:
    depth = _check(depth, max_depth)
    multi = CriticalMode.parse(mode) is CriticalMode.MULTICRITICAL
    _, members, n, _ = walk_roots(*pair.kernel_args(), depth, multi, True, False)
    return DyadicIntervalSet(depth, members[:n].copy())


def full_root_value(pair: ParamPair, depth: int, mode=CriticalMode.REGULAR,
                    max_depth: int | None = DEFAULT_MAX_DEPTH) -> float:
    """Fraction of depth-N roots that keep the critical orbit(s) in the escape disc."""
    return math.ldexp(survivor_count(pair, depth, mode, max_depth), -int(depth))


def is_well_behaved(pair: ParamPair, depth: int, mode=CriticalMode.REGULAR,
                    max_depth: int | None = DEFAULT_MAX_DEPTH) -> bool:
    depth = _check(depth, max_depth)
    multi = CriticalMode.parse(mode) is CriticalMode.MULTICRITICAL
    count, _, _, escaped = walk_roots(*pair.kernel_args(), depth, multi, False, True)
    return (not escaped) and count == (1 << depth)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Accumulation map sampled at the breakpoints j / 2**N, j = 0..2**N.

    Between breakpoints the map is linear with slope 1 on member intervals
    and flat elsewhere, so the samples determine it completely.
    """

    depth: int
    values: np.ndarray

    def breakpoints(self) -> np.ndarray:
        return np.ldexp(np.arange((1 << self.depth) + 1, dtype=np.float64), -self.depth)

    def __call__(self, t):
        return np.interp(t, self.breakpoints(), self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.depth == other.depth and np.array_equal(self.values, other.values)


def member_indicator(s: DyadicIntervalSet) -> np.ndarray:
    ind = np.zeros(1 << s.depth, dtype=bool)
    ind[s.members] = True
    return ind


def accumulation_map(s: DyadicIntervalSet) -> StepFunction:
    steps = np.zeros((1 << s.depth) + 1, dtype=np.int64)
    np.cumsum(member_indicator(s), out=steps[1:])
    # integer counts scaled by a power of two: exact
    return StepFunction(s.depth, np.ldexp(steps.astype(np.float64), -s.depth))


@dataclass(frozen=True)
class PlateauHistogram:
    depth: int
    counts: dict[int, int] = field(default_factory=dict)

    def total_length(self) -> int:
        return sum(length * n for length, n in self.counts.items())


def plateau_histogram(f: StepFunction) -> PlateauHistogram:
    flat = np.diff(f.values) == 0
    if not flat.any():
        return PlateauHistogram(f.depth, {})
    padded = np.concatenate(([False], flat, [False])).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1)
    lengths, n = np.unique(ends - starts, return_counts=True)
    return PlateauHistogram(f.depth, {int(l): int(c) for l, c in zip(lengths, n)})


def loglog_points(h: PlateauHistogram, all_lengths: bool = False) -> np.ndarray:
    """Rows of (log l, log(s(l) + 1)), natural logarithms, increasing l.

    By default only lengths that occur are emitted; ``all_lengths`` emits
    every l in [1, 2**N], unrepresented ones at log(1) = 0.
    """
    if all_lengths:
        lengths = np.arange(1, (1 << h.depth) + 1, dtype=np.int64)
        counts = np.zeros(lengths.size, dtype=np.int64)
        for length, n in h.counts.items():
            counts[length - 1] = n
    else:
        lengths = np.array(sorted(h.counts), dtype=np.int64)
        counts = np.array([h.counts[l] for l in lengths], dtype=np.int64)
    if lengths.size == 0:
        return np.empty((0, 2))
    return np.column_stack((np.log(lengths.astype(np.float64)), np.log(counts.astype(np.float64) + 1.0)))
