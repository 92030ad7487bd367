"""Template-driven orbits of the pair of quadratic maps z**2 + c0, z**2 + c1."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numba
import numpy as np

from .templates import as_root


class BudgetExceededError(RuntimeError):
    """Raised before any work when the estimated orbit-step count exceeds the budget."""

    def __init__(self, estimate: int, budget: int):
        super().__init__(f"estimated {estimate} orbit steps exceeds budget {budget}")
        self.estimate = estimate
        self.budget = budget


def estimate_work(cells: int, depth: int) -> int:
    """Unpruned upper bound on orbit steps: cells * 2**N * N."""
    return int(cells) * (1 << int(depth)) * max(int(depth), 1)


def check_budget(estimate: int, budget: int | None) -> None:
    if budget is not None and estimate > budget:
        raise BudgetExceededError(estimate, budget)


def _as_complex(value) -> complex:
    if isinstance(value, (tuple, list)):
        value = complex(float(value[0]), float(value[1]))
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"complex parameter must be finite, got {value!r}")
    return z


def radius_sq(c0: complex, c1: complex) -> float:
    # Same arithmetic as the orbit modulus so that an orbit value equal to c0
    # or c1 compares equal to the radius instead of rounding past it.
    return max(4.0, c0.real * c0.real + c0.imag * c0.imag, c1.real * c1.real + c1.imag * c1.imag)


@dataclass(frozen=True)
class ParamPair:
    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", _as_complex(self.c0))
        object.__setattr__(self, "c1", _as_complex(self.c1))

    @property
    def escape_radius(self) -> float:
        return escape_radius(self)

    @property
    def escape_radius_sq(self) -> float:
        return radius_sq(self.c0, self.c1)

    def kernel_args(self) -> tuple[float, float, float, float, float]:
        return (self.c0.real, self.c0.imag, self.c1.real, self.c1.imag, self.escape_radius_sq)


def escape_radius(pair: ParamPair) -> float:
    """max(2, |c0|, |c1|): once an orbit leaves this disc it diverges."""
    return max(2.0, abs(pair.c0), abs(pair.c1))


class Outcome(Enum):
    SURVIVED = "survived"
    ESCAPED = "escaped"


@dataclass(frozen=True)
class OrbitResult:
    outcome: Outcome
    escape_step: int | None
    final_modulus: float

    @property
    def escaped(self) -> bool:
        return self.outcome is Outcome.ESCAPED


def iterate_root(pair: ParamPair, root, xi0: complex = 0j) -> OrbitResult:
    """Apply f_{c_{s_1}}, ..., f_{c_{s_N}} to ``xi0`` and stop at the first escape.

    An orbit escapes at step n when |xi_n| > R_e; a modulus exactly equal to
    R_e is kept. Floating-point overflow counts as an escape at that step.
    """
    bits = as_root(root).bits
    r2 = pair.escape_radius_sq
    cs = ((pair.c0.real, pair.c0.imag), (pair.c1.real, pair.c1.imag))
    z = _as_complex(xi0)
    x, y = z.real, z.imag
    for n, b in enumerate(bits, start=1):
        cr, ci = cs[b]
        x, y = x * x - y * y + cr, 2.0 * x * y + ci
        m = x * x + y * y
        if not m <= r2:
            mod = math.hypot(x, y)
            if math.isnan(mod):
                mod = math.inf
            # squared test is authoritative; keep the reported modulus consistent with it
            mod = max(mod, math.nextafter(math.sqrt(r2), math.inf))
            return OrbitResult(Outcome.ESCAPED, n, mod)
    return OrbitResult(Outcome.SURVIVED, None, math.hypot(x, y))


def survives(pair: ParamPair, root) -> bool:
    return iterate_root(pair, root, 0j).outcome is Outcome.SURVIVED


@numba.njit(cache=True, nogil=True)
def orbit_survives(zr, zi, c0r, c0i, c1r, c1i, r2, bits):
    """Kernel form of ``iterate_root(...).outcome is SURVIVED`` for one start point."""
    x = zr
    y = zi
    for n in range(bits.shape[0]):
        if bits[n] == 0:
            cr = c0r
            ci = c0i
        else:
            cr = c1r
            ci = c1i
        nx = x * x - y * y + cr
        y = 2.0 * x * y + ci
        x = nx
        if not (x * x + y * y <= r2):
            return False
    return True


@numba.njit(cache=True, parallel=True)
def survival_grid(re, im, c0r, c0i, c1r, c1i, r2, bits):
    """Survival of each start point ``re[c] + 1j * im[r]``; rows x cols booleans."""
    rows = im.shape[0]
    cols = re.shape[0]
    out = np.zeros((rows, cols), dtype=np.bool_)
    for k in numba.prange(rows * cols):
        r = k // cols
        c = k - r * cols
        out[r, c] = orbit_survives(re[c], im[r], c0r, c0i, c1r, c1i, r2, bits)
    return out
