"""Finite template roots, the binary-expansion encoding, and seeded random roots.

A root is written as a plain 0/1 string with the leftmost bit applied first.
The first applied bit is the most significant bit of the root's index, so the
root with index ``j`` at depth ``N`` covers ``[j / 2**N, (j + 1) / 2**N)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

MAX_DEPTH = 30


@dataclass(frozen=True)
class TemplateRoot:
    bits: tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"template bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "TemplateRoot":
        text = text.strip()
        if text and set(text) - {"0", "1"}:
            raise ValueError(f"template root must be a 0/1 string, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.bits, dtype=np.int8)

    @property
    def index(self) -> int:
        """Big-endian integer value of the bits."""
        j = 0
        for b in self.bits:
            j = (j << 1) | b
        return j


def as_root(root: "TemplateRoot | str | Iterable[int]") -> TemplateRoot:
    if isinstance(root, TemplateRoot):
        return root
    if isinstance(root, str):
        return TemplateRoot.parse(root)
    return TemplateRoot(tuple(root))


def check_depth(depth: int, limit: int = MAX_DEPTH) -> int:
    depth = int(depth)
    if depth < 0 or depth > limit:
        raise ValueError(f"depth must be in [0, {limit}], got {depth}")
    return depth


def psi_value(root) -> float:
    """Sum of s_n * 2**-n over the root's bits; exact for roots up to 53 bits."""
    root = as_root(root)
    return float(np.ldexp(root.index, -root.length)) if root.length else 0.0


def root_from_index(j: int, depth: int) -> TemplateRoot:
    depth = check_depth(depth)
    j = int(j)
    if not 0 <= j < (1 << depth):
        raise ValueError(f"index {j} out of range for depth {depth}")
    return TemplateRoot(tuple((j >> (depth - 1 - n)) & 1 for n in range(depth)))


def suffix(root, k: int) -> TemplateRoot:
    """Drop the first ``k`` bits (the right k-shift of the template)."""
    root = as_root(root)
    if not 0 <= k <= root.length:
        raise ValueError(f"shift {k} out of range for root of length {root.length}")
    return TemplateRoot(root.bits[k:])


@dataclass(frozen=True)
class RandomTemplateSpec:
    one_probability: float
    length: int
    seed: int

    def __post_init__(self):
        if not 0.0 <= self.one_probability <= 1.0:
            raise ValueError(f"one_probability must be in [0, 1], got {self.one_probability}")
        if self.length < 0:
            raise ValueError(f"length must be non-negative, got {self.length}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")


def random_root(spec: RandomTemplateSpec) -> TemplateRoot:
    """Draw each bit as 1 with probability ``spec.one_probability``.

    Uses raw 64-bit output of numpy's PCG64 (PCG XSL RR 128/64) seeded with
    ``spec.seed``. Each raw word is reduced to a 53-bit uniform
    ``u = (w >> 11) * 2**-53`` and the bit is ``u < p``. Only the raw bit
    stream is relied on, which numpy keeps fixed across versions and platforms.
    """
    if spec.length == 0:
        return TemplateRoot(())
    raw = np.random.PCG64(spec.seed).random_raw(spec.length)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return TemplateRoot(tuple(int(x) for x in (u < spec.one_probability)))


@dataclass(frozen=True, eq=False)
class DyadicIntervalSet:
    """Union of half-open intervals ``[j 2^-N, (j+1) 2^-N)`` for ``j`` in ``members``."""

    depth: int
    members: np.ndarray

    def __post_init__(self):
        check_depth(self.depth)
        m = np.asarray(self.members, dtype=np.int64)
        if m.ndim != 1:
            raise ValueError("members must be one-dimensional")
        if m.size:
            if m[0] < 0 or m[-1] >= (1 << self.depth) or np.any(np.diff(m) <= 0):
                raise ValueError("members must be strictly increasing in [0, 2**depth)")
        object.__setattr__(self, "members", m)

    @classmethod
    def full(cls, depth: int) -> "DyadicIntervalSet":
        return cls(depth, np.arange(1 << depth, dtype=np.int64))

    @classmethod
    def empty(cls, depth: int) -> "DyadicIntervalSet":
        return cls(depth, np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.members.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicIntervalSet):
            return NotImplemented
        return self.depth == other.depth and np.array_equal(self.members, other.members)

    def __contains__(self, j) -> bool:
        i = np.searchsorted(self.members, j)
        return bool(i < self.members.size and self.members[i] == j)

    def measure(self) -> float:
        return float(np.ldexp(float(self.members.size), -self.depth))

    def refine(self) -> "DyadicIntervalSet":
        """Same point set expressed at depth N + 1."""
        m = np.empty(2 * self.members.size, dtype=np.int64)
        m[0::2] = 2 * self.members
        m[1::2] = 2 * self.members + 1
        return DyadicIntervalSet(self.depth + 1, m)

    def issubset(self, other: "DyadicIntervalSet") -> bool:
        if self.depth != other.depth:
            raise ValueError("compare sets at a common depth (use refine())")
        return bool(np.isin(self.members, other.members, assume_unique=True).all())

    def roots(self) -> Sequence[TemplateRoot]:
        return [root_from_index(int(j), self.depth) for j in self.members]

    def intervals(self) -> list[tuple[float, float]]:
        """Merged half-open intervals ``[a, b)`` covering the set."""
        out: list[tuple[float, float]] = []
        if not self.members.size:
            return out
        breaks = np.flatnonzero(np.diff(self.members) != 1)
        starts = np.concatenate(([0], breaks + 1))
        ends = np.concatenate((breaks, [self.members.size - 1]))
        for s, e in zip(starts, ends):
            a = float(np.ldexp(float(self.members[s]), -self.depth))
            b = float(np.ldexp(float(self.members[e] + 1), -self.depth))
            out.append((a, b))
        return out
