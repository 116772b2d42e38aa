"""Homothetic copies v + nA of a finite lattice pattern A inside a point set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import EmptyPattern, EmptySet
from .gaussian import GaussianInt
from .seedset import InsertionSchedule, square

__all__ = [
    "LatticePattern",
    "HomotheticCopy",
    "find_copies",
    "copies_in_square",
    "scan_digit_stream",
    "verify_copy",
]


@dataclass(frozen=True)
class LatticePattern:
    points: tuple[GaussianInt, ...]

    def __init__(self, points: Iterable):
        pts = sorted({GaussianInt.coerce(p) for p in points}, key=lambda g: (g.re, g.im))
        if not pts:
            raise EmptyPattern("pattern has no points")
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def anchor(self) -> GaussianInt:
        """Lexicographically smallest point."""
        return self.points[0]

    @property
    def is_singleton(self) -> bool:
        return len(self.points) == 1

    def extent(self) -> tuple[int, int]:
        xs = [p.re for p in self.points]
        ys = [p.im for p in self.points]
        return max(xs) - min(xs), max(ys) - min(ys)

    @property
    def width(self) -> int:
        return max(self.extent())

    def min_corner(self) -> GaussianInt:
        return GaussianInt(min(p.re for p in self.points), min(p.im for p in self.points))

    def canonical(self) -> LatticePattern:
        c = self.min_corner()
        return LatticePattern(p - c for p in self.points)


@dataclass(frozen=True)
class HomotheticCopy:
    v: GaussianInt
    n: int
    singleton: bool = False

    def points(self, pattern: LatticePattern) -> list[GaussianInt]:
        return [self.v + self.n * a for a in pattern]

    def key(self) -> tuple[int, int, int]:
        return (self.v.re, self.v.im, self.n)


def verify_copy(copy: HomotheticCopy, pattern: LatticePattern, target) -> bool:
    return all(p in target for p in copy.points(pattern))


def _as_pattern(A) -> LatticePattern:
    return A if isinstance(A, LatticePattern) else LatticePattern(A)


def _as_target(S):
    if isinstance(S, (set, frozenset, list, tuple, dict)) or not hasattr(S, "__contains__"):
        return {GaussianInt.coerce(p) for p in S}
    return S


def find_copies(A, S, max_scale: int) -> list[HomotheticCopy]:
    """All (v, n) with 1 <= n <= max_scale and v + nA contained in S.

    ``S`` may be any iterable of points; objects that already provide O(1)
    ``__contains__`` (sets, :class:`IntegerSquare`) are used as-is.  A
    singleton pattern is reported once per point at n = 1 only.
    """
    A = _as_pattern(A)
    target = _as_target(S)
    if len(target) == 0:
        raise EmptySet("target set is empty")
    if max_scale < 1:
        raise ValueError("max_scale must be >= 1")
    base = A.anchor
    rest = [a - base for a in A.points[1:]]
    out = []
    for s in sorted(target, key=lambda g: (g.re, g.im)):
        s = GaussianInt.coerce(s)
        if A.is_singleton:
            out.append(HomotheticCopy(s - base, 1, singleton=True))
            continue
        for n in range(1, max_scale + 1):
            if all(s + n * d in target for d in rest):
                out.append(HomotheticCopy(s - n * base, n))
    out.sort(key=HomotheticCopy.key)
    return out


def copies_in_square(A, k: int, schedule: InsertionSchedule) -> list[HomotheticCopy]:
    """Copies of A inside W_k, enumerated from the square's geometry alone."""
    A = _as_pattern(A)
    W = square(k, schedule)
    s = W.side
    if s == 0:
        return []
    c = A.min_corner()
    wx, wy = A.extent()
    if A.is_singleton:
        return [HomotheticCopy(p - c, 1, singleton=True) for p in W]
    out = []
    n = 1
    while n * wx <= s - 1 and n * wy <= s - 1:
        for a in range(s - n * wx):
            for b in range(s - n * wy):
                corner = W.anchor + GaussianInt(a, b)
                out.append(HomotheticCopy(corner - n * c, n))
        n += 1
    out.sort(key=HomotheticCopy.key)
    return out


def scan_digit_stream(A, digits, max_scale: int) -> list[tuple[int, HomotheticCopy]]:
    """Replay a digit stream and report each copy at the 1-based position of
    the digit that completes it."""
    A = _as_pattern(A)
    seen: set[GaussianInt] = set()
    out = []
    for pos, d in enumerate(digits, start=1):
        d = GaussianInt.coerce(d)
        if d in seen:
            continue
        seen.add(d)
        if A.is_singleton:
            out.append((pos, HomotheticCopy(d - A.anchor, 1, singleton=True)))
            continue
        found = []
        for a in A:
            for n in range(1, max_scale + 1):
                v = d - n * a
                if all(v + n * b in seen for b in A):
                    found.append(HomotheticCopy(v, n))
        for c in sorted(set(found), key=HomotheticCopy.key):
            out.append((pos, c))
    return out
