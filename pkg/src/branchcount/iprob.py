"""Exact rational interval probabilities ``[lo, hi]``.

Bounds are :class:`fractions.Fraction` values.  Sums may leave ``[0, 1]``; such
values are kept unclamped and reported through :attr:`IntervalProb.out_of_range`.

>>> a = IntervalProb.from_counts(2, 10, 30)
>>> b = IntervalProb.from_counts(3, 6, 30)
>>> print(a + b)
[1/6, 7/10]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("interval bounds must be exact rationals, not floats")
    if isinstance(x, (tuple, list)):
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, (Rational, str)):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as an exact bound")


@dataclass(frozen=True)
class IntervalProb:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _frac(self.lo), _frac(self.hi)
        if lo > hi:
            raise ValueError(f"lower bound {lo} exceeds upper bound {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def from_counts(cls, m: int, r: int, n: int) -> IntervalProb:
        """``[m/n, (m+r)/n]`` for ``m`` definite and ``r`` indefinite of ``n`` branches."""
        if n < 1:
            raise ValueError("need at least one branch")
        if m < 0 or r < 0 or m + r > n:
            raise ValueError(f"invalid counts m={m}, r={r}, n={n}")
        return cls(Fraction(m, n), Fraction(m + r, n))

    @classmethod
    def exact(cls, p) -> IntervalProb:
        return cls(p, p)

    @property
    def out_of_range(self) -> bool:
        return self.lo < 0 or self.hi > 1

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: IntervalProb) -> IntervalProb:
        return IntervalProb(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: IntervalProb) -> IntervalProb:
        return IntervalProb(self.lo * other.lo, self.hi * other.hi)

    def issubset(self, other: IntervalProb) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def contains_real(self, x: float, tol: float = 0.0) -> bool:
        if tol < 0:
            raise ValueError("tol must be non-negative")
        return float(self.lo) - tol <= x <= float(self.hi) + tol

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"

    def to_dict(self) -> dict:
        return {
            "lo": [self.lo.numerator, self.lo.denominator],
            "hi": [self.hi.numerator, self.hi.denominator],
        }

    @classmethod
    def from_dict(cls, d: dict) -> IntervalProb:
        return cls(tuple(d["lo"]), tuple(d["hi"]))


def from_counts(m: int, r: int, n: int) -> IntervalProb:
    return IntervalProb.from_counts(m, r, n)


def add(a: IntervalProb, b: IntervalProb) -> IntervalProb:
    return a + b


def mul(a: IntervalProb, b: IntervalProb) -> IntervalProb:
    return a * b


def subset(a: IntervalProb, b: IntervalProb) -> bool:
    """True iff ``a ⊆ b``."""
    return a.issubset(b)


def intersect_all(xs: Iterable[IntervalProb]) -> IntervalProb | None:
    """Common intersection of a nonempty family, or None when it is empty."""
    xs = list(xs)
    if not xs:
        raise ValueError("need at least one interval")
    lo = max(x.lo for x in xs)
    hi = min(x.hi for x in xs)
    if lo > hi:
        return None
    return IntervalProb(lo, hi)


def contains_real(a: IntervalProb, x: float, tol: float = 0.0) -> bool:
    return a.contains_real(x, tol)
