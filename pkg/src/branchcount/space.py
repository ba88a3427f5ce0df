"""Bounded parameter spaces and regions built from axis-aligned boxes.

A :class:`Region` is a finite union of boxes in one or two dimensions.  Every
region is stored in canonical form: the boxes are pairwise disjoint, boxes of
zero measure are dropped, and the layout is unique for a given point set (up to
null sets).  In 2D the canonical form is a left-to-right sweep over vertical
slabs; consecutive slabs with identical cross-sections are merged.

>>> r = Region.from_literal([[[0.0, 0.5]], [[0.25, 1.0]]])
>>> r.boxes
(((0.0, 1.0),),)
>>> lambda_measure(r)
1.0
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

Interval = tuple[float, float]
Box = tuple[Interval, ...]

# slack allowed when checking that a region lies inside the space
_BOUNDS_SLACK = 1e-12


def _merge_intervals(intervals: Iterable[Interval]) -> list[Interval]:
    """Sort and merge intervals; touching intervals are joined."""
    items = sorted((float(lo), float(hi)) for lo, hi in intervals if hi > lo)
    merged: list[Interval] = []
    for lo, hi in items:
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged


def _intersect_intervals(a: Sequence[Interval], b: Sequence[Interval]) -> list[Interval]:
    # both inputs sorted and disjoint
    out: list[Interval] = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return out


def _subtract_intervals(a: Sequence[Interval], b: Sequence[Interval]) -> list[Interval]:
    out: list[Interval] = []
    for lo, hi in a:
        cur = lo
        for blo, bhi in b:
            if bhi <= cur or blo >= hi:
                continue
            if blo > cur:
                out.append((cur, blo))
            cur = max(cur, bhi)
            if cur >= hi:
                break
        if cur < hi:
            out.append((cur, hi))
    return out


def _union_intervals(a: Sequence[Interval], b: Sequence[Interval]) -> list[Interval]:
    return _merge_intervals(list(a) + list(b))


_Op1D = Callable[[Sequence[Interval], Sequence[Interval]], list[Interval]]


def _cross_section(boxes: Sequence[Box], x0: float, x1: float) -> list[Interval]:
    return _merge_intervals(b[1] for b in boxes if b[0][0] <= x0 and b[0][1] >= x1)


def _sweep(a: Sequence[Box], b: Sequence[Box], op: _Op1D) -> tuple[Box, ...]:
    """Apply a 1D interval operation slab by slab and emit canonical 2D boxes."""
    xs = sorted({c for box in list(a) + list(b) for c in box[0]})
    slabs: list[tuple[float, float, tuple[Interval, ...]]] = []
    for x0, x1 in zip(xs[:-1], xs[1:]):
        if x1 <= x0:
            continue
        ys = tuple(op(_cross_section(a, x0, x1), _cross_section(b, x0, x1)))
        if not ys:
            continue
        if slabs and slabs[-1][1] == x0 and slabs[-1][2] == ys:
            slabs[-1] = (slabs[-1][0], x1, ys)
        else:
            slabs.append((x0, x1, ys))
    return tuple(((x0, x1), y) for x0, x1, ys in slabs for y in ys)


def _boolean(a: Region, b: Region, op: _Op1D) -> Region:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.dim == 1:
        ivs = op([bx[0] for bx in a.boxes], [bx[0] for bx in b.boxes])
        return Region(1, tuple((iv,) for iv in ivs), _canonical=True)
    return Region(2, _sweep(a.boxes, b.boxes, op), _canonical=True)


def _as_box(raw, dim: int) -> Box:
    box = tuple((float(lo), float(hi)) for lo, hi in raw)
    if len(box) != dim:
        raise ValueError(f"box {raw!r} does not have {dim} axes")
    for lo, hi in box:
        if not (np.isfinite(lo) and np.isfinite(hi)):
            raise ValueError(f"box {raw!r} has non-finite corners")
        if hi < lo:
            raise ValueError(f"box {raw!r} has lo > hi")
    return box


def canonicalize(dim: int, boxes: Iterable) -> tuple[Box, ...]:
    """Return the canonical disjoint box list covering the union of ``boxes``."""
    bx = [_as_box(b, dim) for b in boxes]
    bx = [b for b in bx if all(hi > lo for lo, hi in b)]
    if dim == 1:
        return tuple((iv,) for iv in _merge_intervals(b[0] for b in bx))
    if dim == 2:
        return _sweep(bx, [], lambda p, q: list(p))
    raise ValueError("only 1 or 2 dimensions are supported")


@dataclass(frozen=True)
class Region:
    """Finite union of axis-aligned boxes, held in canonical form."""

    dim: int
    boxes: tuple[Box, ...] = ()
    _canonical: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("only 1 or 2 dimensions are supported")
        if not self._canonical:
            object.__setattr__(self, "boxes", canonicalize(self.dim, self.boxes))
            object.__setattr__(self, "_canonical", True)

    @classmethod
    def empty(cls, dim: int) -> Region:
        return cls(dim, (), _canonical=True)

    @classmethod
    def box(cls, *intervals: Interval) -> Region:
        """Region made of a single box, one ``(lo, hi)`` pair per axis."""
        return cls(len(intervals), (tuple(intervals),))

    @classmethod
    def from_literal(cls, literal: Sequence) -> Region:
        """Parse the config literal: a list of boxes, each a list of ``[lo, hi]`` pairs."""
        literal = list(literal)
        if not literal:
            raise ValueError("empty literal has no dimension; use Region.empty(dim)")
        return cls(len(literal[0]), tuple(literal))

    def to_literal(self) -> list:
        return [[list(iv) for iv in b] for b in self.boxes]

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    @property
    def measure(self) -> float:
        return lambda_measure(self)

    def __or__(self, other: Region) -> Region:
        return region_union(self, other)

    def __and__(self, other: Region) -> Region:
        return region_intersect(self, other)

    def __sub__(self, other: Region) -> Region:
        return region_difference(self, other)


def box_measure(box: Box) -> float:
    return float(np.prod([hi - lo for lo, hi in box]))


def lambda_measure(r: Region) -> float:
    """Length (1D) or area (2D) of a region; 0 for the empty region."""
    return float(sum(box_measure(b) for b in r.boxes))


def region_union(a: Region, b: Region) -> Region:
    return _boolean(a, b, _union_intervals)


def region_intersect(a: Region, b: Region) -> Region:
    return _boolean(a, b, _intersect_intervals)


def region_difference(a: Region, b: Region) -> Region:
    return _boolean(a, b, _subtract_intervals)


def box_intersection(a: Box, b: Box) -> Box | None:
    """Intersection of two boxes, or None if it has zero measure."""
    out = tuple((max(p[0], q[0]), min(p[1], q[1])) for p, q in zip(a, b))
    if any(hi <= lo for lo, hi in out):
        return None
    return out


@dataclass(frozen=True)
class Cell:
    """One connected partition element: a single box of positive measure."""

    box: Box

    def __post_init__(self):
        box = _as_box(self.box, len(self.box))
        if len(box) not in (1, 2):
            raise ValueError("only 1 or 2 dimensions are supported")
        if box_measure(box) <= 0:
            raise ValueError(f"cell {box!r} has zero measure")
        object.__setattr__(self, "box", box)

    @property
    def dim(self) -> int:
        return len(self.box)

    @property
    def measure(self) -> float:
        return box_measure(self.box)

    @property
    def region(self) -> Region:
        return Region(self.dim, (self.box,), _canonical=True)


@dataclass(frozen=True)
class ParameterSpace:
    """Bounded box ``M`` with Lebesgue measure and a regular grid of boxes."""

    bounds: tuple[Interval, ...]
    resolution: tuple[int, ...]

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        resolution = tuple(int(n) for n in self.resolution)
        if len(bounds) not in (1, 2):
            raise ValueError("only 1 or 2 dimensions are supported")
        if len(resolution) != len(bounds):
            raise ValueError("resolution must give one count per axis")
        for lo, hi in bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError(f"invalid axis bounds ({lo}, {hi})")
        if any(n < 1 for n in resolution):
            raise ValueError("resolution entries must be positive")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "resolution", resolution)

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    @property
    def n_boxes(self) -> int:
        return int(np.prod(self.resolution))

    @cached_property
    def edges(self) -> tuple[np.ndarray, ...]:
        """Grid edges per axis; the last edge equals the upper bound exactly."""
        out = []
        for (lo, hi), n in zip(self.bounds, self.resolution):
            e = np.linspace(lo, hi, n + 1)
            e[0], e[-1] = lo, hi
            e.setflags(write=False)
            out.append(e)
        return tuple(out)

    @cached_property
    def box_volumes(self) -> np.ndarray:
        widths = [np.diff(e) for e in self.edges]
        vol = widths[0] if self.dimension == 1 else np.outer(widths[0], widths[1])
        vol.setflags(write=False)
        return vol

    @property
    def volume(self) -> float:
        return box_measure(self.bounds)

    @property
    def full(self) -> Region:
        return Region(self.dimension, (self.bounds,), _canonical=True)

    def contains(self, r: Region | Box) -> bool:
        boxes = r.boxes if isinstance(r, Region) else (r,)
        for b in boxes:
            if len(b) != self.dimension:
                return False
            for (lo, hi), (mlo, mhi) in zip(b, self.bounds):
                slack = _BOUNDS_SLACK * (mhi - mlo)
                if lo < mlo - slack or hi > mhi + slack:
                    return False
        return True

    def check(self, r: Region) -> Region:
        if r.dim != self.dimension or not self.contains(r):
            raise ValueError("region does not lie within the parameter space")
        return r

    def overlaps(self, box: Box) -> list[np.ndarray]:
        """Per-axis overlap lengths of ``box`` with every grid interval."""
        out = []
        for (lo, hi), e in zip(box, self.edges):
            out.append(np.clip(np.minimum(e[1:], hi) - np.maximum(e[:-1], lo), 0.0, None))
        return out

    def coverage(self, r: Region) -> np.ndarray:
        """Array of ``λ(grid box ∩ r)`` with the grid's shape."""
        cov = np.zeros(self.resolution)
        for b in r.boxes:
            ov = self.overlaps(b)
            cov += ov[0] if self.dimension == 1 else np.outer(ov[0], ov[1])
        return cov

    def grid_region(self, mask: np.ndarray) -> Region:
        """Union of the grid boxes selected by a boolean mask."""
        mask = np.asarray(mask, dtype=bool).reshape(self.resolution)
        if self.dimension == 1:
            e = self.edges[0]
            return Region(1, tuple(((e[i], e[i + 1]),) for i in np.flatnonzero(mask)))
        ex, ey = self.edges
        boxes = []
        for i in range(self.resolution[0]):
            col = mask[i]
            if not col.any():
                continue
            # runs of True along y
            d = np.diff(np.concatenate(([0], col.astype(np.int8), [0])))
            starts, stops = np.flatnonzero(d == 1), np.flatnonzero(d == -1)
            for s, t in zip(starts, stops):
                boxes.append(((ex[i], ex[i + 1]), (ey[s], ey[t])))
        return Region(2, tuple(boxes))

    def to_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "bounds": [list(b) for b in self.bounds],
            "resolution": list(self.resolution),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ParameterSpace:
        space = cls(tuple(tuple(b) for b in d["bounds"]), tuple(d["resolution"]))
        if "dimension" in d and int(d["dimension"]) != space.dimension:
            raise ValueError("dimension does not match bounds")
        return space
