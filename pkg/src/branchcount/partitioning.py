"""Equivolume and equiamplitude partitions of a parameter space into cells.

Equivolume ensembles split ``M`` into cells of equal measure.  Equiamplitude
ensembles split it into cells of equal weight ``W/n``; in 1D the cut points are
quantiles of the cumulative weight, in 2D cells come from recursive weight
bisection with alternating axes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .field import WaveField
from .space import Box, Cell, ParameterSpace, box_measure

EQUIVOLUME = "equivolume"
EQUIAMPLITUDE = "equiamplitude"
RULES = (EQUIVOLUME, EQUIAMPLITUDE)

DEFAULT_N_MAX = 4096
_PLATEAU_RTOL = 1e-13


@dataclass(frozen=True, eq=False)
class Ensemble:
    """A partition of ``M`` into cells together with its counting-rule tag."""

    space: ParameterSpace
    cells: tuple[Cell, ...]
    rule: str
    field: WaveField | None = None

    def __post_init__(self):
        if self.rule not in RULES:
            raise ValueError(f"unknown rule {self.rule!r}")
        cells = tuple(c if isinstance(c, Cell) else Cell(tuple(c)) for c in self.cells)
        if not cells:
            raise ValueError("an ensemble needs at least one cell")
        if any(c.dim != self.space.dimension for c in cells):
            raise ValueError("cell dimension does not match the space")
        if self.rule == EQUIAMPLITUDE and self.field is None:
            raise ValueError("an equiamplitude ensemble needs its field")
        if self.field is not None and self.field.space != self.space:
            raise ValueError("field lives on a different space")
        object.__setattr__(self, "cells", cells)

    @property
    def n(self) -> int:
        return len(self.cells)

    def cell_measures(self) -> np.ndarray:
        return np.array([c.measure for c in self.cells])

    def cell_weights(self, f: WaveField | None = None) -> np.ndarray:
        f = f or self.field
        if f is None:
            raise ValueError("no field attached to the ensemble")
        return np.array([f.box_weight(c.box) for c in self.cells])

    def to_dict(self) -> dict:
        d = {
            "rule": self.rule,
            "n": self.n,
            "space": self.space.to_dict(),
            "cells": [],
        }
        weights = self.cell_weights() if self.field is not None else [None] * self.n
        for c, w in zip(self.cells, weights):
            entry = {"box": [list(iv) for iv in c.box], "measure": c.measure}
            if w is not None:
                entry["weight"] = float(w)
            d["cells"].append(entry)
        return d

    @classmethod
    def from_dict(cls, d: dict, field: WaveField | None = None) -> Ensemble:
        space = ParameterSpace.from_dict(d["space"])
        cells = tuple(Cell(tuple(tuple(iv) for iv in c["box"])) for c in d["cells"])
        if "n" in d and int(d["n"]) != len(cells):
            raise ValueError("cell count does not match 'n'")
        return cls(space, cells, d["rule"], field)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path, field: WaveField | None = None) -> Ensemble:
        return cls.from_dict(json.loads(Path(path).read_text()), field)


def _check_n(n: int, n_max: int) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"ensemble size must be a positive integer, got {n!r}")
    if n > n_max:
        raise ValueError(f"ensemble size {n} exceeds the maximum {n_max}")
    return int(n)


def _even_cuts(lo: float, hi: float, k: int) -> list[float]:
    cuts = [lo + (hi - lo) * i / k for i in range(k + 1)]
    cuts[0], cuts[-1] = lo, hi
    return cuts


def _replace(box: Box, axis: int, iv: tuple[float, float]) -> Box:
    return tuple(iv if a == axis else b for a, b in enumerate(box))


def _volume_bisect(box: Box, n: int, axis: int, out: list[Box]) -> None:
    if n == 1:
        out.append(box)
        return
    k = n // 2
    lo, hi = box[axis]
    cut = lo + (hi - lo) * k / n
    nxt = (axis + 1) % len(box)
    _volume_bisect(_replace(box, axis, (lo, cut)), k, nxt, out)
    _volume_bisect(_replace(box, axis, (cut, hi)), n - k, nxt, out)


def equivolume_partition(
    space: ParameterSpace,
    n: int,
    layout: str | tuple[int, int] = "slabs",
    *,
    axis: int = 0,
    field: WaveField | None = None,
    n_max: int = DEFAULT_N_MAX,
) -> Ensemble:
    """Split ``M`` into ``n`` cells of measure ``λ(M)/n``.

    ``layout`` is ``"slabs"`` (parallel slabs across ``axis``), ``"bisect"``
    (recursive half-splits by volume, alternating axes) or a ``(nx, ny)`` grid
    with ``nx * ny == n``.  It is ignored in 1D.
    """
    n = _check_n(n, n_max)
    if space.dimension == 1:
        cuts = _even_cuts(*space.bounds[0], n)
        boxes = [((a, b),) for a, b in zip(cuts[:-1], cuts[1:])]
    elif layout == "slabs":
        cuts = _even_cuts(*space.bounds[axis], n)
        boxes = [_replace(space.bounds, axis, (a, b)) for a, b in zip(cuts[:-1], cuts[1:])]
    elif layout == "bisect":
        boxes = []
        _volume_bisect(space.bounds, n, axis, boxes)
    else:
        nx, ny = (int(v) for v in layout)
        if nx * ny != n:
            raise ValueError(f"grid layout {nx}x{ny} does not give {n} cells")
        xs = _even_cuts(*space.bounds[0], nx)
        ys = _even_cuts(*space.bounds[1], ny)
        boxes = [
            ((xs[i], xs[i + 1]), (ys[j], ys[j + 1])) for j in range(ny) for i in range(nx)
        ]
    return Ensemble(space, tuple(Cell(b) for b in boxes), EQUIVOLUME, field)


def invert_cumulative(edges: np.ndarray, masses: np.ndarray, target: float) -> float:
    """Leftmost ``x`` with cumulative mass equal to ``target``.

    ``masses[i]`` is spread uniformly over ``[edges[i], edges[i+1]]``, so the
    cumulative function is continuous, monotone and piecewise linear.  Flat
    stretches resolve to their left end.
    """
    cum = np.concatenate(([0.0], np.cumsum(masses)))
    # a level that rounding lifts just above a plateau still belongs to it
    slack = _PLATEAU_RTOL * cum[-1]
    if target <= 0:
        return float(edges[0])
    if target >= cum[-1] - slack:
        # leftmost point where the total is reached
        last = int(np.flatnonzero(masses > 0)[-1]) if np.any(masses > 0) else 0
        return float(edges[last + 1])
    i = int(np.searchsorted(cum[1:], target - slack, side="left"))
    if masses[i] <= 0:
        return float(edges[i])
    frac = (target - cum[i]) / masses[i]
    x = edges[i] + frac * (edges[i + 1] - edges[i])
    return float(min(max(x, edges[i]), edges[i + 1]))


def _clipped_edges(e: np.ndarray, lo: float, hi: float) -> tuple[np.ndarray, slice]:
    i0 = max(int(np.searchsorted(e, lo, side="right")) - 1, 0)
    i1 = min(int(np.searchsorted(e, hi, side="left")), len(e) - 1)
    edges = e[i0:i1 + 1].copy()
    edges[0], edges[-1] = lo, hi
    return edges, slice(i0, i1)


def _marginal(f: WaveField, box: Box, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """Edges and per-segment weights of ``f`` inside ``box`` along ``axis``."""
    e_ax, sl_ax = _clipped_edges(f.space.edges[axis], *box[axis])
    lengths = np.diff(e_ax)
    d = f.density
    if f.space.dimension == 1:
        return e_ax, d[sl_ax] * lengths
    other = 1 - axis
    e_o, sl_o = _clipped_edges(f.space.edges[other], *box[other])
    ov = np.diff(e_o)
    sub = d[sl_ax, sl_o] if axis == 0 else d[sl_o, sl_ax].T
    return e_ax, (sub @ ov) * lengths


def _amplitude_bisect(
    f: WaveField, box: Box, n: int, axis: int, out: list[Box]
) -> None:
    if n == 1:
        out.append(box)
        return
    edges, masses = _marginal(f, box, axis)
    total = float(masses.sum())
    if not total > 0:
        raise ValueError(f"zero-weight slab {box!r} cannot carry {n} cells")
    k = n // 2
    cut = invert_cumulative(edges, masses, total * k / n)
    lo, hi = box[axis]
    if not lo < cut < hi:
        raise ValueError(f"degenerate split of slab {box!r}")
    nxt = (axis + 1) % len(box)
    _amplitude_bisect(f, _replace(box, axis, (lo, cut)), k, nxt, out)
    _amplitude_bisect(f, _replace(box, axis, (cut, hi)), n - k, nxt, out)


def equiamplitude_cells(f: WaveField, box: Box, n: int, axis: int = 0) -> list[Box]:
    """Equal-weight rectangular cells covering ``box`` (a sub-box of ``M``)."""
    if f.space.dimension == 1:
        edges, masses = _marginal(f, box, 0)
        total = float(masses.sum())
        if not total > 0:
            raise ValueError("zero-weight region cannot be partitioned")
        lo, hi = box[0]
        cuts = [lo] + [invert_cumulative(edges, masses, total * k / n) for k in range(1, n)] + [hi]
        if any(b <= a for a, b in zip(cuts[:-1], cuts[1:])):
            raise ValueError("degenerate cut points")
        return [((a, b),) for a, b in zip(cuts[:-1], cuts[1:])]
    out: list[Box] = []
    _amplitude_bisect(f, box, n, axis, out)
    return out


def equiamplitude_partition(
    f: WaveField, n: int, axis: int = 0, *, n_max: int = DEFAULT_N_MAX
) -> Ensemble:
    """Split ``M`` into ``n`` connected cells of weight ``W/n`` each.

    ``axis`` picks the first split direction in 2D; later splits alternate.
    """
    n = _check_n(n, n_max)
    if axis not in range(f.space.dimension):
        raise ValueError(f"invalid split axis {axis}")
    boxes = equiamplitude_cells(f, f.space.bounds, n, axis)
    return Ensemble(f.space, tuple(Cell(b) for b in boxes), EQUIAMPLITUDE, f)


@dataclass
class ValidationReport:
    n: int
    rule: str
    max_volume_deviation: float
    max_weight_deviation: float | None
    coverage_gap: float
    max_overlap: float
    outside_space: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rule": self.rule,
            "ok": self.ok,
            "max_volume_deviation": self.max_volume_deviation,
            "max_weight_deviation": self.max_weight_deviation,
            "coverage_gap": self.coverage_gap,
            "max_overlap": self.max_overlap,
            "outside_space": self.outside_space,
            "failures": list(self.failures),
        }


def _pairwise_overlaps(boxes: np.ndarray, chunk: int = 512) -> tuple[float, float]:
    """Largest and summed measure of pairwise box intersections."""
    n = len(boxes)
    worst = total = 0.0
    for s in range(0, n, chunk):
        a = boxes[s:s + chunk]
        lo = np.maximum(a[:, None, :, 0], boxes[None, :, :, 0])
        hi = np.minimum(a[:, None, :, 1], boxes[None, :, :, 1])
        ov = np.prod(np.clip(hi - lo, 0.0, None), axis=-1)
        rows = np.arange(s, s + len(a))
        ov[np.arange(len(a)), rows] = 0.0
        worst = max(worst, float(ov.max(initial=0.0)))
        total += float(ov.sum()) / 2
    return worst, total


def validate(
    e: Ensemble,
    *,
    volume_rtol: float = 1e-12,
    weight_rtol: float = 1e-9,
    overlap_rtol: float = 1e-12,
    n_max: int = DEFAULT_N_MAX,
) -> ValidationReport:
    """Check the partition invariants of ``e`` and report every deviation."""
    space = e.space
    vol_m = space.volume
    boxes = np.array([c.box for c in e.cells], dtype=float)
    measures = e.cell_measures()
    worst_overlap, summed_overlap = _pairwise_overlaps(boxes)
    gap = vol_m - float(measures.sum()) + summed_overlap
    outside = sum(not space.contains(c.box) for c in e.cells)
    vol_dev = float(np.max(np.abs(measures - vol_m / e.n)))

    failures = []
    if e.n > n_max:
        failures.append(f"n={e.n} exceeds n_max={n_max}")
    if outside:
        failures.append(f"{outside} cell(s) outside the space")
    if worst_overlap > overlap_rtol * vol_m:
        failures.append(f"cells overlap (max {worst_overlap:.3g})")
    if abs(gap) > overlap_rtol * vol_m:
        failures.append(f"coverage gap {gap:.3g}")
    if e.rule == EQUIVOLUME and vol_dev > volume_rtol * vol_m:
        failures.append(f"unequal volumes (max deviation {vol_dev:.3g})")

    weight_dev = None
    if e.field is not None:
        weights = e.cell_weights()
        total = e.field.total_weight
        weight_dev = float(np.max(np.abs(weights - total / e.n)))
        if e.rule == EQUIAMPLITUDE and weight_dev > weight_rtol * total:
            failures.append(f"unequal weights (max deviation {weight_dev:.3g})")
    return ValidationReport(
        n=e.n,
        rule=e.rule,
        max_volume_deviation=vol_dev,
        max_weight_deviation=weight_dev,
        coverage_gap=gap,
        max_overlap=worst_overlap,
        outside_space=outside,
        failures=failures,
    )


def from_boxes(
    space: ParameterSpace,
    boxes: Sequence[Box],
    rule: str,
    field: WaveField | None = None,
) -> Ensemble:
    """Hand-built ensemble from explicit boxes (no invariant checks; see ``validate``)."""
    return Ensemble(space, tuple(Cell(tuple(tuple(iv) for iv in b)) for b in boxes), rule, field)
