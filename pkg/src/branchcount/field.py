"""Piecewise-constant complex wave fields on a parameter-space grid."""

from __future__ import annotations

import json
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .space import Box, ParameterSpace, Region, region_intersect

DEFAULT_EPS_AMP = 1e-12


@dataclass(frozen=True, eq=False)
class WaveField:
    """Complex amplitude that is constant on each grid box of ``space``.

    Samples are indexed like the grid: shape ``(nx,)`` in 1D and ``(nx, ny)``
    in 2D with axis 0 along x.  No normalisation is imposed; only the total
    weight must be positive.
    """

    space: ParameterSpace
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=complex)
        if s.size != self.space.n_boxes:
            raise ValueError(
                f"expected {self.space.n_boxes} samples, got {s.size}"
            )
        s = s.reshape(self.space.resolution)
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        if not self.total_weight > 0:
            raise ValueError("field has zero total weight")

    @classmethod
    def from_function(cls, space: ParameterSpace, fn) -> WaveField:
        """Sample ``fn`` at grid-box centres (``fn(x)`` or ``fn(x, y)``)."""
        centres = [0.5 * (e[1:] + e[:-1]) for e in space.edges]
        if space.dimension == 1:
            return cls(space, fn(centres[0]))
        X, Y = np.meshgrid(*centres, indexing="ij")
        return cls(space, fn(X, Y))

    @cached_property
    def density(self) -> np.ndarray:
        """``|ψ|²`` per grid box."""
        d = np.abs(self.samples) ** 2
        d.setflags(write=False)
        return d

    @cached_property
    def box_weights(self) -> np.ndarray:
        """``|ψ|² λ(box)`` per grid box."""
        w = self.density * self.space.box_volumes
        w.setflags(write=False)
        return w

    @cached_property
    def total_weight(self) -> float:
        return float(self.box_weights.sum())

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.total_weight))

    @cached_property
    def _grid(self) -> tuple[list[list[float]], list[np.ndarray]]:
        edges = [e.tolist() for e in self.space.edges]
        return edges, [np.diff(e) for e in self.space.edges]

    @cached_property
    def _box_cache(self) -> dict:
        return {}

    def box_weight(self, box: Box) -> float:
        """Exact integral of ``|ψ|²`` over one box, fractional grid boxes included."""
        key = tuple(box)
        cache = self._box_cache
        if key in cache:
            return cache[key]
        edges, widths = self._grid
        sl, ov = [], []
        for (lo, hi), e, w in zip(key, edges, widths):
            i0 = max(bisect_right(e, lo) - 1, 0)
            i1 = min(bisect_left(e, hi), len(e) - 1)
            if i1 <= i0 or hi <= lo:
                return 0.0
            seg = w[i0:i1].copy()
            seg[0] = min(e[i0 + 1], hi) - max(e[i0], lo)
            if i1 - 1 > i0:
                seg[-1] = min(e[i1], hi) - e[i1 - 1]
            sl.append(slice(i0, i1))
            ov.append(seg)
        d = self.density[tuple(sl)]
        out = float(d @ ov[0]) if len(ov) == 1 else float(ov[0] @ d @ ov[1])
        if len(cache) > 200_000:
            cache.clear()
        cache[key] = out
        return out

    def to_dict(self) -> dict:
        flat = self.samples.ravel()
        return {
            "space": self.space.to_dict(),
            "samples": [[float(z.real), float(z.imag)] for z in flat],
        }

    @classmethod
    def from_dict(cls, d: dict) -> WaveField:
        space = ParameterSpace.from_dict(d["space"])
        raw = np.asarray(d["samples"], dtype=float)
        if raw.ndim != 2 or raw.shape[1] != 2:
            raise ValueError("samples must be a list of [re, im] pairs")
        return cls(space, raw[:, 0] + 1j * raw[:, 1])

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> WaveField:
        return cls.from_dict(json.loads(Path(path).read_text()))


def weight(f: WaveField, r: Region) -> float:
    """Integral of ``|f|²`` over ``r``."""
    f.space.check(r)
    return float(sum(f.box_weight(b) for b in r.boxes))


def born_quantity(f: WaveField, beta: Region) -> float:
    """Born-rule value ``weight(f, beta) / weight(f, M)``."""
    total = f.total_weight
    if not total > 0:
        raise ValueError("field has zero total weight")
    return weight(f, beta) / total


@dataclass(frozen=True, eq=False)
class ProjectedField:
    """Finite sum of restricted fields ``Σ_t χ_{r_t} g_t`` on one grid.

    ``restrict`` produces a single term; ``+`` concatenates terms, so sums of
    restrictions stay exact under fractional grid boxes.
    """

    space: ParameterSpace
    terms: tuple[tuple[Region, np.ndarray], ...]

    def __add__(self, other: ProjectedField) -> ProjectedField:
        if other.space != self.space:
            raise ValueError("fields live on different spaces")
        return ProjectedField(self.space, self.terms + other.terms)

    def evaluate(self, points) -> np.ndarray:
        """Field values at points (shape ``(k,)`` in 1D, ``(k, 2)`` in 2D)."""
        pts = np.asarray(points, dtype=float).reshape(-1, self.space.dimension)
        idx = []
        for a, e in enumerate(self.space.edges):
            i = np.searchsorted(e, pts[:, a], side="right") - 1
            idx.append(np.clip(i, 0, len(e) - 2))
        out = np.zeros(len(pts), dtype=complex)
        for region, samples in self.terms:
            inside = np.zeros(len(pts), dtype=bool)
            for b in region.boxes:
                m = np.ones(len(pts), dtype=bool)
                for a, (lo, hi) in enumerate(b):
                    m &= (pts[:, a] >= lo) & (pts[:, a] < hi)
                inside |= m
            out[inside] += samples[tuple(i[inside] for i in idx)]
        return out

    @property
    def weight(self) -> float:
        return float(inner_product(self, self).real)


def restrict(f: WaveField, r: Region) -> ProjectedField:
    """The projected state ``χ_r f``."""
    f.space.check(r)
    return ProjectedField(f.space, ((r, f.samples),))


def _as_projected(g) -> ProjectedField:
    if isinstance(g, WaveField):
        return ProjectedField(g.space, ((g.space.full, g.samples),))
    return g


def inner_product(g, h) -> complex:
    """``⟨g|h⟩ = ∫ conj(g) h dλ`` for wave fields or projected fields."""
    g, h = _as_projected(g), _as_projected(h)
    if g.space != h.space:
        raise ValueError("fields live on different spaces")
    total = 0j
    for rg, sg in g.terms:
        for rh, sh in h.terms:
            cov = g.space.coverage(region_intersect(rg, rh))
            total += complex(np.sum(np.conj(sg) * sh * cov))
    return total


def support(f: WaveField, eps_amp: float = DEFAULT_EPS_AMP) -> Region:
    """Grid boxes whose weight exceeds ``eps_amp`` times the total weight."""
    if eps_amp < 0:
        raise ValueError("eps_amp must be non-negative")
    return f.space.grid_region(f.box_weights > eps_amp * f.total_weight)
