"""Microstate-counting rules: cell classification, interval probabilities,
consistency across ensembles, and the outcome-counting baseline.

Classification is by weight, not geometry: a cell counts as inside ``beta``
when (up to ``eps_amp * W``) none of its weight lies outside ``beta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import numpy as np

from .field import DEFAULT_EPS_AMP, WaveField, born_quantity, support
from .iprob import IntervalProb, intersect_all
from .partitioning import EQUIAMPLITUDE, EQUIVOLUME, Ensemble
from .space import Cell, Region, lambda_measure, region_difference

DEFAULT_TOL_CONTAIN = 1e-9


class Tag(str, Enum):
    DEFINITE_IN = "DefiniteIn"
    DEFINITE_OUT = "DefiniteOut"
    INDEFINITE = "Indefinite"
    ZERO_AMPLITUDE = "ZeroAmplitude"


class RuleVariant(str, Enum):
    GIBBS = "Gibbs"
    BOLTZMANN_ORIGINAL = "BoltzmannOriginal"
    BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE = "BoltzmannSupportExcludeBorderline"
    BOLTZMANN_SUPPORT_MIXED = "BoltzmannSupportMixed"
    GRAHAM_OUTCOME = "GrahamOutcome"


_BOLTZMANN = (
    RuleVariant.BOLTZMANN_ORIGINAL,
    RuleVariant.BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE,
    RuleVariant.BOLTZMANN_SUPPORT_MIXED,
)


def default_variant(e: Ensemble) -> RuleVariant:
    return RuleVariant.GIBBS if e.rule == EQUIAMPLITUDE else RuleVariant.BOLTZMANN_ORIGINAL


@dataclass(frozen=True)
class CellClassification:
    tag: Tag
    w_in: float
    w_out: float


def _box_array(beta: Region) -> np.ndarray:
    return np.array(beta.boxes, dtype=float).reshape(-1, beta.dim, 2)


def _weight_in(f: WaveField, box, beta_boxes: np.ndarray) -> float:
    # canonical boxes of beta are disjoint, so the pieces add up
    b = np.asarray(box)
    lo = np.maximum(beta_boxes[:, :, 0], b[:, 0])
    hi = np.minimum(beta_boxes[:, :, 1], b[:, 1])
    hits = np.flatnonzero(np.all(hi > lo, axis=1))
    return float(sum(f.box_weight(tuple(zip(lo[k], hi[k]))) for k in hits))


def _classify(f: WaveField, box, beta_boxes: np.ndarray, threshold: float) -> CellClassification:
    w_cell = f.box_weight(box)
    w_in = min(_weight_in(f, box, beta_boxes), w_cell)
    w_out = w_cell - w_in
    if w_cell <= threshold:
        tag = Tag.ZERO_AMPLITUDE
    elif w_out <= threshold:
        tag = Tag.DEFINITE_IN
    elif w_in <= threshold:
        tag = Tag.DEFINITE_OUT
    else:
        tag = Tag.INDEFINITE
    return CellClassification(tag, w_in, w_out)


def classify_cell(
    f: WaveField, cell: Cell, beta: Region, eps_amp: float = DEFAULT_EPS_AMP
) -> CellClassification:
    f.space.check(beta)
    return _classify(f, cell.box, _box_array(beta), eps_amp * f.total_weight)


@dataclass
class Tally:
    """Counts behind one interval probability.

    ``n`` is the denominator used for the lower bound and ``n_upper`` the one
    used for the upper bound; they differ only for the mixed support rule.
    """

    m: int
    r: int
    n: int
    n_upper: int
    zero: int = 0
    borderline: int = 0
    tags: list[Tag] = field(default_factory=list, repr=False)

    def interval(self) -> IntervalProb:
        if self.n == self.n_upper:
            return IntervalProb.from_counts(self.m, self.r, self.n)
        if self.n < 1 or self.n_upper < 1:
            raise ValueError("no cells left to count")
        return IntervalProb(Fraction(self.m, self.n), Fraction(self.m + self.r, self.n_upper))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "r": self.r,
            "n": self.n,
            "n_upper": self.n_upper,
            "zero_amplitude": self.zero,
            "borderline": self.borderline,
        }


def _check_pairing(e: Ensemble, variant: RuleVariant) -> None:
    if variant == RuleVariant.GRAHAM_OUTCOME:
        raise ValueError("the outcome-counting rule has no ensemble; use graham_frequency")
    if variant == RuleVariant.GIBBS and e.rule != EQUIAMPLITUDE:
        raise ValueError("Gibbs counting needs an equiamplitude ensemble")
    if variant in _BOLTZMANN and e.rule != EQUIVOLUME:
        raise ValueError(f"{variant.value} counting needs an equivolume ensemble")


def tally(
    f: WaveField,
    e: Ensemble,
    beta: Region,
    variant: RuleVariant | str | None = None,
    eps_amp: float = DEFAULT_EPS_AMP,
) -> Tally:
    variant = default_variant(e) if variant is None else RuleVariant(variant)
    _check_pairing(e, variant)
    if e.space != f.space:
        raise ValueError("ensemble and field live on different spaces")
    f.space.check(beta)
    boxes, threshold = _box_array(beta), eps_amp * f.total_weight
    tags = [_classify(f, c.box, boxes, threshold).tag for c in e.cells]

    if variant in (RuleVariant.GIBBS, RuleVariant.BOLTZMANN_ORIGINAL):
        live = [t for t in tags if t != Tag.ZERO_AMPLITUDE]
        m = live.count(Tag.DEFINITE_IN)
        r = live.count(Tag.INDEFINITE)
        n = len(live)
        if n == 0:
            raise ValueError("no cell carries amplitude")
        return Tally(m, r, n, n, zero=len(tags) - n, tags=tags)

    supp = support(f, eps_amp)
    interior = [
        t != Tag.ZERO_AMPLITUDE
        and lambda_measure(region_difference(c.region, supp)) <= 1e-12 * c.measure
        for c, t in zip(e.cells, tags)
    ]
    live = [t != Tag.ZERO_AMPLITUDE for t in tags]
    borderline = sum(lv and not inn for lv, inn in zip(live, interior))
    zero = len(tags) - sum(live)
    if variant == RuleVariant.BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE:
        kept = [t for t, inn in zip(tags, interior) if inn]
        n = len(kept)
        if n == 0:
            raise ValueError("no cell lies wholly inside the support")
        return Tally(kept.count(Tag.DEFINITE_IN), kept.count(Tag.INDEFINITE), n, n,
                     zero=zero, borderline=borderline, tags=tags)
    # mixed: numerators as in the original rule; borderline cells enter the
    # lower-bound denominator and are dropped from the upper-bound one
    counted = [t for t, lv in zip(tags, live) if lv]
    return Tally(
        counted.count(Tag.DEFINITE_IN),
        counted.count(Tag.INDEFINITE),
        len(counted),
        sum(interior),
        zero=zero,
        borderline=borderline,
        tags=tags,
    )


def interval_probability(
    f: WaveField,
    e: Ensemble,
    beta: Region,
    variant: RuleVariant | str | None = None,
    eps_amp: float = DEFAULT_EPS_AMP,
) -> IntervalProb:
    """Interval probability of ``beta`` relative to ensemble ``e``."""
    return tally(f, e, beta, variant, eps_amp).interval()


@dataclass
class ConsistencyReport:
    consistent: bool
    intervals: list[IntervalProb]
    intersection: IntervalProb | None
    witnesses: tuple[int, int] | None = None

    @property
    def verdict(self) -> str:
        return "consistent" if self.consistent else "inconsistent"

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "intervals": [iv.to_dict() for iv in self.intervals],
            "intersection": None if self.intersection is None else self.intersection.to_dict(),
            "witnesses": None if self.witnesses is None else list(self.witnesses),
        }


def consistency_check(
    f: WaveField,
    family: Sequence[Ensemble],
    beta: Region,
    variants: Sequence[RuleVariant | str | None] | RuleVariant | str | None = None,
    eps_amp: float = DEFAULT_EPS_AMP,
) -> ConsistencyReport:
    """Do the interval probabilities of ``beta`` over ``family`` share a point?

    When they do not, ``witnesses`` names the ensemble with the largest lower
    bound and the one with the smallest upper bound.
    """
    family = list(family)
    if not family:
        raise ValueError("need at least one ensemble")
    if variants is None or isinstance(variants, (str, RuleVariant)):
        variants = [variants] * len(family)
    if len(variants) != len(family):
        raise ValueError("one variant per ensemble")
    intervals = [interval_probability(f, e, beta, v, eps_amp) for e, v in zip(family, variants)]
    common = intersect_all(intervals)
    witnesses = None
    if common is None:
        i = max(range(len(intervals)), key=lambda k: intervals[k].lo)
        j = min(range(len(intervals)), key=lambda k: intervals[k].hi)
        witnesses = (j, i)
    return ConsistencyReport(common is not None, intervals, common, witnesses)


@dataclass
class AdditivityReport:
    mu_beta: IntervalProb
    mu_beta_prime: IntervalProb
    mu_union: IntervalProb
    subset_holds: bool
    exact_additivity: bool
    shared_cells: int

    @property
    def sum(self) -> IntervalProb:
        return self.mu_beta + self.mu_beta_prime

    def to_dict(self) -> dict:
        return {
            "mu_beta": self.mu_beta.to_dict(),
            "mu_beta_prime": self.mu_beta_prime.to_dict(),
            "mu_union": self.mu_union.to_dict(),
            "sum": self.sum.to_dict(),
            "subset_holds": self.subset_holds,
            "exact_additivity": self.exact_additivity,
            "shared_cells": self.shared_cells,
        }


def generalized_additivity_check(
    f: WaveField,
    e: Ensemble,
    beta: Region,
    beta_prime: Region,
    variant: RuleVariant | str | None = None,
    eps_amp: float = DEFAULT_EPS_AMP,
) -> AdditivityReport:
    """Check ``μ(β ∪ β') ⊆ μ(β) + μ(β')`` for disjoint macrostates.

    ``shared_cells`` counts cells carrying weight in both ``β`` and ``β'``;
    when it is zero the relation must hold with equality.
    """
    if lambda_measure(beta & beta_prime) > 0:
        raise ValueError("macrostates must be disjoint")
    mu_b = interval_probability(f, e, beta, variant, eps_amp)
    mu_bp = interval_probability(f, e, beta_prime, variant, eps_amp)
    mu_u = interval_probability(f, e, beta | beta_prime, variant, eps_amp)
    threshold = eps_amp * f.total_weight
    b, bp = _box_array(beta), _box_array(beta_prime)
    shared = sum(
        _weight_in(f, c.box, b) > threshold and _weight_in(f, c.box, bp) > threshold
        for c in e.cells
    )
    total = mu_b + mu_bp
    return AdditivityReport(
        mu_beta=mu_b,
        mu_beta_prime=mu_bp,
        mu_union=mu_u,
        subset_holds=mu_u.issubset(total),
        exact_additivity=mu_u == total,
        shared_cells=shared,
    )


def graham_frequency(
    f: WaveField,
    outcomes: Sequence[Region],
    query: int,
    eps_amp: float = DEFAULT_EPS_AMP,
) -> Fraction:
    """Outcome-counting frequency: each outcome with nonzero weight counts once.

    ``outcomes`` must be disjoint and cover ``M``; ``query`` indexes the
    outcome whose frequency is returned.
    """
    outcomes = list(outcomes)
    measures = sum(lambda_measure(o) for o in outcomes)
    union = outcomes[0]
    for o in outcomes[1:]:
        union = union | o
    if abs(lambda_measure(union) - measures) > 1e-12 * f.space.volume:
        raise ValueError("outcomes overlap")
    if abs(lambda_measure(union) - f.space.volume) > 1e-12 * f.space.volume:
        raise ValueError("outcomes do not cover the space")
    threshold = eps_amp * f.total_weight
    live = [sum(f.box_weight(b) for b in o.boxes) > threshold for o in outcomes]
    if not live[query]:
        return Fraction(0)
    return Fraction(1, sum(live))


@dataclass
class ContainmentReport:
    interval: IntervalProb
    born: float
    contained: bool
    exact_partition: bool
    exact_agreement: bool | None
    margin_lo: float
    margin_hi: float
    tally: Tally

    @property
    def passed(self) -> bool:
        return self.contained and self.exact_agreement is not False

    def to_dict(self) -> dict:
        return {
            "interval": self.interval.to_dict(),
            "born": self.born,
            "contained": self.contained,
            "exact_partition": self.exact_partition,
            "exact_agreement": self.exact_agreement,
            "margin_lo": self.margin_lo,
            "margin_hi": self.margin_hi,
            "tally": self.tally.to_dict(),
            "passed": self.passed,
        }


def born_containment_check(
    f: WaveField,
    e: Ensemble,
    beta: Region,
    tol: float = DEFAULT_TOL_CONTAIN,
    eps_amp: float = DEFAULT_EPS_AMP,
    exact_tol: float = 1e-12,
) -> ContainmentReport:
    """Is the Born value of ``beta`` inside its Gibbs interval probability?

    When ``beta`` is exactly partitioned (no indefinite cells) the counted
    fraction must also equal the Born value to ``exact_tol``.
    """
    if e.rule != EQUIAMPLITUDE:
        raise ValueError("containment is checked for equiamplitude ensembles")
    t = tally(f, e, beta, RuleVariant.GIBBS, eps_amp)
    iv = t.interval()
    born = born_quantity(f, beta)
    exact = t.r == 0
    agreement = abs(t.m / t.n - born) <= exact_tol if exact else None
    return ContainmentReport(
        interval=iv,
        born=born,
        contained=iv.contains_real(born, tol),
        exact_partition=exact,
        exact_agreement=agreement,
        margin_lo=born - float(iv.lo),
        margin_hi=float(iv.hi) - born,
        tally=t,
    )
