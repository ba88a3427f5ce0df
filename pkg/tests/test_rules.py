from fractions import Fraction as F

import numpy as np
import pytest

from branchcount.field import WaveField, born_quantity
from branchcount.iprob import IntervalProb, from_counts
from branchcount.partitioning import (
    EQUIAMPLITUDE,
    equiamplitude_partition,
    equivolume_partition,
    from_boxes,
)
from branchcount.rules import (
    RuleVariant,
    Tag,
    born_containment_check,
    classify_cell,
    consistency_check,
    generalized_additivity_check,
    graham_frequency,
    interval_probability,
    tally,
)
from branchcount.scenarios import (
    FIG2_BETA,
    FIG2_BETA_DOUBLE_PRIME,
    FIG2_BETA_PRIME,
    FIG4_BETA,
    fig2_setup,
    fig3_setup,
    fig4_setup,
)
from branchcount.space import Cell, ParameterSpace, Region

SQUARE = ParameterSpace(((0.0, 1.0), (0.0, 1.0)), (4, 4))


@pytest.fixture
def flat_square():
    return WaveField(SQUARE, np.ones(16))


def test_cell_inside_beta_is_definite(flat_square):
    c = classify_cell(flat_square, Cell(((0.0, 0.25), (0.0, 0.25))), Region.box((0.0, 0.5), (0.0, 0.5)))
    assert c.tag == Tag.DEFINITE_IN
    assert c.w_in + c.w_out == pytest.approx(1 / 16, rel=1e-12)


def test_straddling_cell_is_indefinite(flat_square):
    c = classify_cell(flat_square, Cell(((0.0, 0.5), (0.0, 0.5))), Region.box((0.0, 0.3), (0.0, 1.0)))
    assert c.tag == Tag.INDEFINITE


def test_geometric_straddle_with_empty_inside_is_definite_out():
    # field vanishes on x < 0.5, so the part of beta inside the cell carries no weight
    f = WaveField(SQUARE, np.repeat([0, 0, 1, 1], 4))
    c = classify_cell(f, Cell(((0.25, 1.0), (0.0, 1.0))), Region.box((0.0, 0.5), (0.0, 1.0)))
    assert c.tag == Tag.DEFINITE_OUT
    assert c.w_in == 0.0


def test_zero_amplitude_cell():
    f = WaveField(SQUARE, np.repeat([0, 0, 1, 1], 4))
    c = classify_cell(f, Cell(((0.0, 0.5), (0.0, 1.0))), Region.box((0.0, 0.3), (0.0, 1.0)))
    assert c.tag == Tag.ZERO_AMPLITUDE


def test_whole_space_under_gibbs(flat_square):
    e = equiamplitude_partition(flat_square, 7)
    assert interval_probability(flat_square, e, SQUARE.full) == IntervalProb.exact(1)
    assert interval_probability(flat_square, e, Region.empty(2)) == IntervalProb.exact(0)


def test_rule_pairing_enforced(flat_square):
    ev = equivolume_partition(SQUARE, 4, field=flat_square)
    ea = equiamplitude_partition(flat_square, 4)
    with pytest.raises(ValueError):
        interval_probability(flat_square, ev, FIG2_BETA & SQUARE.full, RuleVariant.GIBBS)
    with pytest.raises(ValueError):
        interval_probability(flat_square, ea, SQUARE.full, RuleVariant.BOLTZMANN_ORIGINAL)
    with pytest.raises(ValueError):
        interval_probability(flat_square, ea, SQUARE.full, RuleVariant.GRAHAM_OUTCOME)


def test_fig3_intervals():
    f, first, second, beta = fig3_setup()
    orig = RuleVariant.BOLTZMANN_ORIGINAL
    assert interval_probability(f, first, beta, orig) == IntervalProb.exact(F(1, 3))
    assert interval_probability(f, second, beta, orig) == IntervalProb.exact(F(1, 2))
    res = consistency_check(f, [first, second], beta, orig)
    assert res.verdict == "inconsistent" and res.intersection is None
    j, i = res.witnesses  # smallest upper bound, largest lower bound
    assert res.intervals[j].hi < res.intervals[i].lo
    assert sorted(res.witnesses) == [0, 1]


def test_fig4_intervals():
    f, nine, eighteen = fig4_setup()
    res = consistency_check(f, [nine, eighteen], FIG4_BETA, RuleVariant.BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE)
    assert res.intervals == [IntervalProb.exact(1), IntervalProb.exact(F(2, 3))]
    assert res.verdict == "inconsistent"


def test_gibbs_family_consistent():
    rng = np.random.default_rng(8)
    f = WaveField(SQUARE, rng.uniform(0.1, 1, 16) * np.exp(1j * rng.uniform(0, 6, 16)))
    beta = Region(2, (((0.1, 0.7), (0.2, 0.9)), ((0.6, 0.95), (0.0, 0.3))))
    family = [equiamplitude_partition(f, n, n % 2) for n in (2, 3, 5, 8, 13, 21)]
    res = consistency_check(f, family, beta)
    assert res.consistent
    assert res.intersection.contains_real(born_quantity(f, beta), 1e-9)


def test_single_ensemble_is_trivially_consistent(flat_square):
    e = equiamplitude_partition(flat_square, 5)
    beta = Region.box((0.0, 0.5), (0.0, 1.0))
    res = consistency_check(f=flat_square, family=[e], beta=beta)
    assert res.consistent and res.intersection == res.intervals[0]


def test_fig2_additivity():
    f, e = fig2_setup()
    a = generalized_additivity_check(f, e, FIG2_BETA, FIG2_BETA_PRIME)
    assert a.mu_beta == from_counts(2, 10, 30)
    assert a.mu_beta_prime == from_counts(3, 6, 30)
    assert a.mu_union == from_counts(5, 16, 30) == a.sum
    assert a.exact_additivity
    b = generalized_additivity_check(f, e, FIG2_BETA, FIG2_BETA_DOUBLE_PRIME)
    assert b.mu_beta_prime == from_counts(3, 6, 30)
    assert b.mu_union == from_counts(7, 11, 30)
    assert b.subset_holds and not b.exact_additivity


def test_additivity_with_empty_partner(flat_square):
    e = equiamplitude_partition(flat_square, 6)
    rep = generalized_additivity_check(flat_square, e, Region.box((0.1, 0.6), (0.0, 1.0)), Region.empty(2))
    assert rep.exact_additivity


def test_additivity_needs_disjoint_macrostates(flat_square):
    e = equiamplitude_partition(flat_square, 6)
    with pytest.raises(ValueError):
        generalized_additivity_check(flat_square, e, Region.box((0, 0.6), (0, 1)), Region.box((0.5, 1), (0, 1)))


def test_graham_counts_outcomes():
    space = ParameterSpace(((0.0, 1.0),), (10,))
    halves = [Region.box((0.0, 0.5)), Region.box((0.5, 1.0))]
    skewed = WaveField(space, np.where(np.arange(10) < 5, np.sqrt(1.8), np.sqrt(0.2)))
    assert graham_frequency(skewed, halves, 0) == graham_frequency(skewed, halves, 1) == F(1, 2)
    one_sided = WaveField(space, np.where(np.arange(10) < 5, 1.0, 0.0))
    assert graham_frequency(one_sided, halves, 0) == 1
    assert graham_frequency(one_sided, halves, 1) == 0


def test_graham_needs_a_cover():
    space = ParameterSpace(((0.0, 1.0),), (10,))
    f = WaveField(space, np.ones(10))
    with pytest.raises(ValueError):
        graham_frequency(f, [Region.box((0.0, 0.5))], 0)


def test_exactly_partitioned_beta_matches_born():
    rng = np.random.default_rng(9)
    f = WaveField(SQUARE, rng.uniform(0.1, 1, 16))
    e = equiamplitude_partition(f, 12)
    chosen = [0, 3, 5, 7, 8]
    beta = Region(2, tuple(e.cells[i].box for i in chosen))
    rep = born_containment_check(f, e, beta)
    assert rep.interval == IntervalProb.exact(F(5, 12))
    assert rep.exact_partition and rep.exact_agreement
    assert abs(rep.born - 5 / 12) <= 1e-12


def test_born_containment_whole_space(flat_square):
    rep = born_containment_check(flat_square, equiamplitude_partition(flat_square, 3), SQUARE.full)
    assert rep.born == 1.0 and rep.interval == IntervalProb.exact(1) and rep.passed


def test_kolmogorov_within_one_ensemble():
    # macrostates built from whole cells: exact probabilities sum to one
    rng = np.random.default_rng(10)
    f = WaveField(SQUARE, rng.uniform(0.1, 1, 16))
    e = equiamplitude_partition(f, 9)
    groups = [[0, 1, 2], [3], [4, 5, 6, 7, 8]]
    total = IntervalProb.exact(0)
    for g in groups:
        total = total + interval_probability(f, e, Region(2, tuple(e.cells[i].box for i in g)))
    assert total == IntervalProb.exact(1)


def test_mixed_variant_counts(flat_square):
    # field vanishes on the top row, so the second row of a 2x2 grid is borderline
    f = WaveField(SQUARE, np.tile([1, 1, 1, 0], 4))
    e = equivolume_partition(SQUARE, 4, (2, 2), field=f)
    beta = Region.box((0.0, 0.5), (0.0, 1.0))
    t = tally(f, e, beta, RuleVariant.BOLTZMANN_SUPPORT_MIXED)
    assert (t.m, t.r, t.n, t.n_upper, t.borderline) == (2, 0, 4, 2, 2)
    assert t.interval() == IntervalProb(F(1, 2), F(1, 1))
    ex = tally(f, e, beta, RuleVariant.BOLTZMANN_SUPPORT_EXCLUDE_BORDERLINE)
    assert (ex.m, ex.n) == (1, 2)


def test_equiamplitude_ensemble_needs_positive_cells():
    f = WaveField(SQUARE, np.ones(16))
    e = from_boxes(SQUARE, [((0, 1), (0, 1))], EQUIAMPLITUDE, f)
    assert interval_probability(f, e, Region.box((0, 0.5), (0, 1))) == from_counts(0, 1, 1)
