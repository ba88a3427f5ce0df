import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchcount.space import (
    Cell,
    ParameterSpace,
    Region,
    canonicalize,
    lambda_measure,
    region_difference,
    region_intersect,
    region_union,
)

coord = st.integers(0, 40).map(lambda k: k / 40)


@st.composite
def boxes2d(draw):
    x0, x1 = sorted((draw(coord), draw(coord)))
    y0, y1 = sorted((draw(coord), draw(coord)))
    return ((x0, x1), (y0, y1))


regions2d = st.lists(boxes2d(), max_size=4).map(lambda bs: Region(2, tuple(bs)))


def test_interval_length():
    assert lambda_measure(Region.box((0.25, 0.75))) == 0.5


def test_empty_region_has_zero_measure():
    assert lambda_measure(Region.empty(1)) == 0.0
    assert Region.empty(2).is_empty


def test_two_small_squares():
    r = Region(2, (((0.1, 0.2), (0.1, 0.2)), ((0.5, 0.6), (0.7, 0.8))))
    # hand expansion: 0.1*0.1 + 0.1*0.1
    assert lambda_measure(r) == pytest.approx(0.02, rel=1e-12)


def test_abutting_intervals():
    a, b = Region.box((0.0, 0.5)), Region.box((0.5, 1.0))
    assert region_union(a, b) == Region.box((0.0, 1.0))
    assert region_intersect(a, b).is_empty


def test_self_difference_is_empty():
    a = Region(2, (((0, 1), (0, 1)), ((2, 3), (0, 0.5))))
    assert region_difference(a, a).is_empty


def test_overlap_measure():
    assert lambda_measure(Region.box((0.0, 0.6)) & Region.box((0.4, 1.0))) == pytest.approx(0.2)


def test_degenerate_boxes_dropped():
    r = Region(2, (((0, 1), (0.5, 0.5)), ((0.3, 0.3), (0, 1))))
    assert r.is_empty


def test_canonical_boxes_do_not_overlap():
    r = Region(2, (((0, 2), (0, 2)), ((1, 3), (1, 3)), ((0.5, 2.5), (0.5, 1.5))))
    bs = r.boxes
    for i in range(len(bs)):
        for j in range(i + 1, len(bs)):
            ov = region_intersect(Region(2, (bs[i],)), Region(2, (bs[j],)))
            assert lambda_measure(ov) == 0
    # two 2x2 squares sharing a unit square, plus the 0.5x0.5 corner the third box adds
    assert lambda_measure(r) == pytest.approx(4 + 4 - 1 + 0.25)


def test_literal_round_trip():
    lit = [[[0.0, 1.0], [0.0, 0.5]], [[2.0, 3.0], [1.0, 2.0]]]
    assert Region.from_literal(lit).to_literal() == lit


def test_cell_rejects_zero_measure():
    with pytest.raises(ValueError):
        Cell(((0.0, 0.0), (0.0, 1.0)))
    assert Cell(((0.0, 0.5),)).measure == 0.5


@pytest.mark.parametrize("bounds", [((1.0, 1.0),), ((0.0, np.inf),), ((2.0, 1.0),)])
def test_space_rejects_bad_bounds(bounds):
    with pytest.raises(ValueError):
        ParameterSpace(bounds, (4,))


def test_space_volume_and_edges():
    s = ParameterSpace(((0.0, 10.0), (0.0, 3.0)), (20, 6))
    assert s.volume == 30.0
    assert s.edges[0][-1] == 10.0 and s.edges[1][-1] == 3.0
    assert s.box_volumes.sum() == pytest.approx(30.0, rel=1e-12)
    assert ParameterSpace.from_dict(s.to_dict()) == s


def test_region_outside_space_rejected():
    s = ParameterSpace(((0.0, 1.0),), (4,))
    with pytest.raises(ValueError):
        s.check(Region.box((0.5, 1.5)))


@settings(max_examples=300, deadline=None)
@given(regions2d, regions2d)
def test_inclusion_exclusion(a, b):
    lhs = lambda_measure(a | b) + lambda_measure(a & b)
    assert lhs == pytest.approx(lambda_measure(a) + lambda_measure(b), rel=1e-12, abs=1e-15)


@settings(max_examples=300, deadline=None)
@given(regions2d, regions2d)
def test_disjoint_additivity(a, b):
    b = b - a
    assert lambda_measure(a | b) == pytest.approx(
        lambda_measure(a) + lambda_measure(b), rel=1e-12, abs=1e-15
    )


@settings(max_examples=200, deadline=None)
@given(st.lists(boxes2d(), max_size=5))
def test_canonicalize_idempotent(bs):
    once = canonicalize(2, bs)
    assert canonicalize(2, once) == once


@settings(max_examples=200, deadline=None)
@given(regions2d, regions2d)
def test_difference_and_intersection_split(a, b):
    assert lambda_measure(a - b) + lambda_measure(a & b) == pytest.approx(
        lambda_measure(a), rel=1e-12, abs=1e-15
    )


def test_inclusion_exclusion_1000_random_pairs():
    rng = np.random.default_rng(7)

    def rand_region():
        k = rng.integers(1, 5)
        out = []
        for _ in range(k):
            x = np.sort(rng.uniform(0, 1, 2))
            y = np.sort(rng.uniform(0, 1, 2))
            out.append(((x[0], x[1]), (y[0], y[1])))
        return Region(2, tuple(out))

    for _ in range(1000):
        a, b = rand_region(), rand_region()
        lhs = lambda_measure(a | b) + lambda_measure(a & b)
        assert abs(lhs - lambda_measure(a) - lambda_measure(b)) <= 1e-12 * max(lhs, 1e-300)
