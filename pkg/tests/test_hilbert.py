import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchcount.hilbert import (
    Projector,
    VectorTag,
    appendix_interval,
    appendix_theorem_check,
    classify_vector,
    equiamplitude_decompose,
    random_unitary,
)
from branchcount.iprob import IntervalProb, from_counts
from branchcount.scenarios import cross_basis_intervals


def test_singleton_decomposition():
    psi = np.array([1.0, 2j, -0.5])
    dec = equiamplitude_decompose(psi, 1)
    np.testing.assert_allclose(dec.parts[0], psi, atol=1e-15)


def test_two_dimensional_example():
    dec = equiamplitude_decompose([1.0, 0.0], 2)
    np.testing.assert_allclose(dec.parts[0], [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(dec.parts[1], [0.5, -0.5], atol=1e-15)
    np.testing.assert_allclose(np.linalg.norm(dec.parts, axis=1) ** 2, 0.5)
    assert dec.check()["ok"]


def test_any_real_plane_vector_splits_in_two():
    rng = np.random.default_rng(0)
    for _ in range(50):
        v = rng.standard_normal(2)
        dec = equiamplitude_decompose(v, 2, random_unitary(2, rng).real)
        c = dec.check()
        assert c["ok"], c


def test_decompose_rejects_bad_input():
    with pytest.raises(ValueError):
        equiamplitude_decompose([0.0, 0.0], 1)
    with pytest.raises(ValueError):
        equiamplitude_decompose([1.0, 0.0], 3)


def test_projector_validation():
    with pytest.raises(ValueError):
        Projector([[1, 1], [0, 0]])
    with pytest.raises(ValueError):
        Projector([[2, 0], [0, 0]])
    assert Projector.onto(np.array([[1.0], [1.0]])).rank == 1


def test_classify_examples():
    I, Z = Projector(np.eye(2)), Projector(np.zeros((2, 2)))
    phi = np.array([1.0, 1.0]) / np.sqrt(2)
    assert classify_vector(I, phi) == VectorTag.IN
    assert classify_vector(Z, phi) == VectorTag.OUT
    assert classify_vector(Projector(np.diag([1.0, 0.0])), phi) == VectorTag.INDEFINITE


def test_identity_projector():
    psi = np.array([0.3, 1j, 2.0, -1.0])
    dec = equiamplitude_decompose(psi, 4)
    assert appendix_interval(Projector(np.eye(4)), dec) == IntervalProb.exact(1)
    rep = appendix_theorem_check(Projector(np.eye(4)), psi, 3)
    assert rep.quotient == pytest.approx(1.0) and rep.passed


def test_interval_matches_per_part_oracle():
    rng = np.random.default_rng(12)
    for _ in range(30):
        d = int(rng.integers(2, 10))
        psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        dec = equiamplitude_decompose(psi, int(rng.integers(1, d + 1)), random_unitary(d, rng))
        k = int(rng.integers(0, d + 1))
        P = Projector.onto(random_unitary(d, rng)[:, :k])
        m = r = 0
        for v in dec.parts:
            Pv = P.matrix @ v
            nv = np.linalg.norm(v)
            if np.linalg.norm(Pv - v) <= 1e-10 * nv:
                m += 1
            elif np.linalg.norm(Pv) > 1e-10 * nv:
                r += 1
        assert appendix_interval(P, dec) == from_counts(m, r, dec.n)


def test_exact_case_gives_m_over_n():
    # projector onto the span of the first two parts: both In, others Out
    psi = np.array([1.0, 0.5, -0.25j, 2.0, 0.0, 1.0])
    dec = equiamplitude_decompose(psi, 6)
    P = Projector.onto(dec.parts[:2].T)
    rep = appendix_theorem_check(P, psi, 6)
    assert (rep.m, rep.r) == (2, 0)
    assert rep.quotient == pytest.approx(2 / 6, abs=1e-12)
    assert rep.interval == IntervalProb.exact(from_counts(2, 0, 6).lo)
    assert rep.passed


def test_containment_across_bases():
    rng = np.random.default_rng(13)
    d = 12
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    P = Projector.onto(random_unitary(d, rng)[:, :5])
    bases = [random_unitary(d, rng) for _ in range(6)]
    q = float(np.vdot(psi, P.matrix @ psi).real / np.vdot(psi, psi).real)
    ivs = cross_basis_intervals(psi, P, 8, bases)
    assert all(iv.contains_real(q, 1e-9) for iv in ivs)
    assert all(a.hi >= b.lo for a in ivs for b in ivs)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 24), st.data())
def test_theorem_holds(d, data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    n = data.draw(st.integers(1, d))
    rank = data.draw(st.integers(0, d))
    rng = np.random.default_rng(seed)
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    P = Projector.onto(random_unitary(d, rng)[:, :rank])
    rep = appendix_theorem_check(P, psi, n, random_unitary(d, rng))
    assert rep.passed, rep.to_dict()


def test_report_matches_schema(schema_validator):
    rng = np.random.default_rng(1)
    rep = appendix_theorem_check(Projector(np.diag([1.0, 0, 1, 0])), rng.standard_normal(4), 4)
    schema_validator(rep.to_dict(), "hilbert_report")
