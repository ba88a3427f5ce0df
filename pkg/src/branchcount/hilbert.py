"""Equiamplitude decompositions of finite-dimensional states in arbitrary bases.

A state ``ψ`` is split into ``n`` mutually orthogonal vectors of equal norm
``‖ψ‖/√n`` that sum to ``ψ``.  The construction completes ``ψ/‖ψ‖`` to an
orthonormal set ``e_0..e_{n-1}`` and mixes it with discrete Fourier phases::

    φ_j = (‖ψ‖/n) Σ_k exp(2πi jk/n) e_k
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .iprob import IntervalProb

DEFAULT_TOL = 1e-10
_PARALLEL_THRESHOLD = 1e-8


def as_state(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).ravel()
    if v.size < 1:
        raise ValueError("state must have at least one component")
    if not np.all(np.isfinite(v)):
        raise ValueError("state must be finite")
    return v


class Projector:
    """Orthogonal projector: Hermitian and idempotent to ``tol``."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        P = np.asarray(matrix, dtype=complex)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ValueError("projector must be a square matrix")
        if np.max(np.abs(P - P.conj().T), initial=0.0) > tol:
            raise ValueError("projector is not Hermitian")
        if np.max(np.abs(P @ P - P), initial=0.0) > tol:
            raise ValueError("projector is not idempotent")
        self.matrix = P

    @classmethod
    def onto(cls, vectors) -> Projector:
        """Projector onto the span of the given column vectors."""
        V = np.asarray(vectors, dtype=complex)
        if V.ndim == 1:
            V = V[:, None]
        if V.shape[1] == 0:
            return cls(np.zeros((V.shape[0], V.shape[0]), dtype=complex))
        Q, R = np.linalg.qr(V)
        rank = int(np.sum(np.abs(np.diag(R)) > 1e-12 * max(1.0, np.abs(R).max())))
        Q = Q[:, :rank]
        return cls(Q @ Q.conj().T)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))

    def __matmul__(self, v):
        return self.matrix @ v

    def to_list(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]


@dataclass(frozen=True, eq=False)
class EnsembleDecomposition:
    psi: np.ndarray
    parts: np.ndarray  # shape (n, d)

    @property
    def n(self) -> int:
        return self.parts.shape[0]

    @property
    def amplitude(self) -> float:
        """Common norm ``ω_n = ‖ψ‖/√n``."""
        return float(np.linalg.norm(self.psi) / np.sqrt(self.n))

    def check(self, tol: float = DEFAULT_TOL) -> dict:
        """Deviations from the three decomposition premises, each scaled."""
        norm2 = float(np.vdot(self.psi, self.psi).real)
        gram = self.parts.conj() @ self.parts.T
        off = gram - np.diag(np.diag(gram))
        norms = np.linalg.norm(self.parts, axis=1)
        sum_dev = float(np.linalg.norm(self.parts.sum(axis=0) - self.psi) / np.sqrt(norm2))
        orth_dev = float(np.max(np.abs(off), initial=0.0) / norm2)
        norm_dev = float(np.max(np.abs(norms - self.amplitude)) / self.amplitude)
        return {
            "sum": sum_dev,
            "orthogonality": orth_dev,
            "equal_norm": norm_dev,
            "ok": max(sum_dev, orth_dev, norm_dev) <= tol,
        }


def orthonormal_completion(psi: np.ndarray, n: int, basis=None) -> np.ndarray:
    """Rows ``e_0 = ψ/‖ψ‖, e_1, ..., e_{n-1}`` from modified Gram-Schmidt over ``basis`` columns."""
    psi = as_state(psi)
    d = psi.size
    B = np.eye(d, dtype=complex) if basis is None else np.asarray(basis, dtype=complex)
    if B.shape != (d, d):
        raise ValueError(f"basis must be {d}x{d}")
    found = [psi / np.linalg.norm(psi)]
    for col in B.T:
        if len(found) == n:
            break
        v = col.astype(complex)
        scale = np.linalg.norm(v)
        if scale == 0:
            continue
        for e in found:
            v = v - np.vdot(e, v) * e
        nv = np.linalg.norm(v)
        if nv <= _PARALLEL_THRESHOLD * scale:
            continue
        v = v / nv
        # second pass keeps orthogonality at machine precision
        for e in found:
            v = v - np.vdot(e, v) * e
        found.append(v / np.linalg.norm(v))
    if len(found) < n:
        raise ValueError("basis does not span enough directions")
    return np.array(found)


def equiamplitude_decompose(psi, n: int, basis=None) -> EnsembleDecomposition:
    """Split ``psi`` into ``n`` orthogonal equal-norm parts summing to ``psi``."""
    psi = as_state(psi)
    d = psi.size
    norm = float(np.linalg.norm(psi))
    if norm == 0:
        raise ValueError("cannot decompose the zero vector")
    if not 1 <= n <= d:
        raise ValueError(f"need 1 <= n <= {d}, got n={n}")
    E = orthonormal_completion(psi, n, basis)
    k = np.arange(n)
    F = np.exp(2j * np.pi * np.outer(k, k) / n)
    parts = (norm / n) * (F @ E)
    return EnsembleDecomposition(psi, parts)


class VectorTag(str, Enum):
    IN = "In"
    OUT = "Out"
    INDEFINITE = "Indefinite"


def classify_vector(P: Projector, phi, tol: float = DEFAULT_TOL) -> VectorTag:
    phi = as_state(phi)
    if phi.size != P.dim:
        raise ValueError("dimension mismatch")
    nphi = np.linalg.norm(phi)
    Pphi = P @ phi
    if np.linalg.norm(Pphi - phi) <= tol * nphi:
        return VectorTag.IN
    if np.linalg.norm(Pphi) <= tol * nphi:
        return VectorTag.OUT
    return VectorTag.INDEFINITE


def appendix_interval(
    P: Projector, dec: EnsembleDecomposition, tol: float = DEFAULT_TOL
) -> IntervalProb:
    tags = [classify_vector(P, v, tol) for v in dec.parts]
    return IntervalProb.from_counts(
        tags.count(VectorTag.IN), tags.count(VectorTag.INDEFINITE), dec.n
    )


@dataclass
class TheoremReport:
    m: int
    r: int
    n: int
    quotient: float
    interval: IntervalProb
    contained: bool
    decomposition: dict
    in_term: float
    indefinite_term: float
    cross_terms: float
    bounds_hold: bool

    @property
    def passed(self) -> bool:
        return self.contained and self.bounds_hold and self.decomposition["ok"]

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "r": self.r,
            "n": self.n,
            "quotient": self.quotient,
            "interval": self.interval.to_dict(),
            "contained": self.contained,
            "margin_lo": self.quotient - float(self.interval.lo),
            "margin_hi": float(self.interval.hi) - self.quotient,
            "decomposition": self.decomposition,
            "in_term": self.in_term,
            "indefinite_term": self.indefinite_term,
            "cross_terms": self.cross_terms,
            "bounds_hold": self.bounds_hold,
            "passed": self.passed,
        }


def appendix_theorem_check(
    P: Projector,
    psi,
    n: int,
    basis=None,
    tol: float = DEFAULT_TOL,
    bound_tol: float = 1e-9,
) -> TheoremReport:
    """Decompose ``psi`` and verify the Rayleigh quotient lies in its interval.

    Also checks the term-by-term accounting: the in-class sum contributes
    ``m ω²``, the indefinite sum lies in ``[0, r ω²]``, and every mixed term
    vanishes.  ``bound_tol`` is relative to ``⟨ψ|ψ⟩``.
    """
    psi = as_state(psi)
    dec = equiamplitude_decompose(psi, n, basis)
    tags = [classify_vector(P, v, tol) for v in dec.parts]
    groups = {
        t: dec.parts[[i for i, s in enumerate(tags) if s == t]].sum(axis=0)
        for t in VectorTag
    }
    m = tags.count(VectorTag.IN)
    r = tags.count(VectorTag.INDEFINITE)
    norm2 = float(np.vdot(psi, psi).real)
    w2 = norm2 / n
    quotient = float(np.vdot(psi, P @ psi).real) / norm2
    iv = IntervalProb.from_counts(m, r, n)

    def form(a, b):
        return complex(np.vdot(groups[a], P @ groups[b]))

    in_term = form(VectorTag.IN, VectorTag.IN).real
    indef_term = form(VectorTag.INDEFINITE, VectorTag.INDEFINITE).real
    cross = max(
        abs(form(a, b))
        for a in VectorTag
        for b in VectorTag
        if (a, b) not in ((VectorTag.IN, VectorTag.IN), (VectorTag.INDEFINITE, VectorTag.INDEFINITE))
    )
    slack = bound_tol * norm2
    expectation = quotient * norm2
    bounds = (
        abs(in_term - m * w2) <= slack
        and -slack <= indef_term <= r * w2 + slack
        and cross <= slack
        and m * w2 - slack <= expectation <= (m + r) * w2 + slack
    )
    return TheoremReport(
        m=m,
        r=r,
        n=n,
        quotient=quotient,
        interval=iv,
        contained=iv.contains_real(quotient, bound_tol),
        decomposition=dec.check(tol),
        in_term=in_term,
        indefinite_term=indef_term,
        cross_terms=cross,
        bounds_hold=bounds,
    )


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph
