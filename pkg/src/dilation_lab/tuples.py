"""Operator tuples and their pointwise predicates.

An :class:`OperatorTuple` is n complex matrices acting on one
finite-dimensional space. Everything here is immutable and pure, so
values are safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._linalg import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    Array,
    as_complex,
    hermitize,
    numerical_rank,
    opnorm,
    psd_sqrt_clamped,
)
from .errors import PreconditionError


@dataclass(frozen=True, eq=False)
class OperatorTuple:
    """n operators on a dim-dimensional space, stored as an (n, dim, dim)
    complex array. Word letters are 1-based throughout the toolkit."""

    mats: Array

    def __post_init__(self):
        mats = as_complex(self.mats)
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise ValueError(f"expected (n, dim, dim) matrices, got shape {mats.shape}")
        if mats.shape[0] < 1 or mats.shape[1] < 0:
            raise ValueError(f"need n >= 1 operators, got shape {mats.shape}")
        if not np.all(np.isfinite(mats.view(np.float64))):
            raise ValueError("matrices contain non-finite entries")
        mats.setflags(write=False)
        object.__setattr__(self, "mats", mats)

    @property
    def n(self) -> int:
        return self.mats.shape[0]

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    @classmethod
    def from_matrices(cls, matrices: Sequence) -> "OperatorTuple":
        return cls(np.stack([as_complex(m) for m in matrices]))

    def adjoints(self) -> Array:
        return self.mats.conj().transpose(0, 2, 1)


def zero_tuple(n: int, dim: int) -> OperatorTuple:
    return OperatorTuple(np.zeros((n, dim, dim), dtype=np.complex128))


def scalar_tuple(values: Sequence[complex]) -> OperatorTuple:
    """The n scalars as a tuple of 1x1 operators."""
    return OperatorTuple(np.array(values, dtype=np.complex128).reshape(-1, 1, 1))


def noncommuting_cuntz_pair() -> OperatorTuple:
    """The 2x2 pair of matrix units (upper and lower shift): a row
    contraction with T1 T1* + T2 T2* = I and trivial commuting piece."""
    r1 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
    r2 = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)
    return OperatorTuple.from_matrices([r1, r2])


def row_sum(t: OperatorTuple) -> Array:
    """Sum of T_i T_i*."""
    return np.einsum("kij,klj->il", t.mats, t.mats.conj())


def is_row_contraction(t: OperatorTuple, tol: float = DEFAULT_TOL) -> bool:
    gap = row_sum(t) - np.eye(t.dim)
    evals = np.linalg.eigvalsh(hermitize(gap))
    return bool(evals.size == 0 or evals[-1] <= tol)


@dataclass(frozen=True)
class DefectData:
    """Defect operator (I - sum T_i T_i*)^(1/2) with its rank and an
    orthonormal frame of its range."""

    delta: Array
    defect_rank: int
    defect_frame: Array
    eigenvalues: Array
    unstable_rank: bool = False


def defect(t: OperatorTuple, tol: float = DEFAULT_TOL,
           rank_tol: float = DEFAULT_RANK_TOL) -> DefectData:
    if not is_row_contraction(t, tol):
        raise PreconditionError("defect requires a row contraction")
    gap = np.eye(t.dim) - row_sum(t)
    delta, evals, evecs = psd_sqrt_clamped(gap, clamp_tol=tol)
    # rank decided on the squared spectrum: eigenvalue noise is eps-level
    # there, while square roots would inflate it past the rank cut
    rank, unstable = numerical_rank(evals, rank_tol)
    order = np.argsort(evals)[::-1]
    frame = evecs[:, order[:rank]]
    return DefectData(delta=delta, defect_rank=rank, defect_frame=frame,
                      eigenvalues=evals, unstable_rank=unstable)


def is_commuting(t: OperatorTuple, tol: float = DEFAULT_TOL) -> bool:
    return commutator_norm(t) <= tol


def commutator_norm(t: OperatorTuple) -> float:
    worst = 0.0
    for i in range(t.n):
        for j in range(i + 1, t.n):
            worst = max(worst, opnorm(t.mats[i] @ t.mats[j] - t.mats[j] @ t.mats[i]))
    return worst


def apply_word(t: OperatorTuple, word: Sequence[int]) -> Array:
    """T_{a1} T_{a2} ... T_{am}; the empty word gives the identity."""
    out = np.eye(t.dim, dtype=np.complex128)
    for letter in word:
        if not 1 <= letter <= t.n:
            raise ValueError(f"word letter {letter} outside 1..{t.n}")
        out = out @ t.mats[letter - 1]
    return out


def phi(t: OperatorTuple, x: Array) -> Array:
    """The completely positive map X -> sum T_i X T_i*."""
    return np.einsum("kij,jl,kml->im", t.mats, x, t.mats.conj())


class PurityResult(NamedTuple):
    pure: bool
    decay: Array  # s_m for m = 1..m_max


def is_pure(t: OperatorTuple, m_max: int = 40, tol: float = DEFAULT_TOL) -> PurityResult:
    """Decay certificate s_m = ||sum_{|a|=m} T^a (T^a)*|| up to m_max.

    Purity is an asymptotic property; the verdict only certifies decay
    below ``tol`` by degree ``m_max``. The sequence is nonincreasing for
    every row contraction.
    """
    if not is_row_contraction(t, tol):
        raise PreconditionError("purity check requires a row contraction")
    x = np.eye(t.dim, dtype=np.complex128)
    decay = np.empty(m_max, dtype=float)
    for m in range(m_max):
        x = phi(t, x)
        decay[m] = opnorm(x)
    return PurityResult(pure=bool(decay[-1] <= tol), decay=decay)


def is_spherical_unitary(t: OperatorTuple, tol: float = DEFAULT_TOL) -> bool:
    """Commuting normal tuple with sum T_i T_i* = I.

    Also checks the Fuglede-Putnam consequence that every T_i commutes
    with every T_j*; for genuine spherical unitaries this adds nothing,
    numerically it guards against accidental near-misses.
    """
    if not is_commuting(t, tol):
        return False
    if opnorm(row_sum(t) - np.eye(t.dim)) > tol:
        return False
    for i in range(t.n):
        for j in range(t.n):
            mixed = t.mats[i] @ t.mats[j].conj().T - t.mats[j].conj().T @ t.mats[i]
            if opnorm(mixed) > tol:
                return False
    return True


def direct_sum(t: OperatorTuple, r: OperatorTuple) -> OperatorTuple:
    if t.n != r.n:
        raise ValueError(f"tuple lengths differ: {t.n} vs {r.n}")
    dim = t.dim + r.dim
    mats = np.zeros((t.n, dim, dim), dtype=np.complex128)
    mats[:, :t.dim, :t.dim] = t.mats
    mats[:, t.dim:, t.dim:] = r.mats
    return OperatorTuple(mats)


def tensor_with_identity(t: OperatorTuple, k: int) -> OperatorTuple:
    if k < 1:
        raise ValueError(f"tensor multiplicity must be >= 1, got {k}")
    eye = np.eye(k, dtype=np.complex128)
    return OperatorTuple(np.stack([np.kron(m, eye) for m in t.mats]))


def conjugate(t: OperatorTuple, u: Array) -> OperatorTuple:
    """U T_i U* for a unitary U (used to relocate tuples in tests)."""
    u = as_complex(u)
    return OperatorTuple(np.stack([u @ m @ u.conj().T for m in t.mats]))
