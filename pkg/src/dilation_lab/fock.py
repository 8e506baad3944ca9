"""Truncated full and symmetric Fock spaces over C^n.

Basis convention: graded lexicographic with the vacuum first, so matrix
dumps are bit-stable across runs. A multi-index is a tuple of letters from
``1..n``; the empty tuple is the vacuum word. The left creation operators
raise the degree by one and annihilate top-degree vectors, which makes all
adjoint-side identities exact on the truncated space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from ._linalg import Array
from .tuples import OperatorTuple

MultiIndex = tuple[int, ...]

#: refuse dense construction beyond this total dimension
MAX_DENSE_DIM = 8000


def enumerate_indices(n: int, m: int) -> list[MultiIndex]:
    """All words of length ``m`` over the alphabet ``1..n``, lexicographic."""
    if n <= 0:
        raise ValueError(f"letter count must be positive, got {n}")
    if m < 0:
        raise ValueError(f"degree must be nonnegative, got {m}")
    return list(itertools.product(range(1, n + 1), repeat=m))


@dataclass(frozen=True)
class TruncatedFock:
    """Basis bookkeeping for the full Fock space over C^n cut at degree M."""

    n: int
    M: int
    indices: tuple[MultiIndex, ...]
    index_of: dict
    degree_offsets: tuple[int, ...]  # offset of each degree block, len M+2

    @classmethod
    def build(cls, n: int, M: int) -> "TruncatedFock":
        if n < 2:
            raise ValueError(f"need at least two letters, got n={n}")
        if M < 1:
            raise ValueError(f"truncation degree must be >= 1, got M={M}")
        indices: list[MultiIndex] = []
        offsets = [0]
        for m in range(M + 1):
            indices.extend(enumerate_indices(n, m))
            offsets.append(len(indices))
        if len(indices) > MAX_DENSE_DIM:
            raise ValueError(
                f"truncated Fock dimension {len(indices)} exceeds the dense "
                f"limit {MAX_DENSE_DIM}; lower the truncation degree")
        index_of = {alpha: k for k, alpha in enumerate(indices)}
        return cls(n=n, M=M, indices=tuple(indices), index_of=index_of,
                   degree_offsets=tuple(offsets))

    @property
    def dim(self) -> int:
        return len(self.indices)

    def index(self, alpha: MultiIndex) -> int:
        return self.index_of[tuple(alpha)]

    def degree_slice(self, m: int) -> slice:
        return slice(self.degree_offsets[m], self.degree_offsets[m + 1])

    def window_dim(self, max_degree: int) -> int:
        """Dimension of the span of all basis words of degree <= max_degree."""
        return self.degree_offsets[min(max_degree, self.M) + 1]

    def basis_vector(self, alpha: MultiIndex) -> Array:
        e = np.zeros(self.dim, dtype=np.complex128)
        e[self.index(alpha)] = 1.0
        return e


def creation_tuple(space: TruncatedFock) -> OperatorTuple:
    """Left creation operators; degree-M words are annihilated."""
    d = space.dim
    mats = np.zeros((space.n, d, d), dtype=np.complex128)
    for col, alpha in enumerate(space.indices):
        if len(alpha) == space.M:
            continue
        for i in range(1, space.n + 1):
            mats[i - 1, space.index((i,) + alpha), col] = 1.0
    return OperatorTuple(mats)


@dataclass(frozen=True)
class SymmetricBasis:
    """Orthonormal frame of the symmetric subspace, one block per degree.

    Each degree-m frame vector is the normalized sum of the distinct
    rearrangements of a multiset of letters, so the frame is exactly
    orthonormal and fixed by every permutation of the tensor slots.
    """

    parent: TruncatedFock
    frame: Array  # (fock dim) x (symmetric dim)
    degree_dims: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def degree_slice(self, m: int) -> slice:
        start = sum(self.degree_dims[:m])
        return slice(start, start + self.degree_dims[m])

    def window_frame(self, max_degree: int) -> Array:
        stop = sum(self.degree_dims[:max_degree + 1])
        return self.frame[:, :stop]


def symmetric_basis(space: TruncatedFock) -> SymmetricBasis:
    n, M = space.n, space.M
    cols = []
    degree_dims = []
    for m in range(M + 1):
        count = 0
        for multiset in itertools.combinations_with_replacement(range(1, n + 1), m):
            perms = sorted(set(itertools.permutations(multiset)))
            col = np.zeros(space.dim, dtype=np.complex128)
            weight = 1.0 / np.sqrt(len(perms))
            for word in perms:
                col[space.index(word)] = weight
            cols.append(col)
            count += 1
        assert count == comb(n + m - 1, m)
        degree_dims.append(count)
    frame = np.column_stack(cols)
    return SymmetricBasis(parent=space, frame=frame, degree_dims=tuple(degree_dims))


def compressed_tuple(creation: OperatorTuple, sym: SymmetricBasis) -> OperatorTuple:
    """Compression of the creation tuple to the symmetric subspace, in
    symmetric frame coordinates."""
    if creation.dim != sym.parent.dim or creation.n != sym.parent.n:
        raise ValueError(
            f"creation tuple on dim {creation.dim} (n={creation.n}) does not "
            f"match the frame's parent space dim {sym.parent.dim} "
            f"(n={sym.parent.n})")
    f = sym.frame
    mats = np.stack([f.conj().T @ v @ f for v in creation.mats])
    return OperatorTuple(mats)


def permutation_matrix(n: int, m: int, perm: tuple[int, ...]) -> Array:
    """Unitary permuting the m tensor slots of (C^n)^{⊗m}.

    ``perm`` is a rearrangement of ``range(m)``; slot k of the output is
    slot ``perm[k]`` of the input.
    """
    if sorted(perm) != list(range(m)):
        raise ValueError(f"perm must rearrange range({m}), got {perm}")
    words = enumerate_indices(n, m)
    size = len(words)
    index_of = {w: k for k, w in enumerate(words)}
    u = np.zeros((size, size), dtype=np.complex128)
    for col, w in enumerate(words):
        moved = tuple(w[perm[k]] for k in range(m))
        u[index_of[moved], col] = 1.0
    return u
