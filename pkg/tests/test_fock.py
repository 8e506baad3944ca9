import itertools
from math import comb

import numpy as np
import pytest

from dilation_lab.fock import (
    TruncatedFock,
    compressed_tuple,
    creation_tuple,
    enumerate_indices,
    permutation_matrix,
    symmetric_basis,
)
from dilation_lab.tuples import commutator_norm, row_sum


def test_enumerate_indices_degree_zero():
    assert enumerate_indices(2, 0) == [()]


def test_enumerate_indices_lexicographic():
    assert enumerate_indices(2, 2) == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert len(enumerate_indices(3, 2)) == 9


def test_enumerate_indices_rejects_bad_inputs():
    with pytest.raises(ValueError):
        enumerate_indices(0, 2)
    with pytest.raises(ValueError):
        enumerate_indices(2, -1)


def test_truncated_fock_dimensions_and_order():
    sp = TruncatedFock.build(2, 3)
    assert sp.dim == 1 + 2 + 4 + 8
    assert sp.indices[0] == ()
    # graded: all degree-m words precede degree-(m+1) words
    degrees = [len(a) for a in sp.indices]
    assert degrees == sorted(degrees)
    # bijection
    assert all(sp.index(a) == k for k, a in enumerate(sp.indices))


def test_creation_tuple_shapes_and_action():
    sp = TruncatedFock.build(2, 3)
    v = creation_tuple(sp)
    assert v.n == 2 and v.dim == 15
    # V_i e^alpha = e^{(i, alpha)} below the truncation degree
    for alpha in [(), (2,), (1, 2)]:
        for i in (1, 2):
            out = v.mats[i - 1] @ sp.basis_vector(alpha)
            expected = sp.basis_vector((i,) + alpha)
            assert np.allclose(out, expected)
    # top degree is annihilated
    assert np.allclose(v.mats[0] @ sp.basis_vector((1, 1, 1)), 0.0)


def test_creation_isometry_on_window():
    sp = TruncatedFock.build(2, 3)
    v = creation_tuple(sp)
    w = sp.window_dim(sp.M - 1)
    for i in range(2):
        for j in range(2):
            block = (v.mats[i].conj().T @ v.mats[j])[:w, :w]
            target = np.eye(w) if i == j else np.zeros((w, w))
            assert np.allclose(block, target, atol=1e-14)


def test_creation_row_sum_is_identity_minus_vacuum():
    sp = TruncatedFock.build(2, 3)
    v = creation_tuple(sp)
    s = row_sum(v)
    expected = np.eye(sp.dim)
    expected[0, 0] = 0.0
    assert np.allclose(s, expected, atol=1e-14)


def test_symmetric_basis_dimensions():
    sp = TruncatedFock.build(2, 3)
    sym = symmetric_basis(sp)
    assert sym.dim == 1 + 2 + 3 + 4
    sp3 = TruncatedFock.build(3, 3)
    sym3 = symmetric_basis(sp3)
    assert sym3.degree_dims == tuple(comb(3 + m - 1, m) for m in range(4))


def test_symmetric_degree_two_frame_matches_known_vectors():
    sp = TruncatedFock.build(2, 3)
    sym = symmetric_basis(sp)
    block = sym.frame[:, sym.degree_slice(2)]
    e11 = sp.basis_vector((1, 1))
    e12 = sp.basis_vector((1, 2))
    e21 = sp.basis_vector((2, 1))
    e22 = sp.basis_vector((2, 2))
    expected = np.column_stack([e11, (e12 + e21) / np.sqrt(2), e22])
    assert np.allclose(block, expected)


def test_symmetric_frame_is_orthonormal():
    for n, M in [(2, 3), (3, 3)]:
        sym = symmetric_basis(TruncatedFock.build(n, M))
        gram = sym.frame.conj().T @ sym.frame
        assert np.linalg.norm(gram - np.eye(sym.dim)) <= 1e-12


def test_symmetric_frame_fixed_by_transpositions():
    sp = TruncatedFock.build(2, 3)
    sym = symmetric_basis(sp)
    for m in (2, 3):
        block = sym.frame[sp.degree_slice(m), sym.degree_slice(m)]
        for pos in range(m - 1):
            perm = list(range(m))
            perm[pos], perm[pos + 1] = perm[pos + 1], perm[pos]
            u = permutation_matrix(2, m, tuple(perm))
            assert np.linalg.norm(u @ block - block) <= 1e-12


def test_compressed_tuple_shapes_and_relations():
    sp = TruncatedFock.build(2, 3)
    v = creation_tuple(sp)
    sym = symmetric_basis(sp)
    s = compressed_tuple(v, sym)
    assert s.dim == 10
    # commutes on degrees <= M - 2 (in fact everywhere on the truncation)
    assert commutator_norm(s) <= 1e-12
    # sum S_i S_i* restricted to symmetric degrees 1..M-1 is the identity
    rs = row_sum(s)
    lo, hi = 1, sum(sym.degree_dims[:sp.M])
    assert np.allclose(rs[lo:hi, lo:hi], np.eye(hi - lo), atol=1e-13)
    assert abs(rs[0, 0]) <= 1e-13


def test_compressed_tuple_adjoints_agree_below_truncation():
    # the symmetric subspace is co-invariant: S_i* x = V_i* x there
    sp = TruncatedFock.build(2, 3)
    v = creation_tuple(sp)
    sym = symmetric_basis(sp)
    s = compressed_tuple(v, sym)
    f = sym.frame
    for i in range(2):
        lhs = f @ (s.mats[i].conj().T)
        rhs = v.mats[i].conj().T @ f
        assert np.linalg.norm(lhs - rhs) <= 1e-12


def test_compressed_tuple_rejects_frame_mismatch():
    sym = symmetric_basis(TruncatedFock.build(2, 3))
    other = creation_tuple(TruncatedFock.build(2, 2))
    with pytest.raises(ValueError):
        compressed_tuple(other, sym)


def test_fock_basis_inner_products_are_exact():
    sp = TruncatedFock.build(3, 2)
    vectors = [sp.basis_vector(a) for a in sp.indices]
    gram = np.array([[np.vdot(x, y) for y in vectors] for x in vectors])
    assert np.array_equal(gram, np.eye(sp.dim, dtype=complex))


def test_permutation_matrix_validates():
    with pytest.raises(ValueError):
        permutation_matrix(2, 3, (0, 0, 1))
