import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from modlie.linalg import (Inconclusive, NotCommuting, NotToral, SubspaceBasis, fitting_split, inverse, jordan_chevalley_matrix,
                           matmul, matpow, module_irreducible, nullspace, rank, rref, simultaneous_eigenspaces,
                           solve_linear, spin)


def _dm(A, p):
    A = np.asarray(A) % p
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in A], A.shape, GF(p))


def _ints(M, p):
    return np.array([[int(x) % p for x in row] for row in M.to_Matrix().tolist()], dtype=np.int64)


def matrices(max_rows=7, max_cols=7):
    return st.tuples(st.sampled_from([2, 3, 5, 7]), st.integers(1, max_rows), st.integers(1, max_cols),
                     st.integers(0, 2**32 - 1))


def _random(p, m, n, seed, density=1.0):
    rng = np.random.default_rng(seed)
    A = rng.integers(0, p, (m, n))
    if density < 1:
        A[rng.random((m, n)) > density] = 0
    return A


@settings(max_examples=80, deadline=None)
@given(matrices())
def test_rref_matches_sympy(args):
    p, m, n, seed = args
    A = _random(p, m, n, seed, density=0.5)
    R, piv = rref(A, p)
    Rs, pivs = _dm(A, p).rref()
    assert list(piv) == list(pivs)
    assert np.array_equal(R, _ints(Rs, p)[:len(pivs)])


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rank_and_nullspace_match_sympy(args):
    p, m, n, seed = args
    A = _random(p, m, n, seed, density=0.4)
    assert rank(A, p) == _dm(A, p).rank()
    K = nullspace(A, p)
    assert K.dim == n - _dm(A, p).rank()
    assert not np.any(matmul(A, K.vectors.T, p))


def test_rref_of_large_dependent_matrix():
    # rows 200..399 are sums of earlier rows, so the rank is 200
    p = 5
    A = _random(p, 200, 300, 0)
    B = np.vstack([A, (A[:100] + A[100:]) % p, (2 * A[:100]) % p])
    assert rank(B, p) == _dm(B, p).rank() == 200


def test_solve_linear_and_inconsistency():
    p = 7
    A = np.array([[1, 2], [2, 4]])
    assert solve_linear(A, [1, 3], p) is None
    x = solve_linear(A, [3, 6], p)
    assert np.array_equal(A @ x % p, [3, 6])


@settings(max_examples=40, deadline=None)
@given(matrices(6, 6))
def test_inverse_is_two_sided(args):
    p, n, _, seed = args
    A = _random(p, n, n, seed)
    if _dm(A, p).rank() < n:
        return
    Ai = inverse(A, p)
    assert np.array_equal(matmul(A, Ai, p), np.eye(n, dtype=np.int64))
    assert np.array_equal(_ints(_dm(A, p).inv(), p), Ai)


def test_sparse_and_dense_products_agree():
    p = 5
    A = _random(p, 30, 30, 1, density=0.05)
    B = _random(p, 30, 30, 2, density=0.05)
    dense = matmul(A, B, p)
    sparse = matmul(sp.csr_matrix(A), sp.csr_matrix(B), p)
    sparse = sparse.toarray() if sp.issparse(sparse) else sparse
    assert np.array_equal(dense % p, sparse % p)
    assert np.array_equal(dense % p, (A @ B) % p)


def test_matpow_matches_repeated_product():
    p = 3
    A = _random(p, 5, 5, 4)
    P = np.eye(5, dtype=np.int64)
    for _ in range(11):
        P = P @ A % p
    assert np.array_equal(np.asarray(matpow(A, 11, p)) % p, P)


def test_subspace_operations():
    p = 5
    U = SubspaceBasis([[1, 0, 0, 0], [0, 1, 1, 0]], p)
    V = SubspaceBasis([[0, 1, 1, 0], [0, 0, 0, 1]], p)
    assert (U + V).dim == 3
    assert U.intersection(V) == SubspaceBasis([[0, 1, 1, 0]], p)
    assert U.contains([2, 3, 3, 0])
    assert not U.contains([0, 0, 0, 1])
    assert np.array_equal(U.coordinates([2, 3, 3, 0]), [2, 3])
    assert SubspaceBasis.zero(4, p).dim == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_intersection_dimension_formula(seed):
    p = 3
    rng = np.random.default_rng(seed)
    U = SubspaceBasis(rng.integers(0, p, (rng.integers(1, 5), 6)), p, 6)
    V = SubspaceBasis(rng.integers(0, p, (rng.integers(1, 5), 6)), p, 6)
    assert (U + V).dim + U.intersection(V).dim == U.dim + V.dim


def test_simultaneous_eigenspaces_on_diagonal_operators():
    p = 5
    A = np.diag([0, 1, 1, 2, 4])
    B = np.diag([3, 3, 0, 0, 0])
    pieces = dict(simultaneous_eigenspaces([A, B], p))
    assert {w: V.dim for w, V in pieces.items()} == {(0, 3): 1, (1, 3): 1, (1, 0): 1, (2, 0): 1, (4, 0): 1}


def test_simultaneous_eigenspaces_rejects_bad_input():
    p = 5
    with pytest.raises(NotToral):
        simultaneous_eigenspaces([np.array([[0, 1], [0, 0]])], p)
    with pytest.raises(NotCommuting):
        simultaneous_eigenspaces([np.diag([0, 1]), np.array([[0, 1], [1, 0]])], p)


def test_spin_of_a_cyclic_vector():
    p = 3
    shift = np.roll(np.eye(4, dtype=np.int64), 1, axis=0)
    assert spin([1, 0, 0, 0], [shift], p).dim == 4
    assert spin([1, 1, 1, 1], [shift], p).dim == 1


def test_module_irreducible_on_standard_and_reducible_modules():
    p = 5
    e = np.array([[0, 1], [0, 0]])
    f = e.T.copy()
    assert module_irreducible([e, f], p).irreducible
    res = module_irreducible([e], p)
    assert not res.irreducible
    assert res.submodule is not None and res.submodule.dim == 1


def test_module_irreducible_is_absolute():
    # a rotation of order 4 over GF(3) is irreducible over GF(3) but splits
    # over GF(9); there is no GF(p)-submodule to report, so the call refuses
    p = 3
    J = np.array([[0, 2], [1, 0]])
    with pytest.raises(Inconclusive):
        module_irreducible([J], p)


def test_fitting_split_separates_nilpotent_part():
    p = 5
    F = np.diag([2, 0, 0])
    F[1, 2] = 1
    s, n = fitting_split(F, np.array([1, 1, 1]), p)
    assert np.array_equal(s, [1, 0, 0]) and np.array_equal(n, [0, 1, 1])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_jordan_chevalley_properties(p, n, seed):
    M = _random(p, n, n, seed, density=0.6)
    S, N = jordan_chevalley_matrix(M, p)
    assert np.array_equal((S + N) % p, M % p)
    assert np.array_equal(matmul(S, N, p), matmul(N, S, p))
    assert not np.any(np.asarray(matpow(N, n, p)) % p)
    # S is semisimple: S^(p^k) = S once k is a multiple of every residue degree
    k = math.lcm(*range(1, n + 1))
    assert np.array_equal(np.asarray(matpow(S, p**k, p)) % p, S % p)


def test_matmul_reduces_unreduced_and_negative_inputs():
    p = 7
    rng = np.random.default_rng(5)
    A = rng.integers(-50, 50, (20, 40))
    B = rng.integers(-50, 50, (40, 10))
    assert np.array_equal(matmul(A, B, p), (A @ B) % p)
