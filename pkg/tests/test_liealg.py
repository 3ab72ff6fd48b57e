import json
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modlie.cartan import build_witt
from modlie.exceptional import build_heisenberg, build_matrix_classical
from modlie.liealg import (AntisymmetryViolation, Grading, JacobiViolation, NotAnIdeal, PreconditionFailed,
                           associated_graded, centralizer, check_graded_conditions, closure, derivation_algebra,
                           filtration_from_degrees, from_json, from_structure_constants, invariant_subspaces,
                           is_maximal_subalgebra, is_simple, killing_form, matrix_lie_algebra, minimal_ideal,
                           normalizer, quotient, radical_of_form, recognition_check, seligman_mills_check,
                           solvable_radical, standard_filtration, weisfeiler_ideal)


def _sl2_mats():
    e = np.array([[0, 1], [0, 0]])
    h = np.array([[1, 0], [0, -1]])
    f = np.array([[0, 0], [1, 0]])
    return [e, h, f]


def _gl_mats(n):
    out = []
    for i in range(n):
        for j in range(n):
            M = np.zeros((n, n), dtype=np.int64)
            M[i, j] = 1
            out.append(M)
    return out


def test_sl2_structure_constants_from_commutators():
    p = 5
    L = matrix_lie_algebra(_sl2_mats(), p, name="sl2")
    e, h, f = (np.eye(3, dtype=np.int64)[i] for i in range(3))
    assert np.array_equal(L.bracket(h, e), 2 * e % p)
    assert np.array_equal(L.bracket(h, f), -2 * f % p)
    assert np.array_equal(L.bracket(e, f), h)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 2**32 - 1))
def test_bracket_agrees_with_matrix_commutator(p, seed):
    # independent oracle: expand in the matrix basis and take AB - BA directly
    mats = _gl_mats(3)
    L = matrix_lie_algebra(mats, p)
    rng = np.random.default_rng(seed)
    x, y = rng.integers(0, p, (2, L.dim))
    X = sum(int(c) * M for c, M in zip(x, mats))
    Y = sum(int(c) * M for c, M in zip(y, mats))
    assert np.array_equal(L.bracket(x, y), ((X @ Y - Y @ X) % p).reshape(-1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_jacobi_and_ad_homomorphism_on_witt(seed):
    L = build_witt(1, 1, 5)
    p = L.p
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, p, (3, L.dim))
    jac = (L.bracket(x, L.bracket(y, z)) + L.bracket(y, L.bracket(z, x)) + L.bracket(z, L.bracket(x, y))) % p
    assert not jac.any()
    assert np.array_equal(L.ad_dense(x) @ y % p, L.bracket(x, y))
    comm = (L.ad_dense(x) @ L.ad_dense(y) - L.ad_dense(y) @ L.ad_dense(x)) % p
    assert np.array_equal(comm, L.ad_dense(L.bracket(x, y)))


def test_structure_constant_table_is_validated():
    with pytest.raises(AntisymmetryViolation):
        from_structure_constants({(0, 1): {2: 1}, (1, 0): {2: 1}}, 5, dim=3)
    # [a,b]=b, [a,c]=b, [b,c]=a violates Jacobi
    with pytest.raises(JacobiViolation):
        from_structure_constants({(0, 1): {1: 1}, (0, 2): {1: 1}, (1, 2): {0: 1}}, 5, dim=3)


def test_json_round_trip_preserves_brackets():
    L = build_witt(1, 1, 5)
    M = from_json(L.to_json())
    assert M.dim == L.dim and M.p == L.p and M.name == L.name
    assert M.structure_constants() == L.structure_constants()
    assert M.grading == L.grading


def test_json_rejects_malformed_entries():
    data = json.loads(build_witt(1, 1, 5).to_json())
    data["brackets"][0] = [0]
    with pytest.raises(ValueError, match="malformed"):
        from_json(data)


def test_killing_form_of_sl2():
    # with basis (e, h, f): K(e, f) = 4 and K(h, h) = 8
    p = 7
    K = killing_form(matrix_lie_algebra(_sl2_mats(), p)).gram
    assert np.array_equal(K, np.array([[0, 0, 4], [0, 8, 0], [4, 0, 0]]) % p)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_killing_form_is_invariant(seed):
    L = build_matrix_classical("sl", 3, 5)
    p = L.p
    G = killing_form(L).gram
    rng = np.random.default_rng(seed)
    x, y, z = rng.integers(0, p, (3, L.dim))
    assert (L.bracket(x, y) @ G @ z - x @ G @ L.bracket(y, z)) % p == 0


def test_killing_form_of_witt_is_degenerate():
    L = build_witt(1, 1, 5)
    assert radical_of_form(killing_form(L)).dim > 0


def test_heisenberg_invariants():
    H = build_heisenberg(2, 5)
    inv = invariant_subspaces(H)
    assert H.dim == 5 and H.center().dim == 1
    assert inv["is_nilpotent"] and inv["is_solvable"]
    assert killing_form(H).is_zero()


@pytest.mark.parametrize("kind,size,p,simple", [
    ("sl", 2, 5, True), ("sl", 3, 5, True), ("gl", 3, 5, False), ("sl", 5, 5, False), ("psl", 5, 5, True),
])
def test_simplicity_of_matrix_algebras(kind, size, p, simple):
    assert is_simple(build_matrix_classical(kind, size, p)) is simple


def test_witt_is_simple_and_centreless():
    L = build_witt(1, 1, 5)
    assert is_simple(L)
    assert L.center().dim == 0


def test_solvable_radical_of_gl():
    # gl(n) = scalars (+) sl(n) when p does not divide n, and sl(p)/scalars is simple
    for n, p in [(3, 5), (3, 3)]:
        L = build_matrix_classical("gl", n, p)
        R = solvable_radical(L)
        assert R.dim == 1
        assert R == L.center()


def test_derivations_of_sl2_are_inner():
    L = matrix_lie_algebra(_sl2_mats(), 5)
    assert derivation_algebra(L).dim == 3


def test_derivations_of_heisenberg():
    # Der(heis(3)) = gl(2) acting on V plus the maps V -> centre: 4 + 2 = 6
    assert derivation_algebra(build_heisenberg(1, 5)).dim == 6


def test_closure_and_ideals():
    L = build_matrix_classical("gl", 2, 5)
    h = np.zeros(L.dim, dtype=np.int64)
    h[0] = 1  # E11
    S = closure(L, [h], mode="subalgebra")
    assert S.dim == 1
    e12 = np.zeros(L.dim, dtype=np.int64)
    e12[1] = 1
    I = closure(L, [e12], mode="ideal")
    assert I.dim == 3  # sl(2)
    assert L.is_ideal(I)
    Q = quotient(L, I)
    assert Q.algebra.dim == 1
    with pytest.raises(NotAnIdeal):
        quotient(L, S)


def test_centralizer_and_normalizer_of_cartan():
    L = build_matrix_classical("sl", 3, 5)
    H = L.span(np.array([row for row, lab in zip(np.eye(L.dim, dtype=np.int64), L.labels) if lab.startswith("H")]))
    assert H.dim == 2
    assert centralizer(L, H) == H
    assert normalizer(L, H) == H


def test_minimal_ideal_of_gl_is_an_ideal():
    L = build_matrix_classical("gl", 3, 5)
    M = minimal_ideal(L)
    assert L.is_ideal(M)
    assert M.dim in (1, 8)


def test_maximal_subalgebra_of_witt():
    L = build_witt(1, 1, 5)
    f = filtration_from_degrees(L)
    assert is_maximal_subalgebra(L, f[0]) == (True, True)
    assert is_maximal_subalgebra(L, f[1])[0] is False


def _witt_e(L, i):
    # e_i = x^(i+1) d / (i+1)!  becomes  (i+1)! x^((i+1)) d  in the divided-power basis
    v = np.zeros(L.dim, dtype=np.int64)
    v[i + 1] = factorial(i + 1) % L.p
    return v


def test_witt_table_brackets():
    L = build_witt(1, 1, 5)
    p = L.p
    assert np.array_equal(L.bracket(_witt_e(L, 1), _witt_e(L, 2)), _witt_e(L, 3))
    assert np.array_equal(L.bracket(_witt_e(L, -1), _witt_e(L, 1)), 2 * _witt_e(L, 0) % p)
    for i in range(-1, 4):
        for j in range(-1, 4):
            want = (j - i) * _witt_e(L, i + j) % p if -1 <= i + j <= 3 else np.zeros(L.dim, dtype=np.int64)
            assert np.array_equal(L.bracket(_witt_e(L, i), _witt_e(L, j)), want)


def test_witt_table_from_structure_constants():
    p = 5
    table = {}
    for i in range(-1, 4):
        for j in range(i + 1, 4):
            if -1 <= i + j <= 3 and (j - i) % p:
                table[(i + 1, j + 1)] = {i + j + 1: (j - i) % p}
    L = from_structure_constants(table, p, dim=5)
    assert L.dim == 5 and is_simple(L)
    assert from_structure_constants({}, p, dim=4).derived().dim == 0


def test_witt_closures():
    L = build_witt(1, 1, 5)
    assert closure(L, [_witt_e(L, 2)], mode="ideal").dim == 5
    assert closure(L, [_witt_e(L, -1), _witt_e(L, 2)]).dim == 5


def test_gl2_scalar_ideal_is_the_centre():
    L = build_matrix_classical("gl", 2, 5)
    I = closure(L, [np.array([1, 0, 0, 1])], mode="ideal")
    assert I.dim == 1 and I == L.center()


def test_witt_derivations_are_inner_and_killing_form_vanishes():
    L = build_witt(1, 1, 5)
    assert derivation_algebra(L).dim == 5
    assert killing_form(L).is_zero()
    inv = invariant_subspaces(L)
    assert inv["center"].dim == 0 and not inv["is_solvable"]


def test_abelian_derivations_are_gl():
    assert derivation_algebra(from_structure_constants({}, 5, dim=3)).dim == 9


def test_quotients_of_matrix_algebras():
    gl = build_matrix_classical("gl", 3, 5)
    assert quotient(gl, gl.center()).algebra.dim == 8
    sl5 = build_matrix_classical("sl", 5, 5)
    assert sl5.center().dim == 1
    Q = quotient(sl5, sl5.center())
    assert is_simple(Q.algebra)
    # projection after section is the identity on the quotient
    c = np.random.default_rng(0).integers(0, 5, Q.algebra.dim)
    assert np.array_equal(Q.project(Q.section(c)), c)
    assert quotient(gl, gl.zero_space()).algebra.dim == gl.dim


def test_standard_filtration_of_witt():
    L = build_witt(1, 1, 5)
    L0 = filtration_from_degrees(L)[0]
    f = standard_filtration(L, L0, L.full_space())
    assert f.depth == 1 and f.height == 3
    assert f.dims() == filtration_from_degrees(L).dims()
    with pytest.raises(PreconditionFailed):
        standard_filtration(L, filtration_from_degrees(L)[1], L.full_space())


def test_associated_graded_preserves_dimension():
    L = build_witt(1, 1, 5)
    G = associated_graded(L, filtration_from_degrees(L))
    assert G.dim == L.dim
    assert G.grading.degrees == L.grading.degrees
    assert weisfeiler_ideal(G).dim == 0
    flags = check_graded_conditions(G)
    assert flags["g1"] and flags["g2"] and flags["g3"]


def test_graded_condition_g1_fails_for_trivial_action():
    G = from_structure_constants({}, 5, dim=3, grading=Grading((-1, -1, 0)))
    assert check_graded_conditions(G)["g1"] is False


def test_weisfeiler_ideal_of_a_depth_two_tail():
    # basis a (deg -2), b (deg -1), c (deg 0) with [c, b] = b and a central:
    # F a is an ideal inside the degree < -1 part
    G = from_structure_constants({(1, 2): {1: 4}}, 5, dim=3, grading=Grading((-2, -1, 0)))
    assert weisfeiler_ideal(G) == G.span(np.array([[1, 0, 0]]))


def test_seligman_mills_verdicts():
    sl3 = build_matrix_classical("sl", 3, 5)
    H = sl3.span(np.array([row for row, lab in zip(np.eye(sl3.dim, dtype=np.int64), sl3.labels)
                           if lab.startswith("H")]))
    assert seligman_mills_check(sl3, H).passed
    W = build_witt(1, 1, 5)
    v = seligman_mills_check(W, W.span(_witt_e(W, 0)[None, :]))
    # the root string through 1 covers F_p; also [L_2, L_3] = L_5 = 0, so 2b is the first failure
    assert not v.passed and v.clauses["2c"] is False
    assert v.failing == "2b" and v.clauses["2b"] is False


def test_recognition_check_on_witt():
    L = build_witt(1, 1, 5)
    assert recognition_check(L, filtration_from_degrees(L)).passed
    flat = filtration_from_degrees(L, [0] * L.dim)
    v = recognition_check(L, flat)
    assert not v.passed and v.failing == "a"
