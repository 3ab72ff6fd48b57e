from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modlie.cartan import build_family, build_witt, derived_to_stability
from modlie.exceptional import build_chevalley, build_heisenberg
from modlie.linalg import SubspaceBasis, matpow, to_dense
from modlie.restricted import (DependentRoots, K_alpha, K_prime, NotAbelian, NotCentreless, NotRestrictable,
                               absolute_toral_rank, closure_certificate, compare_root_data, is_restrictable, is_sandwich,
                               jacobson_terms, jordan_decomposition, k_section, make_torus, maximal_torus,
                               p_envelope, p_power, pmap_data, restricted_structure, root_decomposition,
                               sandwich_search, toral_elements, toral_rank_estimate, weight_set_compare,
                               winter_exponential)

P = 5


@lru_cache(maxsize=None)
def witt(n=1, p=P):
    return build_witt(1, (n,), p)


@lru_cache(maxsize=None)
def chevalley(kind, rank):
    return build_chevalley(kind, rank, P)


def e(L, i):
    return np.eye(L.dim, dtype=np.int64)[i]


def _ad(L, x):
    return to_dense(L.ad(np.asarray(x) % L.p)) % L.p


# in W(1;1) the basis vector x^(k) d is e_{k-1} / k!, so e_-1 = b_0 and e_0 = b_1

def test_p_power_of_witt_generators():
    W = witt()
    assert not np.any(p_power(W, e(W, 0)).coords)
    assert np.array_equal(p_power(W, e(W, 1)).coords, e(W, 1))


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["W", "A1", "G2"]), st.integers(0, 2**32 - 1))
def test_p_power_satisfies_defining_identity(which, seed):
    L = witt() if which == "W" else chevalley(which[0], int(which[1]))
    x = np.random.default_rng(seed).integers(0, P, L.dim)
    y = p_power(L, x).coords
    assert np.array_equal(_ad(L, y), to_dense(matpow(_ad(L, x), P, P)) % P)


def test_classical_p_map_matches_the_computed_one():
    L = chevalley("G", 2)
    for i, v in L.pmap.items():
        assert np.array_equal(p_power(L, e(L, i)).coords, v % P)


def test_pmap_is_semilinear():
    assert pmap_data(witt()).semilinearity_holds(seed=3)


def test_restrictability_of_witt_algebras():
    assert is_restrictable(witt(1))
    assert not is_restrictable(witt(2))
    with pytest.raises(NotRestrictable):
        # d^5 is not inner in W(1;(2)), so the p-th power of e_-1 is undefined
        p_power(witt(2), e(witt(2), 0))


def test_envelope_of_a_restrictable_algebra_is_ad_l():
    W = witt()
    assert p_envelope(W).dim == W.dim


def test_envelope_of_w1_2_adds_one_outer_power():
    W = witt(2)
    d5 = to_dense(matpow(_ad(W, e(W, 0)), P, P)) % P
    inner = SubspaceBasis(np.array([_ad(W, e(W, i)).reshape(-1) for i in range(W.dim)]), P)
    assert not inner.contains(d5.reshape(-1))
    R = p_envelope(W)
    assert R.dim == 26
    assert closure_certificate(R)


def test_envelope_of_h2_derived_is_ad_h():
    # H(2;1)^(2) is restrictable and centreless, so no outer p-powers appear
    H = derived_to_stability(build_family("H", 2, 1, P))[-1]
    inner = SubspaceBasis(np.array([_ad(H, e(H, i)).reshape(-1) for i in range(H.dim)]), P)
    for i in range(H.dim):
        assert inner.contains(to_dense(matpow(_ad(H, e(H, i)), P, P)).reshape(-1) % P)
    R = p_envelope(H)
    assert R.dim == H.dim and closure_certificate(R)


def test_envelope_rejects_central_algebras():
    with pytest.raises(NotCentreless):
        p_envelope(build_heisenberg(1, P))


def test_jordan_decomposition_trivial_cases():
    W = witt()
    s, n = jordan_decomposition(W, e(W, 1))
    assert np.array_equal(s, e(W, 1)) and not np.any(n)
    s, n = jordan_decomposition(W, e(W, 0))
    assert not np.any(s) and np.array_equal(n, e(W, 0))


def test_jordan_decomposition_of_e0_plus_e1():
    W = witt()
    x = (e(W, 1) + 2 * e(W, 2)) % P  # e_0 + e_1, since e_1 = 2! x^(2) d
    s, n = jordan_decomposition(W, x)
    assert np.array_equal((s + n) % P, x)
    assert not np.any(W.bracket(s, n))
    N = _ad(W, n)
    assert not np.any(to_dense(matpow(N, W.dim, P)) % P)
    S = _ad(W, s)
    # ad s is semisimple: S^(p^k) = S for k a multiple of all residue degrees
    assert np.array_equal(to_dense(matpow(S, P ** 60, P)) % P, S)


def test_toral_elements():
    W = witt()
    assert toral_elements(W, W.span([e(W, 1)])) == W.span([e(W, 1)])
    assert toral_elements(W, W.span([e(W, 0)])).dim == 0
    with pytest.raises(NotAbelian):
        toral_elements(W, W.span([e(W, 0), e(W, 1)]))


def test_maximal_torus_of_witt_and_sl2():
    res = maximal_torus(witt(), restarts=2, bound=1)
    assert res.mt == 1 and res.exact and res.certified
    assert absolute_toral_rank(witt()) == (1, True)
    assert absolute_toral_rank(chevalley("A", 1)) == (1, True)


def test_heisenberg_toral_rank():
    H = build_heisenberg(2, P)
    with pytest.raises(NotCentreless):
        absolute_toral_rank(H)
    assert toral_rank_estimate(H) == (0, True)


def test_root_decompositions_of_witt():
    W = witt()
    d = root_decomposition(W, [e(W, 1)])
    assert d.multiplicities() == {(w,): 1 for w in range(P)}
    one_plus_x = (e(W, 0) + e(W, 1)) % P  # (1 + x) d
    d2 = root_decomposition(W, make_torus(W, [one_plus_x]))
    assert sorted(d2.multiplicities().values()) == [1] * P
    assert sum(V.dim for V in d2.spaces.values()) == W.dim


def test_torus_acting_on_itself_has_only_the_zero_weight():
    W = witt()
    span = W.span([e(W, 1)])
    d = root_decomposition(W, [e(W, 1)], action=lambda t: span.coordinates((_ad(W, t) @ span.vectors.T % P).T).T)
    assert d.weights == [(0,)]


def test_k_sections_of_witt():
    W = witt()
    d = root_decomposition(W, [e(W, 1)])
    assert k_section(W, d, [(1,)]).dim == W.dim
    zero = k_section(W, d, [])
    assert zero.dim == d.zero_space.dim == 1
    with pytest.raises(DependentRoots):
        k_section(W, d, [(1,), (2,)])


def test_jacobson_terms():
    W = witt()
    assert all(not np.any(s) for s in jacobson_terms(W, e(W, 1), e(W, 1)))
    L = chevalley("A", 1)
    hb = L.metadata["_hbase"]
    x, y = e(L, hb + 1), e(L, hb - 1)  # e and f sit on either side of h
    terms = jacobson_terms(L, x, y)
    # the defining polynomial identity, evaluated at every t by direct powering
    for t in range(P):
        lhs = to_dense(matpow(_ad(L, t * x + y), P - 1, P)) @ x % P
        rhs = sum(i * terms[i - 1] * t ** (i - 1) for i in range(1, P)) % P
        assert np.array_equal(lhs, rhs)


def test_winter_exponential_is_exp_for_p_nilpotent_root_vectors():
    W = witt()
    x = e(W, 0)
    wd = winter_exponential(W, [e(W, 1)], x)
    assert wd.m == 1 and not np.any(wd.q_x)
    A = _ad(W, x)
    expected = np.zeros_like(A)
    term = np.eye(W.dim, dtype=np.int64)
    fact = 1
    for i in range(P):
        expected = (expected + term * pow(fact, P - 2, P)) % P
        term = term @ A % P
        fact = fact * (i + 1) % P
    assert np.array_equal(wd.E % P, expected)
    assert wd.ok


def test_weight_set_compare():
    W = witt()
    rep = weight_set_compare(W, [e(W, 1)], [e(W, 1)])
    assert rep["found"] and all(k == v for k, v in rep["map"].items())
    # a contrived module: diag(1,1) against diag(1,2) has multiplicities {2} vs {1,1}
    A = lambda t: np.diag([int(t[1]), int(t[1])]) % P
    B = lambda t: np.diag([int(t[1]), 2 * int(t[1])]) % P
    d_a = root_decomposition(W, [e(W, 1)], action=A)
    d_b = root_decomposition(W, [e(W, 1)], action=B)
    assert not compare_root_data(d_a, d_b, P)["found"]


def test_k_alpha():
    L = chevalley("A", 1)
    hb = L.metadata["_hbase"]
    d = root_decomposition(L, [e(L, hb)])
    alpha = next(w for w in d.roots)
    assert K_alpha(L, d, alpha).dim == 0
    W = witt()
    dW = root_decomposition(W, [e(W, 1)])
    K = K_alpha(W, dW, (1,))
    assert dW.spaces[(1,)].contains_subspace(K)
    S, tri = K_prime(W, dW, (1,))
    assert tri


def test_k_alpha_is_the_whole_root_space_when_the_bracket_vanishes():
    # W(1;1) roots 3 and -3 = 2: [e_3, e_2] = 0 since e_5 lies outside the algebra
    W = witt()
    dW = root_decomposition(W, [e(W, 1)])
    assert K_alpha(W, dW, (3,)) == dW.spaces[(3,)]


@pytest.mark.parametrize("p", [5, 7])
def test_sandwiches_of_witt(p):
    W = witt(1, p)
    rep = sandwich_search(W)
    expect = [i + 1 for i in range(-1, p - 1) if 2 * i > p]
    assert rep.span == SubspaceBasis(np.eye(p, dtype=np.int64)[expect], p)
    assert rep.in_killing_radical and rep.strongly_degenerate
    assert all(is_sandwich(W, v) for v in rep.span.vectors)
    assert not is_sandwich(W, np.eye(p, dtype=np.int64)[0])


def test_sl2_has_no_sandwiches():
    rep = sandwich_search(chevalley("A", 1))
    assert rep.span.dim == 0 and not rep.strongly_degenerate


def test_restricted_structure_is_cached():
    W = witt()
    assert restricted_structure(W) is restricted_structure(W)
