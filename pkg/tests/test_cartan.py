import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modlie.cartan import (BadBlockShape, InvalidDecomposition, NormalFormSpec, build_family, build_from_form,
                           build_witt, derived_to_stability, is_exact, natural_filtration, normal_form,
                           restrictability_profile, standard_maximal_subalgebra, witt_element)
from modlie.dpalg import DPAlgebra, SpecialDerivation, dx, nondegenerate, omega_H, omega_S, partial_derivative
from modlie.liealg import is_simple
from modlie.linalg import SubspaceBasis, nullspace


@lru_cache(maxsize=None)
def family(fam, m, n, p=5):
    return build_family(fam, m, n, p)


def _ambient_span(L):
    return SubspaceBasis(L.metadata["embedding"], L.p, L.metadata["_ambient"].dim)


def _divergence_kernel(W):
    # independent oracle: div(sum f_i d_i) = sum d_i f_i, computed with dpalg on each W basis vector
    O = W.metadata["_dp"]
    cols = []
    for a, i in W.metadata["basis_keys"]:
        D = SpecialDerivation.basis_element(O, a, i)
        cols.append(D.divergence().coeffs.reshape(-1))
    return nullspace(np.array(cols).T % W.p, W.p)


def _hamiltonian(O, f):
    # D_H(f) = d_1(f) d_2 - d_2(f) d_1 in two variables
    return SpecialDerivation([-partial_derivative(2, f), partial_derivative(1, f)])


@pytest.mark.parametrize("m,n,p", [(1, (1,), 5), (1, (2,), 5), (2, (1, 1), 5), (3, (1, 1, 1), 5), (1, (1,), 7)])
def test_witt_dimension(m, n, p):
    assert build_witt(m, n, p).dim == m * p ** sum(n)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(1, (2,), 3), (2, (1, 1), 3), (2, (1, 1), 5)]), st.integers(0, 2**32 - 1))
def test_witt_bracket_is_the_derivation_commutator(alg, seed):
    m, n, p = alg
    W = build_witt(m, n, p)
    O = W.metadata["_dp"]
    rng = np.random.default_rng(seed)
    D = SpecialDerivation([O.random_element(rng, density=0.4) for _ in range(m)])
    E = SpecialDerivation([O.random_element(rng, density=0.4) for _ in range(m)])
    assert np.array_equal(W.bracket(witt_element(W, D), witt_element(W, E)), witt_element(W, D.bracket(E)))


def test_witt_grading_is_a_lie_grading():
    W = build_witt(2, (1, 1), 5)
    degs = W.grading.degrees
    for i, j in itertools.product(range(W.dim), repeat=2):
        v = W.bracket(np.eye(W.dim, dtype=np.int64)[i], np.eye(W.dim, dtype=np.int64)[j])
        assert all(degs[k] == degs[i] + degs[j] for k in np.flatnonzero(v))


def test_special_algebra_is_the_divergence_kernel():
    S = family("S", 3, 1)
    assert _ambient_span(S) == _divergence_kernel(S.metadata["_ambient"])
    assert S.dim == 251
    chain = derived_to_stability(S)
    assert [A.dim for A in chain] == [251, 248]


def test_hamiltonian_derived_algebra_is_spanned_by_hamiltonians():
    H = family("H", 2, 1)
    W = H.metadata["_ambient"]
    O = W.metadata["_dp"]
    # in two variables omega_H = omega_S, so H(2;1) is the divergence kernel
    assert _ambient_span(H) == _divergence_kernel(W)
    chain = derived_to_stability(H)
    assert [A.dim for A in chain] == [26, 24, 23]
    top = tuple(s - 1 for s in O.shape)
    hams = [witt_element(W, _hamiltonian(O, O.monomial(a))) for a in O.basis() if 0 < sum(a) and a != top]
    assert _ambient_span(chain[-1]) == SubspaceBasis(np.array(hams), W.p)
    assert chain[-1].dim == O.size - 2


def test_contact_algebra_dimensions():
    K = family("K", 3, 1)
    assert K.dim == 5 ** 3
    assert len(derived_to_stability(K)) == 1  # p = 5 does not divide m + 3 = 6
    degs = K.grading.degrees
    assert degs.count(-2) == 1 and min(degs) == -2


@pytest.mark.parametrize("fam,m", [("W", 2), ("S", 3), ("H", 2), ("CH", 2)])
def test_non_contact_gradings_start_at_minus_one(fam, m):
    assert min(family(fam, m, 1).grading.degrees) == -1


def test_conformal_extensions_contain_the_special_ones():
    for big, small, m in [("CS", "S", 3), ("CH", "H", 2)]:
        B, S = family(big, m, 1), family(small, m, 1)
        assert _ambient_span(B).contains_subspace(_ambient_span(S))
        assert B.dim == S.dim + 1
        # the derived algebra of the conformal one sits inside the special one
        assert _ambient_span(S).contains_subspace(_ambient_span(derived_to_stability(B)[1]))


def test_hamiltonian_derived_algebra_is_simple():
    assert is_simple(derived_to_stability(family("H", 2, 1))[-1])


def test_standard_maximal_subalgebras():
    W = build_witt(1, 1, 5)
    assert W.dim - standard_maximal_subalgebra(W).dim == 1
    # for K(3;1) the codimension is dim K_-2 + dim K_-1 = 1 + (m - 1)
    K = family("K", 3, 1)
    negative = sum(1 for d in K.grading.degrees if d < 0)
    assert K.dim - standard_maximal_subalgebra(K).dim == negative == 3


def test_natural_filtration_matches_grading_for_graded_algebras():
    H = family("H", 2, 1)
    f = natural_filtration(H)
    degs = np.array(H.grading.degrees)
    for i in range(f.lo, f.hi + 1):
        assert f[i].dim == int((degs >= i).sum())


def test_normal_form_hamiltonian_ab_with_zero_b_is_standard():
    A = np.array([[0, 1], [4, 0]])
    w = normal_form(NormalFormSpec("hamiltonian_AB", A=A, B=np.zeros((2, 2), dtype=np.int64)), 2, (1, 1), 5)
    assert w == omega_H(DPAlgebra(2, 1, 5))


def test_normal_form_contact_decomposition():
    O = DPAlgebra(3, 1, 5)
    w = normal_form(NormalFormSpec("contact_I", decomposition=(3, ((1, 2),))), 3, (1, 1, 1), 5)
    assert w == dx(O, 3) + dx(O, 2).scale(O.x(1))


def test_normal_form_volume_delta():
    O = DPAlgebra(3, 1, 5)
    w = normal_form(NormalFormSpec("volume_delta"), 3, (1, 1, 1), 5)
    assert w == omega_S(O).scale(O.one() - O.monomial((4, 4, 4)))
    assert nondegenerate(w)


def test_normal_form_errors():
    with pytest.raises(InvalidDecomposition):
        normal_form(NormalFormSpec("contact_I", decomposition=(1, ((1, 3),))), 3, 1, 5)
    with pytest.raises(InvalidDecomposition):
        normal_form(NormalFormSpec("volume_exp_i", i=2), 2, 1, 5)  # 2 is not in the index set for n = (1,1)
    with pytest.raises(BadBlockShape):
        normal_form(NormalFormSpec("hamiltonian_AB", A=np.array([[0, 1], [1, 0]])), 2, 1, 5)


def test_exactness_of_forms():
    O = DPAlgebra(2, 1, 5)
    assert is_exact(omega_H(O))
    assert not is_exact(omega_S(DPAlgebra(3, 1, 5)).with_factor(DPAlgebra(3, 1, 5).x(1)))


def test_restrictability_profile_of_hamiltonian_algebras():
    prof = restrictability_profile(family("H", 2, 1))
    assert prof["form_exact"] and prof["n_is_1"]
    assert [t["restrictable"] for t in prof["terms"]] == [True, True, True]
    prof = restrictability_profile(family("H", 2, (2, 1)))
    assert not prof["n_is_1"]
    assert prof["terms"][-1]["restrictable"] is False


def test_filtered_special_algebra_is_not_restrictable():
    O = DPAlgebra(3, 1, 5)
    w = normal_form(NormalFormSpec("volume_exp_i", i=1), 3, (1, 1, 1), 5)
    L = build_from_form(3, (1, 1, 1), 5, w, "annihilate", family="S")
    prof = restrictability_profile(L)
    assert not prof["form_in_Omega"]
    # this algebra is already perfect, so its derived algebra is the last term
    assert prof["terms"][-1]["restrictable"] is False
    assert prof["terms"][-1]["dim"] == derived_to_stability(L)[-1].dim
    assert w.exp_factor == O.x(1)
