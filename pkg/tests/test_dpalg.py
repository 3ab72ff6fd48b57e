import itertools
from math import comb, factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modlie.dpalg import (DPAlgebra, NonzeroConstantTerm, NotClosed, SBeyondCharacteristic, SpecialDerivation,
                          WrongDegree, derivation_action_on_form, divided_power, dp_multiply, dx, exp_truncated,
                          exterior_d, form_divided_power, nondegenerate, omega_H, omega_K, omega_S,
                          partial_derivative, wedge)

ALGEBRAS = [(1, (1,), 5), (1, (2,), 3), (2, (1, 1), 3), (2, (2, 1), 2), (3, (1, 1, 1), 2)]


def _naive_product(f, g):
    # x^(a) x^(b) = prod_i C(a_i + b_i, a_i) x^(a + b), dropped outside the box
    O = f.parent
    out = np.zeros(O.shape, dtype=object)
    for a, c in f.terms():
        for b, d in g.terms():
            s = tuple(x + y for x, y in zip(a, b))
            if all(x < n for x, n in zip(s, O.shape)):
                coef = 1
                for x, y in zip(a, b):
                    coef *= comb(x + y, x)
                out[s] += c * d * coef
    return out % O.p


def _random(O, seed, no_constant=False):
    return O.random_element(np.random.default_rng(seed), no_constant=no_constant, density=0.5)


@pytest.mark.parametrize("m,n,p", ALGEBRAS)
def test_dimension_is_p_to_the_total_height(m, n, p):
    O = DPAlgebra(m, n, p)
    assert O.size == p ** sum(n)
    assert len(O.basis()) == O.size


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.integers(0, 2**32 - 1))
def test_product_matches_binomial_rule(alg, seed):
    O = DPAlgebra(*alg)
    f, g = _random(O, seed), _random(O, seed + 1)
    assert np.array_equal(dp_multiply(f, g).coeffs % O.p, _naive_product(f, g).astype(np.int64))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.integers(0, 2**32 - 1))
def test_commutative_associative_unital(alg, seed):
    O = DPAlgebra(*alg)
    f, g, h = _random(O, seed), _random(O, seed + 1), _random(O, seed + 2)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * O.one() == f


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.integers(0, 2**32 - 1))
def test_partial_derivatives_are_commuting_derivations(alg, seed):
    O = DPAlgebra(*alg)
    f, g = _random(O, seed), _random(O, seed + 1)
    for i in range(1, O.m + 1):
        assert partial_derivative(i, f * g) == partial_derivative(i, f) * g + f * partial_derivative(i, g)
        for j in range(1, O.m + 1):
            assert partial_derivative(i, partial_derivative(j, f)) == partial_derivative(j, partial_derivative(i, f))


def test_partial_lowers_a_divided_power():
    O = DPAlgebra(2, (2, 1), 3)
    assert partial_derivative(1, O.monomial((4, 2))) == O.monomial((3, 2))
    assert partial_derivative(2, O.monomial((4, 0))).is_zero()


def test_divided_power_of_a_variable():
    O = DPAlgebra(1, (2,), 3)
    for s in range(O.shape[0]):
        assert divided_power(O.x(1), s) == O.monomial((s,))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.integers(0, 2**32 - 1))
def test_divided_power_axioms(alg, seed):
    O = DPAlgebra(*alg)
    f = _random(O, seed, no_constant=True)
    g = _random(O, seed + 1, no_constant=True)
    p = O.p
    # s! f^(s) = f^s for s < p
    for s in range(1, p):
        power = O.one()
        for _ in range(s):
            power = power * f
        assert divided_power(f, s) * factorial(s) == power
    # (f + g)^(2) = f^(2) + f g + g^(2)
    assert divided_power(f + g, 2) == divided_power(f, 2) + f * g + divided_power(g, 2)
    # f^(a) f^(b) = C(a + b, a) f^(a + b)
    for a, b in itertools.product(range(3), repeat=2):
        assert divided_power(f, a) * divided_power(f, b) == divided_power(f, a + b) * comb(a + b, a)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALGEBRAS), st.integers(0, 2**32 - 1))
def test_exp_is_a_homomorphism(alg, seed):
    O = DPAlgebra(*alg)
    f = _random(O, seed, no_constant=True)
    g = _random(O, seed + 1, no_constant=True)
    assert exp_truncated(f + g) == exp_truncated(f) * exp_truncated(g)


def test_constant_terms_are_rejected():
    O = DPAlgebra(1, 1, 5)
    with pytest.raises(NonzeroConstantTerm):
        divided_power(O.one(), 2)
    with pytest.raises(NonzeroConstantTerm):
        exp_truncated(O.one())


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(ALGEBRAS[2:]), st.integers(0, 2**32 - 1))
def test_special_derivation_bracket_is_commutator(alg, seed):
    O = DPAlgebra(*alg)
    D = SpecialDerivation([_random(O, seed + i) for i in range(O.m)])
    E = SpecialDerivation([_random(O, seed + 10 + i) for i in range(O.m)])
    f = _random(O, seed + 20)
    assert D.bracket(E)(f) == D(E(f)) - E(D(f))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(2, (1, 1), 3), (3, (1, 1, 1), 3), (2, (2, 1), 5)]), st.integers(0, 2**32 - 1))
def test_exterior_derivative_squares_to_zero_and_is_graded_leibniz(alg, seed):
    O = DPAlgebra(*alg)
    a = sum((dx(O, i).scale(_random(O, seed + i)) for i in range(2, O.m + 1)), dx(O, 1).scale(_random(O, seed)))
    f = _random(O, seed + 7)
    b = dx(O, 1).scale(f)
    assert exterior_d(exterior_d(a)).is_zero()
    lhs = exterior_d(wedge(a, b))
    rhs = wedge(exterior_d(a), b) - wedge(a, exterior_d(b))
    assert lhs == rhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lie_derivative_commutes_with_d(seed):
    O = DPAlgebra(2, (1, 1), 5)
    D = SpecialDerivation([_random(O, seed), _random(O, seed + 1)])
    w = dx(O, 1).scale(_random(O, seed + 2)) + dx(O, 2).scale(_random(O, seed + 3))
    assert derivation_action_on_form(D, exterior_d(w)) == exterior_d(derivation_action_on_form(D, w))


def test_standard_forms_are_nondegenerate():
    assert nondegenerate(omega_S(DPAlgebra(3, 1, 5)))
    assert nondegenerate(omega_H(DPAlgebra(2, 1, 5)))
    assert nondegenerate(omega_H(DPAlgebra(4, 1, 3)))
    assert nondegenerate(omega_K(DPAlgebra(3, 1, 5)))


def test_degenerate_and_invalid_forms():
    O = DPAlgebra(2, 1, 5)
    assert not nondegenerate(omega_S(O).scale(O.x(1)))
    with pytest.raises(SBeyondCharacteristic):
        form_divided_power(omega_H(O), 5)
    with pytest.raises(WrongDegree):
        form_divided_power(dx(O, 1), 1)


def test_nonclosed_two_form_is_rejected():
    O = DPAlgebra(4, 1, 3)
    w = omega_H(O) + dx(O, 1, 2).scale(O.x(3))
    with pytest.raises(NotClosed):
        nondegenerate(w)


def test_omega_h_top_power():
    # omega_H^(r) = dx_1 ^ ... ^ dx_m up to the sign of the shuffle
    O = DPAlgebra(4, 1, 5)
    top = form_divided_power(omega_H(O), 2)
    assert top.coefficient((1, 2, 3, 4)).constant_term in (1, O.p - 1)
