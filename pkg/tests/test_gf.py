import random

import pytest
from hypothesis import given, settings, strategies as st

from modlie.gf import (DivisionByZero, NoEmbedding, NonPrime, artin_schreier_root, embed_element, is_prime,
                       make_field, project_element)

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 3), (3, 2), (5, 2)]


def test_is_prime_matches_trial_division():
    def slow(n):
        return n > 1 and all(n % d for d in range(2, n))
    assert [n for n in range(60) if is_prime(n)] == [n for n in range(60) if slow(n)]


def test_make_field_rejects_composite():
    with pytest.raises(NonPrime):
        make_field(6)


def test_registry_returns_same_descriptor():
    assert make_field(5, 2) is make_field(5, 2)
    assert make_field(3, 2).order == 9


def test_prime_field_agrees_with_integers_mod_p():
    F = make_field(7)
    for a in range(7):
        for b in range(7):
            assert int(F(a) * F(b)) == a * b % 7
            assert int(F(a) + F(b)) == (a + b) % 7
            if b:
                assert int(F(a) / F(b)) * b % 7 == a


def test_division_by_zero():
    F = make_field(5, 2)
    with pytest.raises(DivisionByZero):
        F.one / F.zero


@pytest.mark.parametrize("p,k", FIELDS)
def test_every_element_satisfies_fermat(p, k):
    F = make_field(p, k)
    for a in F.elements():
        assert a ** F.order == a


@pytest.mark.parametrize("p,k", FIELDS)
def test_multiplicative_group_is_cyclic(p, k):
    # a cyclic group of order q - 1 has exactly phi(q - 1) generators
    F = make_field(p, k)
    q = F.order
    phi = sum(1 for d in range(1, q) if _gcd(d, q - 1) == 1)
    gens = 0
    for a in F.elements():
        if a.is_zero():
            continue
        seen, x = 1, a
        while x != F.one:
            x, seen = x * a, seen + 1
        gens += seen == q - 1
    assert gens == phi


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 2)])
def test_frobenius_is_additive_and_fixes_prime_field(p, k):
    F = make_field(p, k)
    rng = random.Random(1)
    for _ in range(20):
        a, b = F.random_element(rng), F.random_element(rng)
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()
    for c in range(p):
        assert F(c).frobenius() == F(c)


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (5, 2)])
def test_trace_lands_in_prime_field(p, k):
    F = make_field(p, k)
    for a in F.elements():
        assert a.trace().in_prime_field()


def test_embedding_is_a_ring_homomorphism():
    small, big = make_field(3, 2), make_field(3, 4)
    rng = random.Random(3)
    for _ in range(30):
        a, b = small.random_element(rng), small.random_element(rng)
        assert embed_element(a * b, big) == embed_element(a, big) * embed_element(b, big)
        assert embed_element(a + b, big) == embed_element(a, big) + embed_element(b, big)
        assert project_element(embed_element(a, big), small) == a


def test_no_embedding_between_incompatible_degrees():
    with pytest.raises(NoEmbedding):
        embed_element(make_field(5, 2).generator, make_field(5, 3))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_artin_schreier_root_of_one(p):
    F = make_field(p)
    r = artin_schreier_root(F.one)
    # T^p - T - 1 is irreducible over GF(p), so the root needs degree p
    assert r.field.k == p
    assert r ** p - r == r.field.one
    assert r.coeffs[0] == 0


def test_artin_schreier_root_stays_when_trace_vanishes():
    F = make_field(5, 2)
    hits = 0
    for a in F.elements():
        if a.trace().is_zero():
            r = artin_schreier_root(a)
            assert r.field is F
            assert r ** 5 - r == a
            hits += 1
    assert hits == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_field_axioms_in_gf25(x, y, z):
    F = make_field(5, 2)
    a, b, c = F((x % 5, x // 5)), F((y % 5, y // 5)), F((z % 5, z // 5))
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == F.zero
    if not a.is_zero():
        assert a * a.inverse() == F.one
