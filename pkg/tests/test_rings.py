import random

import pytest

from wedgecrys.errors import NonPrime
from wedgecrys.rings import (
    BOTTOM,
    CONWAY,
    FiniteField,
    defining_polynomial,
    finite_field,
    local_test_ring,
    make_witt_ring,
    modulus_ring,
    precision_reduction,
    prime_field_embedding,
    residue_reduction,
    teichmuller,
    valuation,
)


def _poly_eval_in_field(F, fred, x):
    # f(x) with f = x^a + fred[a-1] x^{a-1} + ... + fred[0]
    acc = F.one
    for k in range(F.a - 1, -1, -1):
        acc = F.add(F.mul(acc, x), F.from_int(fred[k]))
    return acc


def test_conway_table_polynomials_are_irreducible_and_primitive():
    for (p, a), fred in CONWAY.items():
        F = FiniteField(p, a)
        assert F.fred == fred
        if a == 1:
            continue
        x = F.gen()
        # irreducible: x^(p^a) = x and no smaller Frobenius power fixes x
        assert F.pow(x, p**a) == x
        # primitive: x has multiplicative order p^a - 1
        q1 = p**a - 1
        assert F.pow(x, q1) == F.one
        n = q1
        facs = set()
        d = 2
        while d * d <= n:
            while n % d == 0:
                facs.add(d)
                n //= d
            d += 1
        if n > 1:
            facs.add(n)
        for l in facs:
            assert F.pow(x, q1 // l) != F.one


def test_lex_smallest_irreducible_outside_table():
    fred = defining_polynomial(11, 2)
    F = FiniteField(11, 2)
    assert F.pow(F.gen(), 11**2) == F.gen()


def test_make_witt_ring_a1_is_plain_modulus_ring_with_identity_frobenius():
    R = make_witt_ring(3, 1, 4)
    assert R.q == 81
    x = R.from_int(55)
    assert R.frobenius(x) == x
    assert R.mul(R.from_int(10), R.from_int(9)) == R.from_int(90)


def test_make_witt_ring_f9_frobenius_is_hensel_root():
    # Conway polynomial for F_9 is x^2 + 2x + 2; the lifted Frobenius root
    # must satisfy f(phi(x)) = 0 mod 9 and phi(x) = x^3 mod 3
    R = make_witt_ring(3, 2, 2)
    assert R.fred == (2, 2)
    r = R.frobenius_root
    fr, _ = R._eval_fhat(r)
    assert fr == R.zero
    F9 = R.residue_field
    assert R.reduce_mod_p(r) == F9.pow(F9.gen(), 3)


def test_make_witt_ring_precision_one_is_the_residue_field():
    R = make_witt_ring(5, 3, 1)
    assert R.q == 5
    rng = random.Random(0)
    for _ in range(20):
        x = R.random_element(rng)
        assert R.frobenius(x) == R.pow(x, 5)


def test_make_witt_ring_rejects_two_and_composites():
    with pytest.raises(NonPrime):
        make_witt_ring(2, 1, 3)
    with pytest.raises(NonPrime):
        make_witt_ring(9, 1, 3)
    with pytest.raises(NonPrime):
        modulus_ring(2, 3)


def test_finite_field_allows_p_equal_two():
    F2 = finite_field(2)
    assert F2.add(F2.one, F2.one) == F2.zero


@pytest.mark.parametrize("p,a,m", [(3, 2, 4), (3, 1, 5), (5, 2, 3), (7, 3, 2)])
def test_frobenius_is_ring_endomorphism(p, a, m):
    R = make_witt_ring(p, a, m)
    rng = random.Random(p * 100 + a * 10 + m)
    for _ in range(50):
        x, y = R.random_element(rng), R.random_element(rng)
        assert R.frobenius(R.add(x, y)) == R.add(R.frobenius(x), R.frobenius(y))
        assert R.frobenius(R.mul(x, y)) == R.mul(R.frobenius(x), R.frobenius(y))


@pytest.mark.parametrize("p,a,m", [(3, 2, 4), (5, 2, 2), (3, 3, 3), (7, 2, 2), (3, 1, 6)])
def test_frobenius_order_divides_a(p, a, m):
    R = make_witt_ring(p, a, m)
    rng = random.Random(42)
    for _ in range(100):
        x = R.random_element(rng)
        y = x
        for _ in range(a):
            y = R.frobenius(y)
        assert y == x


def test_frobenius_fixes_one_and_teichmuller_powers():
    R = make_witt_ring(3, 2, 4)
    assert R.frobenius(R.one) == R.one
    F9 = R.residue_field
    rng = random.Random(7)
    for _ in range(20):
        u = F9.random_element(rng)
        t = R.teichmuller(u)
        # phi(tau(u)) = tau(u^p), checked by evaluating both sides
        assert R.frobenius(t) == R.teichmuller(F9.frobenius(u))
        assert R.frobenius(t) == R.pow(t, 3)


def test_reduction_commutes_with_frobenius():
    R = make_witt_ring(3, 2, 3)
    red = residue_reduction(R)
    rng = random.Random(3)
    for _ in range(50):
        x = R.random_element(rng)
        assert red(R.frobenius(x)) == R.residue_field.pow(red(x), 3)


def test_valuation_examples():
    R = modulus_ring(3, 4)
    assert valuation(R, R.from_int(9)) == 2
    assert valuation(R, R.zero) is BOTTOM
    assert valuation(R, R.from_int(5)) == 0
    W = make_witt_ring(3, 2, 3)
    assert valuation(W, W.from_int(9)) == 2
    assert valuation(W, W.zero) is BOTTOM


def test_valuation_is_additive_when_defined():
    W = make_witt_ring(3, 2, 5)
    rng = random.Random(11)
    checked = 0
    for _ in range(200):
        x, y = W.random_element(rng), W.random_element(rng)
        vx, vy = valuation(W, x), valuation(W, y)
        if vx is BOTTOM or vy is BOTTOM or vx + vy >= W.m:
            continue
        assert valuation(W, W.mul(x, y)) == vx + vy
        checked += 1
    assert checked > 50


def test_teichmuller_examples():
    R = make_witt_ring(3, 2, 2)
    F9 = R.residue_field
    assert teichmuller(R, F9.zero) == R.zero
    assert teichmuller(R, F9.one) == R.one
    u = F9.gen()  # a generator of F_9^* (the Conway polynomial is primitive)
    y = teichmuller(R, u)
    assert R.pow(y, 8) == R.one
    assert R.reduce_mod_p(y) == u


def test_witt_unit_inverse():
    R = make_witt_ring(3, 2, 4)
    rng = random.Random(5)
    for _ in range(50):
        x = R.random_element(rng)
        if not R.is_unit(x):
            continue
        assert R.mul(x, R.inv(x)) == R.one


@pytest.mark.parametrize("p", [2, 3])
def test_local_test_ring_unit_xor_maximal_ideal_exhaustive(p):
    T = local_test_ring(p, 1, 2)  # F_p[t]/(t^2)
    seen = 0
    for x in T.elements():
        assert T.is_unit(x) != T.in_maximal_ideal(x)
        seen += 1
    assert seen == p**2


def test_local_test_ring_inverse_and_nilpotence():
    T = local_test_ring(3, 1, 3)
    t = T.t_gen()
    assert T.is_zero(T.mul(T.mul(t, t), t))
    rng = random.Random(9)
    for _ in range(30):
        x = T.random_element(rng)
        if T.is_unit(x):
            assert T.mul(x, T.inv(x)) == T.one


def test_precision_reduction_and_embedding_are_homomorphisms():
    W = make_witt_ring(3, 2, 4)
    red = precision_reduction(W, 2)
    rng = random.Random(1)
    for _ in range(30):
        x, y = W.random_element(rng), W.random_element(rng)
        assert red(W.mul(x, y)) == red.target.mul(red(x), red(y))
        assert red(W.add(x, y)) == red.target.add(red(x), red(y))
    F3, F9 = finite_field(3), finite_field(3, 2)
    emb = prime_field_embedding(F3, F9)
    for x in F3.elements():
        for y in F3.elements():
            assert emb(F3.mul(x, y)) == F9.mul(emb(x), emb(y))


def test_element_string_round_trip():
    for R in (modulus_ring(3, 3), finite_field(3, 2), make_witt_ring(3, 2, 3)):
        rng = random.Random(4)
        for _ in range(20):
            x = R.random_element(rng)
            assert R.el_from_str(R.el_to_str(x)) == x
