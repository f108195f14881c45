import cmath
import math
import random
from fractions import Fraction

import pytest
import sympy

from hypmod.errors import (LengthMismatch, MissingUnitLowerParameter, NotPrimitive,
                           PrimeNotSplit, TZero, ZArgumentZero)
from hypmod.field import (MultiplicativeCharacter, build_field, char_eval, char_from_rational,
                          make_backend)
from hypmod.hypergeometric import (H_q, P_HD, appell_F1, appell_F1_rational, appell_F2,
                                   greene_F, hd_k4, hd_k5, hd_k5_bar, make_datum, period_P,
                                   period_prefactor_sign, transform_P)
from hypmod.qseries import S5
from hypmod.verify import K4_R, K5_R

HALF, THIRD = Fraction(1, 2), Fraction(1, 3)


# -- direct-summation oracles ------------------------------------------------------

def _val(ctx, e, x):
    x %= ctx.p
    if x == 0:
        return 0
    return cmath.exp(2j * math.pi * e * ctx.log(x) / ctx.order)


def oracle_jacobi(ctx, a, b):
    return sum(_val(ctx, a, x) * _val(ctx, b, 1 - x) for x in range(ctx.p))


def oracle_period(ctx, R, Q, z):
    """Sum over all characters chi of prod_i (Q_i chi)(-1) J(R_i chi, conj(Q_i chi)) chi(z),
    times the prefactor and 1/(p-1)."""
    n = ctx.order
    qs = [0] + [q.exponent for q in Q]
    total = 0
    for k in range(n):
        term = _val(ctx, k, z)
        for r, b in zip(R, qs):
            term *= _val(ctx, b + k, -1) * oracle_jacobi(ctx, r.exponent + k, -(b + k))
        total += term
    return total * period_prefactor_sign(R, Q) / n


def oracle_F1(ctx, e1, e2, e3, e4, x, y):
    if x * y % ctx.p == 0:
        return 0
    s = sum(_val(ctx, e1, u) * _val(ctx, e4 - e1, 1 - u) * _val(ctx, -e2, 1 - u * x)
            * _val(ctx, -e3, 1 - u * y) for u in range(ctx.p))
    return s * _val(ctx, e1 + e4, -1)


def oracle_F2(ctx, e1, e2, e3, e4, e5, x, y):
    if x * y % ctx.p == 0:
        return 0
    s = 0
    for u in range(ctx.p):
        for v in range(ctx.p):
            s += (_val(ctx, e2, u) * _val(ctx, e3, v) * _val(ctx, e4 - e2, 1 - u)
                  * _val(ctx, e5 - e3, 1 - v) * _val(ctx, -e1, 1 - u * x - v * y))
    return s * _val(ctx, e2 + e3 + e4 + e5, -1)


def equal_on(bk, a, b) -> bool:
    return bk.is_zero(a - b)


# -- data ----------------------------------------------------------------------------

def test_make_datum_examples():
    k4 = hd_k4(Fraction(1, 8))
    assert k4.M == 8 and k4.primitive and k4.gamma == 1 and k4.C1 == -64
    k5 = hd_k5(THIRD)
    assert k5.M == 3 and k5.primitive and k5.gamma == THIRD and k5.C1 == 27
    with pytest.raises(MissingUnitLowerParameter):
        make_datum([HALF], [HALF])
    with pytest.raises(LengthMismatch):
        make_datum([HALF, HALF], [1])


# -- period and Greene functions -------------------------------------------------

def test_one_p_zero():
    ctx = build_field(7)
    phi = char_from_rational(ctx, HALF)
    assert abs(period_P([phi], [], 3) + 1) < 1e-12


@pytest.mark.parametrize("p", [7, 13])
def test_period_matches_oracle_for_k5(p):
    ctx = build_field(p)
    R, Q = hd_k5(THIRD).characters(ctx)
    assert abs(period_P(R, Q, 1) - oracle_period(ctx, R, Q, 1)) < 1e-8


@pytest.mark.parametrize("p", [5, 7, 11])
def test_period_matches_oracle_random(p):
    ctx = build_field(p)
    rng = random.Random(p)
    for _ in range(6):
        m = rng.choice([2, 3])
        R = [MultiplicativeCharacter(rng.randrange(p - 1), ctx) for _ in range(m)]
        Q = [MultiplicativeCharacter(rng.randrange(p - 1), ctx) for _ in range(m - 1)]
        z = rng.randrange(1, p)
        assert abs(period_P(R, Q, z) - oracle_period(ctx, R, Q, z)) < 1e-7


def test_period_relation_random_data_p13():
    ctx = build_field(13)
    bk = make_backend(ctx, "modular", 10**6)
    rng = random.Random(13)
    for _ in range(10):
        m = rng.choice([2, 3, 4])
        R = [MultiplicativeCharacter(rng.randrange(12), ctx) for _ in range(m)]
        Q = [MultiplicativeCharacter(rng.randrange(12), ctx) for _ in range(m - 1)]
        z = rng.randrange(1, 13)
        lhs = period_P(R, Q, z, bk)
        rhs = greene_F(R, Q, z, bk) * (13 ** (m - 1) * period_prefactor_sign(R, Q))
        assert equal_on(bk, lhs, rhs)


def _catalog_data():
    out = [("K4", r, hd_k4(r)) for r in K4_R]
    out += [("K5", r, hd_k5(r)) for r in S5]
    out += [("K5bar", r, hd_k5_bar(r)) for r in S5]
    return out


@pytest.mark.parametrize("kind,r,hd", _catalog_data(),
                         ids=[f"{k}-{r}" for k, r, _ in _catalog_data()])
def test_greene_period_relation_on_catalog(kind, r, hd):
    for p in sympy.primerange(3, 201):
        if not hd.is_split(p):
            continue
        ctx = build_field(p)
        bk = make_backend(ctx, "modular", 10**12)
        R, Q = hd.characters(ctx)
        lhs = period_P(R, Q, 1, bk)
        rhs = greene_F(R, Q, 1, bk) * (p ** (len(R) - 1) * period_prefactor_sign(R, Q))
        assert equal_on(bk, lhs, rhs), p


def test_greene_F_at_zero_is_zero():
    ctx = build_field(13)
    R, Q = hd_k4(HALF).characters(ctx)
    assert abs(greene_F(R, Q, 0)) < 1e-12


# -- P_HD ----------------------------------------------------------------------------

def test_p_hd_small_prime():
    # P + phi(-1) 3 = -psi a_3 with a_3 = -4, psi = phi(-1) = -1
    P = P_HD(hd_k4(HALF), 1, 3)
    assert abs(P + 1) < 1e-9


def test_p_hd_errors():
    with pytest.raises(PrimeNotSplit):
        P_HD(hd_k5(Fraction(1, 12)), 1, 7)
    with pytest.raises(ZArgumentZero):
        P_HD(hd_k4(HALF), 0, 5)


def test_h_q():
    with pytest.raises(NotPrimitive):
        H_q(make_datum([1, HALF], [1, 1]), 1, 5)
    ctx = build_field(7)
    hd = hd_k5(THIRD)
    R, _ = hd.characters(ctx)
    expected = P_HD(hd, 1, 7) / oracle_jacobi(ctx, R[1].exponent,
                                              char_from_rational(ctx, 1 - THIRD).exponent)
    assert abs(H_q(hd, 1, 7) - expected) < 1e-9


@pytest.mark.parametrize("hd", [hd_k4(r) for r in K4_R] + [hd_k5(r) for r in S5],
                         ids=lambda h: h.family)
def test_katz_weil_bound(hd):
    n = hd.length
    for p in sympy.primerange(3, 400):
        if hd.is_split(p):
            assert abs(P_HD(hd, 1, p)) <= (n - 1) * p ** ((n - 1) / 2) + 1e-6


# -- Appell series -----------------------------------------------------------------

def test_appell_vanish_on_axes():
    ctx = build_field(13)
    chars = [MultiplicativeCharacter(e, ctx) for e in (1, 2, 3, 4, 5)]
    assert appell_F1(*chars[:4], 0, 3) == 0
    assert appell_F1(*chars[:4], 3, 0) == 0
    assert appell_F2(*chars, 2, 0) == 0
    assert appell_F2(*chars, 0, 2) == 0


def test_appell_f1_random_against_oracle():
    ctx = build_field(11)
    rng = random.Random(11)
    for _ in range(10):
        es = [rng.randrange(10) for _ in range(4)]
        x, y = rng.randrange(1, 11), rng.randrange(1, 11)
        got = appell_F1(*[MultiplicativeCharacter(e, ctx) for e in es], x, y)
        assert abs(got - oracle_F1(ctx, *es, x, y)) < 1e-8


def test_appell_f2_random_against_oracle():
    ctx = build_field(11)
    rng = random.Random(12)
    for _ in range(4):
        es = [rng.randrange(10) for _ in range(5)]
        x, y = rng.randrange(1, 11), rng.randrange(1, 11)
        got = appell_F2(*[MultiplicativeCharacter(e, ctx) for e in es], x, y)
        assert abs(got - oracle_F2(ctx, *es, x, y)) < 1e-7


@pytest.mark.parametrize("r", K5_R)
def test_f1_reduces_to_period(r):
    """F1(a; b, b'; 1; 1, 1) = iota(a)(-1) P({b + b', a}, {1, 1}; 1)."""
    sixth = Fraction(1, 6)
    for p in sympy.primerange(3, 201):
        if (p - 1) % math.lcm(6, r.denominator):
            continue
        ctx = build_field(p)
        bk = make_backend(ctx, "modular", 10**6)
        lhs = appell_F1_rational(r, sixth, sixth, 1, 1, 1, p, bk)
        P = P_HD(make_datum([THIRD, r], [1, 1]), 1, p, bk)
        rhs = char_eval(char_from_rational(ctx, r), -1, bk) * P
        assert equal_on(bk, lhs, rhs), p


def test_f1_reduction_example_p13():
    ctx = build_field(13)
    a, b = THIRD, Fraction(1, 6)
    lhs = appell_F1_rational(a, b, b, 1, 1, 1, 13)
    rhs = char_eval(char_from_rational(ctx, a), -1) * period_P(
        [char_from_rational(ctx, 2 * b), char_from_rational(ctx, a)],
        [char_from_rational(ctx, 1)], 1)
    assert abs(lhs - rhs) < 1e-9


# -- the 1/t transformation --------------------------------------------------------

@pytest.mark.parametrize("p", [13, 61])
def test_transform_random(p):
    ctx = build_field(p)
    rng = random.Random(p)
    for _ in range(50):
        m = rng.choice([2, 3, 4])
        A = [MultiplicativeCharacter(rng.randrange(p - 1), ctx) for _ in range(m)]
        B = [MultiplicativeCharacter(rng.randrange(p - 1), ctx) for _ in range(m - 1)]
        t = rng.randrange(1, p)
        new_a, new_b, pref = transform_P(A, B, t)
        lhs = period_P(A, B, pow(t, -1, p))
        assert abs(lhs - pref * period_P(new_a, new_b, t)) < 1e-6


def test_transform_k4_at_one():
    ctx = build_field(13)
    bk = make_backend(ctx, "modular", 10**6)
    A, B = hd_k4(HALF).characters(ctx)
    new_a, new_b, pref = transform_P(A, B, 1, bk)
    assert equal_on(bk, period_P(A, B, 1, bk), pref * period_P(new_a, new_b, 1, bk))


def test_transform_is_an_involution_on_data():
    ctx = build_field(13)
    rng = random.Random(5)
    for _ in range(20):
        A = [MultiplicativeCharacter(rng.randrange(12), ctx) for _ in range(3)]
        B = [MultiplicativeCharacter(rng.randrange(12), ctx) for _ in range(2)]
        a1, b1, _ = transform_P(A, B, 2)
        a2, b2, _ = transform_P(a1, b1, 2)
        assert a2[0] == A[0]
        assert sorted(c.exponent for c in a2[1:]) == sorted(c.exponent for c in A[1:])
        assert sorted(c.exponent for c in b2) == sorted(c.exponent for c in B)


def test_transform_rejects_zero():
    ctx = build_field(13)
    A, B = hd_k4(HALF).characters(ctx)
    with pytest.raises(TZero):
        transform_P(A, B, 0)
