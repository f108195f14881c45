from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypmod.errors import (BeyondPrecision, IdentityFails, NonInvertibleSeries,
                           NonUnitConstantTerm, NotInS4, NotInS5, OffGridFactor,
                           PoleInLowerParameter)
from hypmod.lmfdb import CURVES, curve_ap
from hypmod.qseries import (GRID, S4, S5, EtaQuotientSpec, FormalQSeries, _Blocks,
                            classical_hyp_series, coefficient_at, eta_series, format_fixture,
                            frac_power, hauptmodul, hyp_coefficients, identity_names,
                            identity_sides, k4_series, k5_series, parse_fixture,
                            q_log_derivative, rescale, rising, theta_and_borwein,
                            verify_identity)

F = Fraction


# -- oracle: eta quotients by naive polynomial multiplication -------------------

def naive_product(factors, n):
    """Integer coefficients c_0..c_{n-1} of prod_(d, e) prod_m (1 - q^(d m))^e.

    Negative exponents use the geometric series 1/(1 - x) = sum x^k.
    """
    c = [1] + [0] * (n - 1)
    for d, e in factors:
        for m in range(1, n):
            step = d * m
            if step >= n:
                break
            for _ in range(abs(e)):
                if e > 0:
                    for i in range(n - 1, step - 1, -1):
                        c[i] -= c[i - step]
                else:
                    for i in range(step, n):
                        c[i] += c[i - step]
    return c


def eta_oracle(factors, n):
    """{q-exponent: coefficient} of prod eta(d tau)^e to q^(lead + n - 1)."""
    lead = F(sum(d * e for d, e in factors), 24)
    c = naive_product(factors, n)
    return {lead + i: v for i, v in enumerate(c)}


def series_coeffs(s, lo, hi):
    return {n: s[n] for n in range(lo, hi)}


# -- basic arithmetic ------------------------------------------------------------

def test_eta_first_terms():
    s = eta_series(1, 1, 6)
    got = [s[F(1 + 24 * n, 24)] for n in range(6)]
    assert got == [1, -1, -1, 0, 0, 1]


def test_off_grid_rejected():
    with pytest.raises(OffGridFactor):
        eta_series(F(1, 3), 1, 5)
    with pytest.raises(OffGridFactor):
        FormalQSeries.monomial(F(1, 48))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 80))
def test_euler_product_consistency(d, prec):
    one = eta_series(d, 1, prec) * eta_series(d, -1, prec)
    assert one.equals(FormalQSeries.constant(1, one.precision))
    assert one.precision >= prec - F(d, 24)


@pytest.mark.parametrize("factors", [
    ((1, 1),), ((1, 24),), ((2, 4), (4, 4)), ((6, 4),), ((1, 8),), ((2, -8), (1, 16)),
    ((3, 2), (9, 2)), ((2, 24), (1, -24)),
])
def test_eta_quotient_matches_naive_oracle(factors):
    lead = F(sum(d * e for d, e in factors), 24)
    n = 60
    s = EtaQuotientSpec(factors).series(lead + n)
    assert {lead + i: s[lead + i] for i in range(n)} == eta_oracle(factors, n)


def test_beyond_precision():
    s = eta_series(1, 24, 10)
    with pytest.raises(BeyondPrecision):
        coefficient_at(s, 10)
    with pytest.raises(BeyondPrecision):
        s.integer_coefficients(11)


def test_inverse_and_division():
    s = eta_series(1, 8, 40)
    assert (s * s.inverse()).equals(FormalQSeries.constant(1, (s * s.inverse()).precision))
    with pytest.raises(NonInvertibleSeries):
        FormalQSeries.constant(0, 5).inverse()


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=12),
       st.fractions(min_value=-3, max_value=3, max_denominator=12))
def test_frac_power_composes(tail, alpha):
    s = FormalQSeries.from_dict({0: 1, **{F(i + 1): c for i, c in enumerate(tail)}},
                                len(tail) + 1)
    a = frac_power(s, alpha)
    b = frac_power(s, 1 - alpha)
    assert (a * b).equals(s)


def test_frac_power_examples():
    one_minus_q = FormalQSeries.from_dict({0: 1, 1: -1}, 50)
    h = frac_power(one_minus_q, F(1, 2))
    assert (h * h).equals(one_minus_q)
    sq = frac_power(FormalQSeries.from_dict({0: 1, 1: 1}, 10), 2)
    assert series_coeffs(sq, 0, 10) == {0: 1, 1: 2, 2: 1, **{n: 0 for n in range(3, 10)}}
    with pytest.raises(NonUnitConstantTerm):
        frac_power(FormalQSeries.from_dict({0: 2, 1: 1}, 10), F(1, 2))


def test_q_log_derivative_of_monomial():
    for m in (1, 3, F(5, 24)):
        d = q_log_derivative(FormalQSeries.monomial(m, 1, m + 10))
        assert d.equals(FormalQSeries.constant(m, d.precision))


def test_fixture_roundtrip():
    s = k4_series(F(1, 8), 12)
    text = format_fixture(s, "K4(1/8)")
    assert text.splitlines()[0] == "# K4(1/8)"
    back = parse_fixture(text)
    assert back.equals(s) and back.precision == s.precision


def test_fixture_number_field_entries():
    from hypmod.numberfield import nu_field
    K = nu_field()
    s = FormalQSeries.from_dict({1: K.from_poly([1, 2], 3), 2: 5}, 3)
    back = parse_fixture(format_fixture(s), field=K)
    assert back[1] == K.from_poly([1, 2], 3) and back[2] == 5


# -- K4 and K5 families ----------------------------------------------------------

def test_k4_examples():
    assert k4_series(F(1, 3), 30).equals(eta_series(1, 8, 30))
    f = rescale(k4_series(F(1, 2), 4), 2)
    assert f[3] == -4
    with pytest.raises(NotInS4):
        k4_series(F(1, 5), 10)


def test_k5_examples_against_point_counts():
    f = rescale(k5_series(F(1, 3), 3), 3)
    assert f[7] == -1 == curve_ap(CURVES["27.2.a.a"], 7)
    g = rescale(k5_series(F(1, 2), 4), 2)
    assert g[7] == -4 == curve_ap(CURVES["36.2.a.a"], 7)
    assert g.equals(eta_series(6, 4, 8))
    with pytest.raises(NotInS5):
        k5_series(F(3, 4), 10)


@pytest.mark.parametrize("r,label", [(F(1, 3), "27.2.a.a"), (F(1, 2), "36.2.a.a"),
                                     (F(1, 6), "36.2.a.a")])
def test_weight_two_forms_match_point_counts(r, label):
    f = rescale(k5_series(r, F(200, r.denominator)), r.denominator)
    for p in (5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if p % 3:
            assert f[p] == curve_ap(CURVES[label], p), p


def test_rescale_examples():
    assert rescale(k4_series(F(1, 8), 2), 8).valuation == 1
    assert rescale(k5_series(F(1, 12), 2), 12).valuation == 1
    assert rescale(eta_series(1, 1, 10), 2).equals(eta_series(2, 1, 20))


@pytest.mark.parametrize("r", S4)
def test_k4_support_pattern(r):
    N = r.denominator
    f = rescale(k4_series(r, F(600, N)), N)
    j = r.numerator
    assert f.valuation == j
    assert all((n - j) % N == 0 for n in (F(g, GRID) for g in f.support()))


@pytest.mark.parametrize("r", S5)
def test_k5_support_pattern(r):
    N = r.denominator
    f = rescale(k5_series(r, F(600, N)), N)
    j = r.numerator
    assert all((n - j) % N == 0 for n in (F(g, GRID) for g in f.support()))


# -- theta functions and Hauptmoduln ---------------------------------------------

def test_theta_and_borwein_examples():
    # q = exp(2 pi i tau): theta2 = sum q^((n + 1/2)^2 / 2) = 2 q^(1/8) (1 + q + q^3 + ...),
    # i.e. 2 Q^(1/4) (1 + Q^2 + ...) in Q = q^(1/2)
    th2 = theta_and_borwein("theta2", 10)
    assert th2.valuation == F(1, 8) and th2.leading() == 2
    for m in range(4):
        assert th2[F((2 * m + 1) ** 2, 8)] == 2
    a = theta_and_borwein("a", 10)
    assert a.is_integral_grid()
    assert a[0] == 1 and a[1] == 6
    b, c = theta_and_borwein("b", 50), theta_and_borwein("c", 50)
    a50 = theta_and_borwein("a", 50)
    assert (b ** 3 + c ** 3).truncate(50 * GRID).equals((a50 ** 3).truncate(50 * GRID))


def test_theta3_and_theta4_are_theta_sums():
    th3, th4 = theta_and_borwein("theta3", 60), theta_and_borwein("theta4", 60)
    for k in range(120):
        rep = sum(1 for m in range(-12, 13) if m * m == k)
        assert th3[F(k, 2)] == rep
        assert th4[F(k, 2)] == (-1) ** k * rep


def test_hauptmodul_leading_terms():
    assert hauptmodul("t2", 5).leading() == -64 and hauptmodul("t2", 5).valuation == 1
    assert hauptmodul("t3", 5).leading() == 27 and hauptmodul("t3", 5).valuation == 1


def test_classical_hyp_series():
    r = F(1, 5)
    c = hyp_coefficients([F(1, 3), r], [1], 3)
    assert c[0] == 1 and c[1] == F(1, 3) * r
    c3 = hyp_coefficients([F(1, 2)] * 3, [1, 1], 3)
    assert c3[2] == rising(F(1, 2), 2) ** 3 / (rising(1, 2) ** 2 * 2) == F(27, 512)
    with pytest.raises(PoleInLowerParameter):
        classical_hyp_series([F(1, 2)] * 3, [0, 1], 5)


# -- identity catalog -------------------------------------------------------------

def test_identity_catalog_contents():
    names = identity_names()
    assert len(names) == 7 + len(S4) + len(S5) == 37
    for name in ("3F2_hauptmodul", "derivative", "hauptmodul_theta", "cubic_t3",
                 "cubic_1-t3", "cubic_dlog", "cubic_borwein"):
        assert name in names


@pytest.fixture(scope="module")
def blocks100():
    return _Blocks(100)


@pytest.mark.parametrize("name", ["3F2_hauptmodul", "derivative", "hauptmodul_theta",
                                  "cubic_t3", "cubic_1-t3", "cubic_dlog", "cubic_borwein",
                                  "K4eval:1/6", "K4eval:7/24", "K5eval:1/3", "K5eval:7/12"])
def test_identities_to_q100(name, blocks100):
    rep = verify_identity(name, 100, blocks=blocks100)
    assert rep.passed and rep.checked_terms > 0


def test_k4eval_at_1_6_to_q200():
    assert verify_identity("K4eval:1/6", 200).passed


@pytest.mark.parametrize("exponent", [3, 7, 20])
def test_perturbed_theta4_is_detected(exponent):
    with pytest.raises(IdentityFails) as info:
        verify_identity("3F2_hauptmodul", 60, perturb={"theta4": (exponent, 1)})
    # theta4 enters as theta4(2 tau), so a change at q^e shows up at q^(2e)
    assert info.value.exponent == 2 * exponent


@pytest.mark.parametrize("name,block,expected", [
    ("cubic_t3", "c", F(29, 3)),            # c^3 = 27 q (1 + ...): shift by 2/3
    ("cubic_borwein", "b", F(9)),           # b = 1 + ...: no shift
    ("hauptmodul_theta", "theta3", F(10)),  # theta2^8 = 256 q (1 + ...): shift by 1
])
def test_perturbation_detected_at_its_exponent(name, block, expected):
    with pytest.raises(IdentityFails) as info:
        verify_identity(name, 40, perturb={block: (9, -2)})
    assert info.value.exponent == expected


def test_identity_fails_carries_both_sides():
    with pytest.raises(IdentityFails) as info:
        verify_identity("cubic_borwein", 30, perturb={"a": (5, 1)})
    err = info.value
    assert err.name == "cubic_borwein" and err.lhs != err.rhs


def test_identity_sides_are_exact_rationals():
    lhs, rhs = identity_sides("K5eval:1/12", 30)
    for _, c in lhs.terms():
        assert isinstance(c, (int, Fraction))
