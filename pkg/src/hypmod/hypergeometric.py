"""Hypergeometric data and finite-field hypergeometric character sums.

Greene's function and the period function share one character sum

    S(z) = sum_chi prod_i Q_i chi(-1) J(R_i chi, conj(Q_i chi)) chi(z),

i.e. the product of binomial numerators with every 1/q divisor deferred.
Both normalisations divide S exactly once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    LengthMismatch,
    MissingUnitLowerParameter,
    NotPrimitive,
    PrimeNotSplit,
    TZero,
    ZArgumentZero,
    ZeroDenominatorJacobi,
)
from .field import (
    ComplexBackend,
    MultiplicativeCharacter,
    PrimeFieldContext,
    _same_context,
    build_field,
    char_eval,
    char_from_rational,
    jacobi_family,
    jacobi_sum,
    trivial_character,
)

HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)


def lcd(values) -> int:
    """Least positive common denominator of a collection of rationals."""
    return math.lcm(*(Fraction(v).denominator for v in values))


@dataclass(frozen=True)
class HypergeometricDatum:
    """alpha = (r_1..r_n), beta = (q_1 = 1, q_2..q_n)."""

    alpha: tuple
    beta: tuple
    C1: int | None = None
    family: str | None = None

    @property
    def length(self) -> int:
        return len(self.alpha)

    @property
    def M(self) -> int:
        return lcd(self.alpha + self.beta)

    @property
    def primitive(self) -> bool:
        return all((r - q).denominator != 1 for r in self.alpha for q in self.beta)

    @property
    def gamma(self) -> Fraction:
        return -1 + sum(q - r for r, q in zip(self.alpha, self.beta))

    def is_split(self, p: int) -> bool:
        return p % self.M == 1

    def characters(self, ctx: PrimeFieldContext):
        """(R_1..R_n, Q_2..Q_n) as characters of F_p."""
        if ctx.p % self.M != 1:
            raise PrimeNotSplit(f"p = {ctx.p} is not 1 mod M = {self.M}")
        R = [char_from_rational(ctx, r) for r in self.alpha]
        Q = [char_from_rational(ctx, q) for q in self.beta[1:]]
        return R, Q


def make_datum(alpha: Sequence, beta: Sequence) -> HypergeometricDatum:
    """Build a datum; recognises the K4 and K5 families and attaches C_1."""
    alpha = tuple(Fraction(a) for a in alpha)
    beta = tuple(Fraction(b) for b in beta)
    if len(alpha) != len(beta):
        raise LengthMismatch(f"|alpha| = {len(alpha)} but |beta| = {len(beta)}")
    if not beta or beta[0] != 1:
        raise MissingUnitLowerParameter("beta must start with q_1 = 1")
    C1 = family = None
    if len(alpha) == 4 and sorted(alpha[:3]) == [HALF] * 3 and beta[1:3] == (1, 1) \
            and beta[3] == alpha[3] + HALF:
        C1, family = -64, f"K4({alpha[3]})"
    elif len(alpha) == 2 and alpha[0] == THIRD and beta == (1, 1):
        C1, family = 27, f"K5({alpha[1]})"
    return HypergeometricDatum(alpha, beta, C1, family)


def hd_k4(r) -> HypergeometricDatum:
    r = Fraction(r)
    return make_datum([HALF, HALF, HALF, r], [1, 1, 1, r + HALF])


def hd_k5(r) -> HypergeometricDatum:
    return make_datum([THIRD, Fraction(r)], [1, 1])


def hd_k5_bar(r) -> HypergeometricDatum:
    return make_datum([2 * THIRD, 1 - Fraction(r)], [1, 1])


# ---------------------------------------------------------------------------
# Greene and period functions
# ---------------------------------------------------------------------------

def _backend(ctx, backend):
    return ComplexBackend(ctx) if backend is None else backend


def binomial_sum(R: Sequence[MultiplicativeCharacter], Q: Sequence[MultiplicativeCharacter],
                 z, backend=None):
    """S(z) for characters R_1..R_m and Q_2..Q_m (Q_1 is trivial)."""
    ctx = _same_context(*R, *Q)
    if len(R) != len(Q) + 1:
        raise LengthMismatch("need one more upper than lower character")
    bk = _backend(ctx, backend)
    z = ctx.reduce(z)
    if z == 0:
        return bk.const(0)
    n = ctx.order
    k = np.arange(n)
    qs = [0] + [c.exponent for c in Q]
    terms = bk.zeta(k * int(ctx.dlog[z]))
    for r, b in zip(R, qs):
        # J(R chi^k, conj(Q chi^k)) = J(chi^(a+k), chi^(-b-k)); (Q chi^k)(-1) = (-1)^(b+k)
        fam = jacobi_family(ctx, r.exponent, -b, bk)
        sign = np.where((b + k) % 2 == 1, -1, 1)
        terms = terms * fam * _signs(bk, sign)
    return bk.total(terms)


def _signs(bk, sign):
    if isinstance(bk, ComplexBackend):
        return sign
    return bk.zeta(np.where(sign < 0, bk.ctx.order // 2, 0))


def greene_F(R: Sequence[MultiplicativeCharacter], Q: Sequence[MultiplicativeCharacter],
             z, backend=None):
    """Greene's _{m}F_{m-1}(R; Q | z) with m = len(R)."""
    ctx = _same_context(*R, *Q)
    q = ctx.p
    s = binomial_sum(R, Q, z, backend)
    return s / ((q - 1) * q ** (len(R) - 1))


def period_prefactor_sign(R, Q) -> int:
    """prod_{i>=2} R_i Q_i(-1)."""
    return (-1) ** sum(r.exponent + c.exponent for r, c in zip(R[1:], Q))


def period_P(R: Sequence[MultiplicativeCharacter], Q: Sequence[MultiplicativeCharacter],
             z, backend=None):
    """The period function _{m}P_{m-1}[R; Q | z] for z != 0."""
    ctx = _same_context(*R, *Q)
    bk = _backend(ctx, backend)
    zr = ctx.reduce(z)
    if zr == 0:
        raise ZArgumentZero("period functions are defined for z != 0")
    if len(R) == 1:
        if Q:
            raise LengthMismatch("_1P_0 takes no lower characters")
        return char_eval(R[0].conjugate(), 1 - zr, bk)
    s = binomial_sum(R, Q, zr, bk)
    return s * period_prefactor_sign(R, Q) / (ctx.p - 1)


def _datum_ctx(hd: HypergeometricDatum, p: int) -> PrimeFieldContext:
    ctx = build_field(p)
    if not hd.is_split(p):
        raise PrimeNotSplit(f"p = {p} is not 1 mod M = {hd.M}")
    return ctx


def P_HD(hd: HypergeometricDatum, z, p: int, backend=None):
    """P(HD; z; p): the period function at iota_p of the datum."""
    ctx = _datum_ctx(hd, p)
    if ctx.reduce(z) == 0:
        raise ZArgumentZero("P(HD; z) needs z != 0")
    R, Q = hd.characters(ctx)
    return period_P(R, Q, z, backend)


def H_q(hd: HypergeometricDatum, z, p: int, backend=None):
    """P(HD; z) divided by prod_{i>=2} J(iota(r_i), iota(q_i - r_i))."""
    if not hd.primitive:
        raise NotPrimitive(f"{hd.alpha}, {hd.beta} is not primitive")
    ctx = _datum_ctx(hd, p)
    bk = _backend(ctx, backend)
    value = P_HD(hd, z, p, bk)
    for r, q in zip(hd.alpha[1:], hd.beta[1:]):
        j = jacobi_sum(char_from_rational(ctx, r), char_from_rational(ctx, q - r), bk)
        if bk.is_zero(j) or (not isinstance(bk, ComplexBackend) and 0 in j.residues()):
            raise ZeroDenominatorJacobi(f"J({r}, {q - r}) vanishes at p = {p}")
        value = value / j
    return value


# ---------------------------------------------------------------------------
# Appell series
# ---------------------------------------------------------------------------

def _masked_hist(ctx: PrimeFieldContext, factors):
    """Counts of total exponents over points where every argument is a unit.

    ``factors`` is a list of (exponent, argument array) pairs on a common grid.
    """
    n = ctx.order
    p = ctx.p
    mask = None
    total = 0
    for e, arg in factors:
        arg = arg % p
        m = arg != 0
        mask = m if mask is None else mask & m
        total = total + (e % n) * ctx.dlog[arg]
    return np.bincount((total[mask] % n).ravel(), minlength=n)


def appell_F1(R1, R2, R3, R4, x, y, backend=None):
    """F_1(R1; R2, R3; R4; x, y), a single sum over u in F_p."""
    ctx = _same_context(R1, R2, R3, R4)
    bk = _backend(ctx, backend)
    x, y = ctx.reduce(x), ctx.reduce(y)
    if x * y % ctx.p == 0:
        return bk.const(0)
    u = np.arange(ctx.p, dtype=np.int64)
    counts = _masked_hist(ctx, [
        (R1.exponent, u),
        (R4.exponent - R1.exponent, 1 - u),
        (-R2.exponent, 1 - u * x),
        (-R3.exponent, 1 - u * y),
    ])
    return bk.hist_sum(counts) * (R1 * R4).sign()


def appell_F2(R1, R2, R3, R4, R5, x, y, backend=None):
    """F_2(R1; R2, R3; R4, R5; x, y), a double sum over (u, v) in F_p^2."""
    ctx = _same_context(R1, R2, R3, R4, R5)
    bk = _backend(ctx, backend)
    x, y = ctx.reduce(x), ctx.reduce(y)
    if x * y % ctx.p == 0:
        return bk.const(0)
    u, v = np.meshgrid(np.arange(ctx.p, dtype=np.int64),
                       np.arange(ctx.p, dtype=np.int64), indexing="ij")
    counts = _masked_hist(ctx, [
        (R2.exponent, u),
        (R3.exponent, v),
        (R4.exponent - R2.exponent, 1 - u),
        (R5.exponent - R3.exponent, 1 - v),
        (-R1.exponent, 1 - u * x - v * y),
    ])
    return bk.hist_sum(counts) * (R2 * R3 * R4 * R5).sign()


def appell_F1_rational(r1, r2, r3, r4, x, y, p, backend=None):
    ctx = build_field(p)
    chars = [char_from_rational(ctx, r) for r in (r1, r2, r3, r4)]
    return appell_F1(*chars, x, y, backend)


def appell_F2_rational(r1, r2, r3, r4, r5, x, y, p, backend=None):
    ctx = build_field(p)
    chars = [char_from_rational(ctx, r) for r in (r1, r2, r3, r4, r5)]
    return appell_F2(*chars, x, y, backend)


# ---------------------------------------------------------------------------
# transformation 1/t <-> t
# ---------------------------------------------------------------------------

def transform_P(A: Sequence[MultiplicativeCharacter], B: Sequence[MultiplicativeCharacter],
                t, backend=None):
    """Right-hand side of P[A; B | 1/t] = prefactor * P[A'; B' | t].

    Returns (A', B', prefactor) with A' = (A1, A1 conj(B_i)),
    B' = (A1 conj(A_i)) and prefactor = A1(-t) prod_{i>=2} A_i B_i(-1).
    """
    ctx = _same_context(*A, *B)
    t = ctx.reduce(t)
    if t == 0:
        raise TZero("t must be nonzero")
    a1 = A[0]
    new_a = [a1] + [a1 / b for b in B]
    new_b = [a1 / a for a in A[1:]]
    bk = _backend(ctx, backend)
    pref = char_eval(a1, -t, bk) * period_prefactor_sign(A, B)
    return new_a, new_b, pref


__all__ = [
    "HypergeometricDatum", "make_datum", "hd_k4", "hd_k5", "hd_k5_bar", "lcd",
    "binomial_sum", "greene_F", "period_P", "P_HD", "H_q",
    "appell_F1", "appell_F2", "appell_F1_rational", "appell_F2_rational",
    "transform_P", "trivial_character",
]
