"""Truncated formal q-series on the 1/24 exponent grid.

A series is stored on a lattice: ``coeffs[i]`` is the coefficient of
q^((start + i*step)/24), every grid exponent off that lattice is exactly zero,
and everything at or beyond ``prec`` (grid units, exclusive) is unknown.
Coefficients may be ints, Fractions or number-field elements; all
arithmetic is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    BeyondPrecision,
    IdentityFails,
    NonInvertibleSeries,
    NonUnitConstantTerm,
    NotInS4,
    NotInS5,
    OffGridFactor,
    PoleInLowerParameter,
    PrecisionUnderflow,
)

GRID = 24


def to_grid(prec) -> int:
    """q-exponent (int or rational) -> grid units, rounded up."""
    return math.ceil(Fraction(prec) * GRID)


def _simplify(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _convolve(a: list, b: list, length: int) -> list:
    out = [0] * length
    nb = len(b)
    for i, x in enumerate(a):
        if i >= length:
            break
        if not x:
            continue
        m = min(nb, length - i)
        out[i:i + m] = [o + x * y for o, y in zip(out[i:i + m], b)]
    return out


class FormalQSeries:
    """sum_i coeffs[i] q^((start + i*step)/24) + O(q^(prec/24))."""

    __slots__ = ("start", "step", "coeffs", "prec")

    def __init__(self, start: int, step: int, coeffs: Iterable, prec: int):
        if step <= 0:
            raise ValueError("step must be positive")
        self.start = int(start)
        self.step = int(step)
        self.prec = int(prec)
        n = max(0, -(-(self.prec - self.start) // self.step))
        coeffs = list(coeffs)[:n]
        coeffs += [0] * (n - len(coeffs))
        self.coeffs = coeffs
        self._canon()

    # -- construction ------------------------------------------------------
    @classmethod
    def monomial(cls, exponent, coeff=1, prec=None) -> "FormalQSeries":
        g = to_grid(exponent)
        if Fraction(exponent) * GRID != g:
            raise OffGridFactor(f"q^{exponent} is not on the 1/{GRID} grid")
        p = g + 1 if prec is None else to_grid(prec)
        return cls(g, GRID, [coeff], p)

    @classmethod
    def from_dict(cls, terms: dict, prec) -> "FormalQSeries":
        """Build from {q-exponent: coefficient}."""
        p = to_grid(prec)
        if not terms:
            return cls(p, GRID, [], p)
        gs = {to_grid(e): c for e, c in terms.items()}
        lo = min(gs)
        step = 0
        for g in gs:
            step = math.gcd(step, g - lo)
        step = step or GRID
        n = max(0, -(-(p - lo) // step))
        coeffs = [0] * n
        for g, c in gs.items():
            if g < p:
                coeffs[(g - lo) // step] = c
        return cls(lo, step, coeffs, p)

    @classmethod
    def constant(cls, c, prec) -> "FormalQSeries":
        return cls(0, GRID, [c], to_grid(prec))

    def _canon(self):
        # drop leading zeros
        k = 0
        while k < len(self.coeffs) and not self.coeffs[k]:
            k += 1
        if k == len(self.coeffs):
            self.start, self.coeffs = self.prec, []
            return
        if k:
            self.start += k * self.step
            self.coeffs = self.coeffs[k:]
        # coarsen the lattice to the support
        g = 0
        for i, c in enumerate(self.coeffs):
            if c:
                g = math.gcd(g, i)
                if g == 1:
                    return
        if g > 1:
            self.coeffs = self.coeffs[::g]
            self.step *= g

    # -- inspection --------------------------------------------------------
    @property
    def precision(self) -> Fraction:
        """Exclusive precision as a q-exponent."""
        return Fraction(self.prec, GRID)

    @property
    def valuation(self) -> Fraction | None:
        return None if self.is_zero() else Fraction(self.start, GRID)

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self):
        return self.coeffs[0] if self.coeffs else 0

    def terms(self):
        """Yield (grid exponent, coefficient) over the nonzero support."""
        for i, c in enumerate(self.coeffs):
            if c:
                yield self.start + i * self.step, c

    def support(self) -> list[int]:
        return [g for g, _ in self.terms()]

    def coeff_grid(self, g: int):
        if g >= self.prec:
            raise BeyondPrecision(f"q^({g}/{GRID}) is beyond precision q^({self.prec}/{GRID})")
        if self.is_zero() or g < self.start or (g - self.start) % self.step:
            return 0
        return self.coeffs[(g - self.start) // self.step]

    def __getitem__(self, n):
        """Coefficient of q^n, n a q-exponent."""
        g = Fraction(n) * GRID
        if g.denominator != 1:
            return 0
        return self.coeff_grid(int(g))

    def is_integral_grid(self) -> bool:
        """True when every exponent in the support is an integer."""
        return self.is_zero() or (self.start % GRID == 0 and self.step % GRID == 0)

    def integer_coefficients(self, n: int) -> list:
        """Coefficients of q^0..q^(n-1) as a dense list."""
        if n * GRID > self.prec:
            raise BeyondPrecision(f"need q^{n - 1}, have O(q^{self.precision})")
        return [self.coeff_grid(GRID * m) for m in range(n)]

    def __repr__(self):
        shown = []
        for g, c in list(self.terms())[:6]:
            shown.append(f"{c}*q^({Fraction(g, GRID)})")
        body = " + ".join(shown) or "0"
        return f"{body} + O(q^({self.precision}))"

    # -- arithmetic --------------------------------------------------------
    def _on(self, start: int, step: int, prec: int) -> list:
        """Dense coefficient list on the lattice start + step*Z below prec."""
        n = max(0, -(-(prec - start) // step))
        out = [0] * n
        for g, c in self.terms():
            if g >= prec:
                break
            out[(g - start) // step] = c
        return out

    def truncate(self, prec) -> "FormalQSeries":
        """Lower the precision to ``prec`` grid units."""
        return FormalQSeries(self.start, self.step, self.coeffs, min(self.prec, int(prec)))

    def __add__(self, other):
        if not isinstance(other, FormalQSeries):
            other = FormalQSeries.constant(other, self.precision)
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return other.truncate(prec)
        if other.is_zero():
            return self.truncate(prec)
        start = min(self.start, other.start)
        step = math.gcd(self.step, other.step, self.start - other.start)
        a = self._on(start, step, prec)
        b = other._on(start, step, prec)
        return FormalQSeries(start, step, [x + y for x, y in zip(a, b)], prec)

    __radd__ = __add__

    def __neg__(self):
        return FormalQSeries(self.start, self.step, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "FormalQSeries":
        return FormalQSeries(self.start, self.step, [c * x for x in self.coeffs], self.prec)

    def shift(self, exponent) -> "FormalQSeries":
        """Multiply by q^exponent."""
        g = Fraction(exponent) * GRID
        if g.denominator != 1:
            raise OffGridFactor(f"q^{exponent} is off the grid")
        g = int(g)
        return FormalQSeries(self.start + g, self.step, self.coeffs, self.prec + g)

    def __mul__(self, other):
        if not isinstance(other, FormalQSeries):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            prec = min(self.prec + (other.start if not other.is_zero() else other.prec),
                       other.prec + (self.start if not self.is_zero() else self.prec))
            return FormalQSeries(prec, GRID, [], prec)
        start = self.start + other.start
        prec = min(self.prec + other.start, other.prec + self.start)
        step = math.gcd(self.step, other.step)
        a = self._on(self.start, step, self.prec)
        b = other._on(other.start, step, other.prec)
        n = max(0, -(-(prec - start) // step))
        return FormalQSeries(start, step, _convolve(a, b, n), prec)

    def __rmul__(self, other):
        return self.scale(other)

    def inverse(self) -> "FormalQSeries":
        if self.is_zero():
            raise NonInvertibleSeries("zero series")
        c0 = self.coeffs[0]
        if isinstance(c0, int) and c0 not in (1, -1):
            inv0 = Fraction(1, c0)
        elif isinstance(c0, int):
            inv0 = c0
        else:
            try:
                inv0 = 1 / c0
            except ZeroDivisionError as exc:
                raise NonInvertibleSeries("leading coefficient is not a unit") from exc
        f = self.coeffs
        n = len(f)
        g = [0] * n
        g[0] = inv0
        nz = [(k, c) for k, c in enumerate(f) if c and k]
        for m in range(1, n):
            acc = 0
            for k, c in nz:
                if k > m:
                    break
                acc += c * g[m - k]
            g[m] = _simplify(-inv0 * acc)
        rel = self.prec - self.start
        return FormalQSeries(-self.start, self.step, g, rel - self.start)

    def __truediv__(self, other):
        if isinstance(other, FormalQSeries):
            return self * other.inverse()
        return self.scale(Fraction(1) / other if isinstance(other, int) else 1 / other)

    def __pow__(self, n: int) -> "FormalQSeries":
        if not isinstance(n, int):
            return frac_power(self, n)
        if n < 0:
            return self.inverse() ** (-n)
        if self.is_zero():
            return FormalQSeries.constant(1, self.precision) if n == 0 else self
        if self.coeffs[0] == 1:
            return _miller_power(self, n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def first_difference(self, other: "FormalQSeries"):
        """Smallest grid exponent where the two series differ, or None."""
        prec = min(self.prec, other.prec)
        diff = (self - other).truncate(prec)
        return None if diff.is_zero() else diff.start

    def equals(self, other: "FormalQSeries") -> bool:
        return self.first_difference(other) is None

    def map(self, fn) -> "FormalQSeries":
        return FormalQSeries(self.start, self.step, [fn(c) for c in self.coeffs], self.prec)


def _miller_power(s: FormalQSeries, alpha) -> FormalQSeries:
    """s**alpha for leading coefficient 1, alpha an int or Fraction.

    Uses m g_m = sum_k ((alpha+1) k - m) f_k g_{m-k}.
    """
    start = Fraction(alpha) * s.start
    if start.denominator != 1:
        raise OffGridFactor(f"(q^({s.start}/{GRID}))^{alpha} is off the grid")
    f = s.coeffs
    n = len(f)
    g = [0] * n
    g[0] = 1
    nz = [(k, c) for k, c in enumerate(f) if c and k]
    a1 = alpha + 1
    integral = isinstance(alpha, int)
    for m in range(1, n):
        acc = 0
        for k, c in nz:
            if k > m:
                break
            acc += (a1 * k - m) * c * g[m - k]
        if integral and isinstance(acc, int):
            q, r = divmod(acc, m)
            g[m] = q if r == 0 else Fraction(acc, m)
        else:
            g[m] = _simplify(acc / m if not isinstance(acc, int) else Fraction(acc, m))
    rel = s.prec - s.start
    st = int(start)
    return FormalQSeries(st, s.step, g, st + rel)


def frac_power(s: FormalQSeries, alpha) -> FormalQSeries:
    """s**alpha for a rational alpha; the leading coefficient must be 1."""
    if s.is_zero() or s.coeffs[0] != 1:
        raise NonUnitConstantTerm("fractional powers need leading coefficient 1")
    alpha = Fraction(alpha)
    return _miller_power(s, int(alpha) if alpha.denominator == 1 else alpha)


def rescale(s: FormalQSeries, N: int) -> FormalQSeries:
    """q -> q^N."""
    if int(N) != N or N < 1:
        raise ValueError("N must be a positive integer")
    if s.prec <= s.start and s.is_zero():
        raise PrecisionUnderflow("nothing known about the series")
    return FormalQSeries(s.start * N, s.step * N, s.coeffs, s.prec * N)


def coefficient_at(s: FormalQSeries, n):
    """Exact coefficient of q^n (BeyondPrecision past the known range)."""
    return s[n]


def q_log_derivative(s: FormalQSeries) -> FormalQSeries:
    """q (ds/dq) / s."""
    if s.is_zero():
        raise NonInvertibleSeries("zero series")
    try:
        inv = s.inverse()
    except (ZeroDivisionError, NonInvertibleSeries) as exc:
        raise NonInvertibleSeries(str(exc)) from exc
    deriv = FormalQSeries(
        s.start, s.step,
        [_simplify(Fraction(s.start + i * s.step, GRID) * c) for i, c in enumerate(s.coeffs)],
        s.prec)
    return (deriv * inv).map(_simplify)


def compose(outer: Sequence, inner: FormalQSeries) -> FormalQSeries:
    """sum_k outer[k] inner^k for inner of positive valuation (Horner)."""
    if inner.is_zero():
        return FormalQSeries.constant(outer[0], inner.precision)
    if inner.start <= 0:
        raise ValueError("inner series needs positive valuation")
    prec = inner.prec
    top = min(len(outer) - 1, (prec - 1) // inner.start)
    result = FormalQSeries.constant(outer[top], Fraction(prec, GRID))
    for k in range(top - 1, -1, -1):
        result = result * inner + FormalQSeries.constant(outer[k], Fraction(prec, GRID))
    return result.truncate(prec)


# ---------------------------------------------------------------------------
# eta quotients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _euler_product(n: int) -> tuple:
    """prod_{m>=1} (1 - x^m) to x^(n-1), via pentagonal numbers."""
    c = [0] * n
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < n:
                c[e] = -1 if kk % 2 else 1
                hit = True
        if not hit and k > 0:
            break
        k += 1
    return tuple(c)


def eta_series(d, e: int, prec) -> FormalQSeries:
    """eta(d*tau)^e = q^(d e/24) prod (1 - q^(d n))^e.

    ``d`` is a positive integer, or 1/2 with e even, or 1/3 with 3 | e.
    """
    d = Fraction(d)
    step = d * GRID
    start = d * e
    if d <= 0 or step.denominator != 1 or start.denominator != 1:
        raise OffGridFactor(f"eta({d} tau)^{e} does not land on the 1/{GRID} grid")
    step, start = int(step), int(start)
    pg = to_grid(prec)
    n = max(1, -(-(pg - start) // step))
    base = FormalQSeries(0, step, _euler_product(n), n * step)
    powered = base ** e if e >= 0 else _miller_power(base, e)
    return FormalQSeries(start, powered.step, powered.coeffs, start + n * step).truncate(pg)


@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod eta(d tau)^e over ``factors`` = ((d, e), ...)."""

    factors: tuple

    def __post_init__(self):
        for d, e in self.factors:
            d = Fraction(d)
            if (d * GRID).denominator != 1 or (d * e).denominator != 1 or d <= 0:
                raise OffGridFactor(f"eta({d} tau)^{e} is off the grid")

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(e for _, e in self.factors), 2)

    @property
    def leading_exponent(self) -> Fraction:
        return sum((Fraction(d) * e for d, e in self.factors), Fraction(0)) / GRID

    def series(self, prec) -> FormalQSeries:
        out = None
        for d, e in self.factors:
            if e == 0:
                continue
            # each factor needs precision prec minus the other factors' leading exponents
            f = eta_series(d, e, Fraction(prec) - self.leading_exponent
                           + Fraction(d) * e / GRID)
            out = f if out is None else out * f
        if out is None:
            return FormalQSeries.constant(1, prec)
        return out.truncate(to_grid(prec))


def in_S4(r) -> bool:
    r = Fraction(r)
    return 0 < r < 1 and (24 * r).denominator == 1


def in_S5(r) -> bool:
    r = Fraction(r)
    return 0 < r < Fraction(2, 3) and (12 * r).denominator == 1


S4 = tuple(Fraction(j, 24) for j in range(1, 24))
S5 = tuple(Fraction(j, 12) for j in range(1, 8))


def k4_spec(r) -> EtaQuotientSpec:
    r = Fraction(r)
    if not in_S4(r):
        raise NotInS4(f"{r} is not in S4")
    return EtaQuotientSpec(((2, int(24 * r - 8)), (1, int(16 - 24 * r))))


def k5_spec(r) -> EtaQuotientSpec:
    r = Fraction(r)
    if not in_S5(r):
        raise NotInS5(f"{r} is not in S5")
    return EtaQuotientSpec(((3, int(12 * r - 2)), (1, int(6 - 12 * r))))


def k4_series(r, prec) -> FormalQSeries:
    """K4(r)(tau) = eta(2 tau)^(24r-8) eta(tau)^(16-24r)."""
    return k4_spec(r).series(prec)


def k5_series(r, prec) -> FormalQSeries:
    """K5(r)(tau) = eta(3 tau)^(12r-2) eta(tau)^(6-12r)."""
    return k5_spec(r).series(prec)


def rescale_factor(r) -> int:
    """Denominator of r in lowest terms."""
    return Fraction(r).denominator


# ---------------------------------------------------------------------------
# theta functions, cubic theta functions and Hauptmoduln
# ---------------------------------------------------------------------------

def _eq(prec, *factors) -> FormalQSeries:
    return EtaQuotientSpec(tuple(factors)).series(prec)


def theta_and_borwein(name: str, prec) -> FormalQSeries:
    """One of theta2, theta3, theta4, a, b, c as an exact series."""
    h, t = Fraction(1, 2), Fraction(1, 3)
    if name == "theta2":
        return _eq(prec, (2, 2), (1, -1)).scale(2)
    if name == "theta3":
        return _eq(prec, (1, 5), (h, -2), (2, -2))
    if name == "theta4":
        return _eq(prec, (h, 2), (1, -1))
    if name == "b":
        return _eq(prec, (1, 3), (3, -1))
    if name == "c":
        return _eq(prec, (3, 3), (1, -1)).scale(3)
    if name == "a":
        p = Fraction(prec) + Fraction(1, GRID)
        num = eta_series(3, 3, p).scale(3) + eta_series(t, 3, p)
        return (num * eta_series(1, -1, prec)).truncate(to_grid(prec))
    raise KeyError(f"unknown theta function {name!r}")


def hauptmodul(name: str, prec) -> FormalQSeries:
    """t2 = -64 eta(2t)^24/eta(t)^24 or t3 = 27 eta(3t)^9/(3eta(3t)^3+eta(t/3)^3)^3."""
    if name == "t2":
        return _eq(prec, (2, 24), (1, -24)).scale(-64)
    if name == "t3":
        p = Fraction(prec)
        den = eta_series(3, 3, p).scale(3) + eta_series(Fraction(1, 3), 3, p)
        return (eta_series(3, 9, p + 2) * (den ** -3)).scale(27).truncate(to_grid(prec))
    raise KeyError(f"unknown Hauptmodul {name!r}")


# ---------------------------------------------------------------------------
# classical hypergeometric series
# ---------------------------------------------------------------------------

def rising(a, k: int):
    """Rising factorial (a)_k."""
    out = Fraction(1)
    a = Fraction(a)
    for i in range(k):
        out *= a + i
    return out


def hyp_coefficients(alpha: Sequence, beta: Sequence, n: int) -> list:
    """c_k = prod (a_i)_k / prod (b_i)_k / k! for k < n."""
    alpha = [Fraction(a) for a in alpha]
    beta = [Fraction(b) for b in beta]
    for b in beta:
        if b <= 0 and b.denominator == 1:
            raise PoleInLowerParameter(f"lower parameter {b} is a nonpositive integer")
    out = []
    c = Fraction(1)
    for k in range(n):
        out.append(_simplify(c))
        num = math.prod((a + k for a in alpha), start=Fraction(1))
        den = math.prod((b + k for b in beta), start=Fraction(1)) * (k + 1)
        c = c * num / den
    return out


def classical_hyp_series(alpha: Sequence, beta: Sequence, prec) -> FormalQSeries:
    """Truncated _{n+1}F_n(alpha; beta | t) as a series in t (t in place of q)."""
    n = math.ceil(Fraction(prec))
    return FormalQSeries(0, GRID, hyp_coefficients(alpha, beta, n), GRID * n)


# ---------------------------------------------------------------------------
# identity catalog
# ---------------------------------------------------------------------------

class _Blocks:
    """Cached building blocks at a fixed precision, with optional perturbation."""

    def __init__(self, prec, perturb=None):
        self.prec = Fraction(prec)
        self.perturb = perturb or {}
        self._cache = {}

    def get(self, name):
        if name not in self._cache:
            self._cache[name] = self._build(name)
        return self._cache[name]

    def _build(self, name):
        prec = self.prec
        if name in ("theta2", "theta3", "theta4", "a", "b", "c"):
            s = theta_and_borwein(name, prec + 1)
            if name in self.perturb:
                exponent, delta = self.perturb[name]
                s = s + FormalQSeries.monomial(exponent, delta, s.precision)
            return s
        if name in ("t2", "t3"):
            return hauptmodul(name, prec + 1)
        if name == "theta4_2tau^4":
            return rescale(self.get("theta4"), 2) ** 4
        if name == "u2":      # t2 / (-64 q)
            return self.get("t2").shift(-1).scale(Fraction(-1, 64)).map(_simplify)
        if name == "u3":      # t3 / (27 q)
            return self.get("t3").shift(-1).scale(Fraction(1, 27)).map(_simplify)
        if name == "3F2(t2)":
            # coefficients c_k (-64)^k are integers; compose with t2/(-64) = q u2
            n = math.ceil(prec) + 1
            outer = [_simplify(c * (-64) ** k) for k, c in
                     enumerate(hyp_coefficients([Fraction(1, 2)] * 3, [1, 1], n))]
            return compose(outer, self.get("u2").shift(1))
        if name == "dlog t2":
            return q_log_derivative(self.get("t2"))
        if name == "dlog t3":
            return q_log_derivative(self.get("t3"))
        raise KeyError(name)


def _k4eval_sides(blocks: _Blocks, r):
    r = Fraction(r)
    t2 = blocks.get("t2")
    lhs = (frac_power(blocks.get("u2"), r).shift(r)
           * frac_power(1 - t2, Fraction(-1, 2))
           * blocks.get("3F2(t2)") * blocks.get("dlog t2"))
    return lhs, k4_series(r, blocks.prec + 1)


def _k5eval_sides(blocks: _Blocks, r):
    r = Fraction(r)
    t3 = blocks.get("t3")
    lhs = (frac_power(blocks.get("u3"), r).shift(r)
           * frac_power(1 - t3, -r - Fraction(1, 3)) * blocks.get("dlog t3"))
    return lhs, k5_series(r, blocks.prec + 1)


def identity_names() -> list[str]:
    names = ["3F2_hauptmodul", "derivative", "hauptmodul_theta",
             "cubic_t3", "cubic_1-t3", "cubic_dlog", "cubic_borwein"]
    names += [f"K4eval:{r}" for r in S4]
    names += [f"K5eval:{r}" for r in S5]
    return names


def identity_sides(name: str, prec, perturb=None, blocks: _Blocks | None = None):
    """(lhs, rhs) of a catalog identity, both as exact series."""
    b = blocks or _Blocks(prec, perturb)
    g = b.get
    if name == "3F2_hauptmodul":
        return g("3F2(t2)"), g("theta4_2tau^4")
    if name == "derivative":
        return g("dlog t2"), frac_power(1 - g("t2"), Fraction(1, 2)) * g("theta4_2tau^4")
    if name == "hauptmodul_theta":
        rhs = -(g("theta2") ** 8) / ((g("theta3") ** 4) * (g("theta4") ** 4)).scale(4)
        return g("t2"), rhs
    if name == "cubic_t3":
        return g("t3"), (g("c") ** 3) / (g("a") ** 3)
    if name == "cubic_1-t3":
        return 1 - g("t3"), (g("b") ** 3) / (g("a") ** 3)
    if name == "cubic_dlog":
        return g("dlog t3"), (g("b") ** 3) / g("a")
    if name == "cubic_borwein":
        return g("b") ** 3 + g("c") ** 3, g("a") ** 3
    if name.startswith("K4eval:"):
        return _k4eval_sides(b, Fraction(name.split(":", 1)[1]))
    if name.startswith("K5eval:"):
        return _k5eval_sides(b, Fraction(name.split(":", 1)[1]))
    raise KeyError(f"unknown identity {name!r}")


@dataclass
class IdentityReport:
    name: str
    precision: Fraction
    checked_terms: int
    passed: bool
    first_difference: Fraction | None = None


def verify_identity(name: str, prec, perturb=None, blocks: _Blocks | None = None) -> IdentityReport:
    """Compare both sides of a catalog identity through q^prec (exclusive).

    Raises IdentityFails at the first differing exponent.
    """
    lhs, rhs = identity_sides(name, prec, perturb, blocks)
    limit = to_grid(prec)
    if lhs.prec < limit or rhs.prec < limit:
        raise BeyondPrecision(f"{name}: sides only known to "
                              f"{min(lhs.precision, rhs.precision)}")
    lhs, rhs = lhs.truncate(limit), rhs.truncate(limit)
    diff = lhs.first_difference(rhs)
    if diff is not None:
        e = Fraction(diff, GRID)
        raise IdentityFails(name, e, lhs.coeff_grid(diff), rhs.coeff_grid(diff))
    terms = len(set(lhs.support()) | set(rhs.support()))
    return IdentityReport(name, Fraction(prec), terms, True)


def verify_all_identities(prec=200, perturb=None) -> list[IdentityReport]:
    blocks = _Blocks(prec, perturb)
    return [verify_identity(n, prec, blocks=blocks) for n in identity_names()]


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

def format_fixture(s: FormalQSeries, header: str = "") -> str:
    """One line per nonzero term: ``n/24<TAB>coefficient``."""
    lines = [f"# {line}" for line in header.splitlines()]
    lines.append(f"# precision {s.prec}/{GRID}")
    for g, c in s.terms():
        if hasattr(c, "to_fixture"):
            cs = c.to_fixture()
        else:
            cs = str(c)
        lines.append(f"{g}/{GRID}\t{cs}")
    return "\n".join(lines) + "\n"


def parse_fixture(text: str, field=None) -> FormalQSeries:
    """Inverse of ``format_fixture``; ``field`` parses number-field entries."""
    terms = {}
    prec = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "precision":
                prec = Fraction(parts[1])
            continue
        exp, coeff = line.split("\t")
        if field is not None and ("," in coeff or ";" in coeff):
            value = field.parse(coeff)
        else:
            value = _simplify(Fraction(coeff))
        terms[Fraction(exp)] = value
    if prec is None:
        prec = max(terms) + Fraction(1, GRID) if terms else Fraction(0)
    return FormalQSeries.from_dict(terms, prec)
