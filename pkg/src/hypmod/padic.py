"""Mod-p consequences of Gross-Koblitz: Gamma_p mod p, reduced Jacobi sums and
the congruences relating them to Fourier coefficients.

Embedding convention: iota_p(1/(p-1)) is the inverse Teichmueller character,
so iota_p(r) reduces mod p to x -> x^((p-1)(1-r) mod (p-1)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DenominatorDivisibleByP, DenominatorNotDividing, PrimeNotSplit
from .hypergeometric import HypergeometricDatum, hd_k4, lcd
from .qseries import k5_series, rescale

THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class ModPValue:
    residue: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "residue", self.residue % self.p)

    def __int__(self):
        return self.residue

    def __eq__(self, other):
        if isinstance(other, ModPValue):
            return self.p == other.p and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            return self.residue == reduce_mod_p(other, self.p)
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.p))

    def __neg__(self):
        return ModPValue(-self.residue, self.p)

    def __mul__(self, other):
        return ModPValue(self.residue * int(reduce_mod_p(other, self.p)
                                            if not isinstance(other, ModPValue) else other.residue),
                         self.p)

    __rmul__ = __mul__

    def __repr__(self):
        return f"{self.residue} (mod {self.p})"


def reduce_mod_p(x, p: int) -> int:
    """A rational with p-unit denominator, reduced to {0, ..., p-1}."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise DenominatorDivisibleByP(f"{x} has denominator divisible by {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def gamma_p(x, p: int) -> ModPValue:
    """Gamma_p(x) mod p via the representative x0 of x mod p in {0, ..., p-1}."""
    x0 = reduce_mod_p(x, p)
    v = 1
    for j in range(1, x0):
        v = v * j % p
    return ModPValue((-1) ** x0 * v, p)


def _exponent(a, p: int) -> int:
    """(p-1)(1-a) mod p-1 as an integer; needs denominator of a dividing p-1."""
    a = Fraction(a)
    if (p - 1) % a.denominator:
        raise DenominatorNotDividing(f"denominator of {a} does not divide {p - 1}")
    return int((p - 1) * (1 - a)) % (p - 1)


def character_mod_p(r, z, p: int) -> ModPValue:
    """iota_p(r)(z) reduced mod p."""
    e = _exponent(r, p)
    z = reduce_mod_p(z, p)
    if z == 0:
        return ModPValue(0, p)
    return ModPValue(pow(z, e, p), p)


def jacobi_mod_p(a, b, p: int) -> ModPValue:
    """sum_x x^A (1-x)^B mod p with A, B the nonzero representatives of
    (p-1)(1-a), (p-1)(1-b); the reduction of J(iota_p(a), iota_p(b))."""
    A = _exponent(a, p) or p - 1
    B = _exponent(b, p) or p - 1
    return ModPValue(sum(pow(x, A, p) * pow(1 - x, B, p) for x in range(p)), p)


def a_r_coefficient(r, k: int) -> Fraction:
    """A_r(k) = (r + 1/3)_k / k!."""
    r = Fraction(r)
    out = Fraction(1)
    for i in range(k):
        out = out * (r + THIRD + i) / (i + 1)
    return out


@dataclass
class CongruenceReport:
    name: str
    r: Fraction
    p: int
    lhs: int
    rhs: int
    holds: bool
    detail: dict | None = None


def _require_split(values, p: int):
    M = lcd(values)
    if (p - 1) % M:
        raise PrimeNotSplit(f"p = {p} is not 1 mod {M}")
    return M


def check_ar_congruence(r, p: int) -> CongruenceReport:
    """A_r((p-1) r) == -J(iota(r), iota(2/3 - r)) mod p."""
    r = Fraction(r)
    _require_split([THIRD, r], p)
    k = int((p - 1) * r)
    lhs = reduce_mod_p(a_r_coefficient(r, k), p)
    rhs = (-jacobi_mod_p(r, 2 * THIRD - r, p)).residue
    return CongruenceReport("ar", r, p, lhs, rhs, lhs == rhs)


def reflection_signs(p: int) -> dict:
    """x0 -> Gamma_p(x0) Gamma_p(1 - x0) mod p, as +1 or -1, for x0 in 0..p-1."""
    out = {}
    for x in range(p):
        v = (gamma_p(x, p).residue * gamma_p(1 - x, p).residue) % p
        out[x] = 1 if v == 1 else -1 if v == p - 1 else 0
    return out


# ---------------------------------------------------------------------------
# psi_HD
# ---------------------------------------------------------------------------

def psi_table_value(r, p: int) -> ModPValue:
    """The multiplier psi(r) listed for the weight-four families, reduced mod p."""
    r = Fraction(r)
    if r in (Fraction(1, 2), Fraction(1, 6)):
        return character_mod_p(r, -1, p)
    if r in (Fraction(1, 3), Fraction(1, 4)):
        return ModPValue(1, p)
    if r in (Fraction(1, 8), Fraction(1, 12), Fraction(1, 24)):
        return character_mod_p(r, -64, p)
    raise KeyError(f"no tabulated psi for r = {r}")


@dataclass
class PsiReport:
    r: Fraction
    p: int
    gamma_value: int          # (-1)^(n-1) C1^((p-1) r_n) Gamma_p(q_n - r_n) / prod Gamma_p(r_i)
    character_value: int      # iota_p(r_n)(C1)
    table_value: int | None   # tabulated psi(r), when r is a catalog value
    phi_minus_one: int

    @property
    def agrees_with_character(self) -> bool:
        return self.gamma_value == self.character_value

    @property
    def agrees_with_table(self) -> bool | None:
        return None if self.table_value is None else self.gamma_value == self.table_value

    @property
    def conjugate_relation(self) -> bool:
        """gamma_value == phi(-1) * character_value^(-1) mod p."""
        if self.character_value == 0:
            return False
        inv = pow(self.character_value, -1, self.p)
        return self.gamma_value == self.phi_minus_one * inv % self.p


def psi_hd_mod_p(hd: HypergeometricDatum, C1: int, p: int) -> PsiReport:
    """Evaluate the Gamma_p expression for psi_HD and the character iota_p(r_n)(C1).

    The datum's last pair (r_n, q_n) is the distinguished one; the other upper
    parameters are r_1..r_(n-1).
    """
    M = hd.M
    if (p - 1) % M:
        raise PrimeNotSplit(f"p = {p} is not 1 mod {M}")
    n = hd.length
    r_n, q_n = hd.alpha[-1], hd.beta[-1]
    head = hd.alpha[:-1]
    num = gamma_p(q_n - r_n, p).residue
    den = 1
    for r in head:
        den = den * gamma_p(r, p).residue % p
    c_pow = pow(reduce_mod_p(C1, p), int((p - 1) * r_n), p)
    value = (-1) ** (n - 1) * c_pow * num * pow(den, -1, p) % p
    char = character_mod_p(r_n, C1, p).residue
    try:
        table = psi_table_value(r_n, p).residue
    except KeyError:
        table = None
    phi = pow(p - 1, (p - 1) // 2, p)
    return PsiReport(r_n, p, value, char, table, phi)


def psi_k4_mod_p(r, p: int) -> PsiReport:
    return psi_hd_mod_p(hd_k4(r), -64, p)


# ---------------------------------------------------------------------------
# eigen-coefficient congruence for the weight-two family
# ---------------------------------------------------------------------------

def k5_eigen_coefficient(r, p: int) -> int:
    """a_p of K5(r)(N tau), N the denominator of r; for p = 1 mod N this is
    the coefficient of the completed eigenform."""
    r = Fraction(r)
    N = r.denominator
    f = rescale(k5_series(r, Fraction(p + 1, N)), N)
    return f[p]


def check_eigencoefficient_congruence(r, p: int, a_p: int | None = None) -> CongruenceReport:
    """-iota(r)(1/27) a_p == J(iota(r), iota(2/3 - r)) mod p, together with
    iota(1 - r)(27) J(iota(1 - r), iota(r - 2/3)) == 0 mod p."""
    r = Fraction(r)
    M = _require_split([THIRD, r], p)
    if p == 3 or p % r.denominator == 0:
        raise PrimeNotSplit(f"p = {p} divides the level")
    if (p - 1) % r.denominator:
        raise PrimeNotSplit(f"p = {p} is not 1 mod {r.denominator}")
    if a_p is None:
        a_p = k5_eigen_coefficient(r, p)
    lhs = (-(character_mod_p(r, Fraction(1, 27), p) * a_p)).residue
    rhs = jacobi_mod_p(r, 2 * THIRD - r, p).residue
    companion = (character_mod_p(1 - r, 27, p)
                 * jacobi_mod_p(1 - r, r - 2 * THIRD, p).residue).residue
    return CongruenceReport("eigencoefficient", r, p, lhs, rhs,
                            lhs == rhs and companion == 0,
                            {"a_p": a_p, "companion": companion, "M": M})


__all__ = [
    "ModPValue", "reduce_mod_p", "gamma_p", "character_mod_p", "jacobi_mod_p",
    "a_r_coefficient", "check_ar_congruence", "reflection_signs", "psi_hd_mod_p",
    "psi_k4_mod_p", "psi_table_value", "PsiReport", "check_eigencoefficient_congruence",
    "k5_eigen_coefficient", "CongruenceReport",
]
