"""Exact arithmetic in Q[x]/(f) in the power basis.

Elements interoperate with ints and Fractions so they can be used directly
as q-series coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import DivisionByZero, FieldMismatch, HypmodError, NonMonic


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: list, b: list):
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
    return _trim(q), a


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, abs(n) + 1) if n % d == 0]


class NumberField:
    """Q[x]/(f) for a monic f with rational coefficients, lowest degree first."""

    def __init__(self, coeffs: Sequence, name: str = "x"):
        cs = _trim([Fraction(c) for c in coeffs])
        if len(cs) < 2:
            raise NonMonic("defining polynomial must have degree >= 1")
        if cs[-1] != 1:
            raise NonMonic(f"leading coefficient is {cs[-1]}, not 1")
        self.coeffs = tuple(cs)
        self.degree = len(cs) - 1
        self.name = name

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"NumberField({list(self.coeffs)})"

    def sanity_check(self) -> None:
        """Cheap guard against typos: a degree > 1 polynomial with a rational root is rejected."""
        if self.degree == 1:
            return
        den = 1
        for c in self.coeffs:
            den = math.lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        a0, an = ints[0], ints[-1]
        if a0 == 0:
            raise HypmodError("defining polynomial has the root 0")
        for p in _divisors(a0):
            for q in _divisors(an):
                for s in (1, -1):
                    x = Fraction(s * p, q)
                    if sum(c * x**i for i, c in enumerate(self.coeffs)) == 0:
                        raise HypmodError(f"defining polynomial has the rational root {x}")

    # element constructors
    def element(self, coords: Sequence) -> "NumberFieldElement":
        return NumberFieldElement(self, coords)

    def __call__(self, value) -> "NumberFieldElement":
        if isinstance(value, NumberFieldElement):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        return NumberFieldElement(self, [value])

    @property
    def gen(self) -> "NumberFieldElement":
        return NumberFieldElement(self, [0, 1])

    def from_poly(self, coeffs: Sequence, den=1) -> "NumberFieldElement":
        """(sum coeffs[i] x^i) / den, reduced mod f."""
        _, r = _poly_divmod([Fraction(c, 1) / den for c in coeffs], self.coeffs)
        return NumberFieldElement(self, r)

    def parse(self, text: str) -> "NumberFieldElement":
        """Parse ``den; a0,a1,...`` or ``a0,a1,.../den``."""
        text = text.strip()
        if ";" in text:
            den, rest = text.split(";", 1)
        elif "/" in text.rsplit(",", 1)[-1]:
            rest, den = text.rsplit("/", 1)
        else:
            rest, den = text, "1"
        coords = [Fraction(a.strip()) for a in rest.split(",") if a.strip()]
        return self.from_poly(coords, Fraction(den.strip()))


def nf_make(coeffs: Sequence, name: str = "x", check: bool = True) -> NumberField:
    """Field handle for a monic polynomial given lowest degree first."""
    field = NumberField(coeffs, name)
    if check:
        field.sanity_check()
    return field


class NumberFieldElement:
    """Coordinates in the power basis 1, x, ..., x^(d-1)."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Sequence):
        cs = [Fraction(c) for c in coords]
        if len(cs) > field.degree:
            _, cs = _poly_divmod(cs, field.coeffs)
        cs = list(cs) + [Fraction(0)] * (field.degree - len(cs))
        self.field = field
        self.coords = tuple(cs)

    def _coerce(self, other):
        if isinstance(other, NumberFieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return NumberFieldElement(self.field, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return NumberFieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return NumberFieldElement(self.field, [])
            return NumberFieldElement(self.field, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = _poly_mul(self.coords, o.coords)
        return NumberFieldElement(self.field, prod)

    __rmul__ = __mul__

    def inverse(self) -> "NumberFieldElement":
        if not self:
            raise DivisionByZero("inverse of zero in a number field")
        # extended Euclid: s*a + t*f = g, g a nonzero constant since f is irreducible
        r0, r1 = list(self.field.coeffs), _trim(list(self.coords))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, _trim(r)
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise DivisionByZero("element is a zero divisor (reducible modulus)")
        c = r1[0]
        return NumberFieldElement(self.field, [x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return NumberFieldElement(self.field, [a / other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = NumberFieldElement(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if isinstance(other, NumberFieldElement):
            if other.field != self.field:
                raise FieldMismatch("comparing elements of different fields")
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def to_fixture(self) -> str:
        """``den; a0,a1,...`` with integer numerators."""
        den = math.lcm(*(c.denominator for c in self.coords))
        return f"{den}; " + ",".join(str(int(c * den)) for c in self.coords)

    def __repr__(self):
        terms = []
        x = self.field.name
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*{x}" + (f"^{i}" if i > 1 else ""))
        return " + ".join(terms) or "0"


def nf_equal(a: NumberFieldElement, b: NumberFieldElement) -> bool:
    return a == b


def nf_arith(op: str, *elements):
    """Dispatch for add, mul, inv and pow (pow takes an int exponent last)."""
    if op == "add":
        out = elements[0]
        for e in elements[1:]:
            out = out + e
        return out
    if op == "mul":
        out = elements[0]
        for e in elements[1:]:
            out = out * e
        return out
    if op == "inv":
        return elements[0].inverse()
    if op == "pow":
        return elements[0] ** elements[1]
    raise ValueError(f"unknown operation {op!r}")


# fields and constants appearing in the eigenform completions
def nu_field() -> NumberField:
    return nf_make([9, 0, 4, 0, 1], "nu")


def mu_field() -> NumberField:
    return nf_make([48841, 0, -9212, 0, 1023, 0, 28, 0, 1], "mu")


def sqrt3_field() -> NumberField:
    return nf_make([-3, 0, 1], "s3")


def sqrt_minus3_field() -> NumberField:
    return nf_make([3, 0, 1], "sm3")


def betas(field: NumberField | None = None):
    """(beta1, beta2) = ((2 nu^3 + 14 nu)/3, 8 nu^2 + 16)."""
    K = field or nu_field()
    return K.from_poly([0, 14, 0, 2], 3), K.from_poly([16, 0, 8])


def alphas(field: NumberField | None = None):
    """alpha_1..alpha_7 in the mu-field."""
    K = field or mu_field()
    return (
        K.from_poly([78026, 0, -20112, 0, -468, 0, -16], 9477),
        K.from_poly([0, 1620002, 0, -98322, 0, -2358, 0, -100], 161109),
        K.from_poly([0, -24788, 0, 19020, 0, 516, 0, 16], 5967),
        K.from_poly([32560, 0, -8544, 0, -288, 0, -8], 729),
        K.from_poly([369824, 0, 480, 0, 0, 0, -16], 3159),
        K.from_poly([0, -580016, 0, 455568, 0, 13392, 0, 352], 53703),
        K.from_poly([0, -3423968, 0, 198240, 0, 6624, 0, 256], 161109),
    )
