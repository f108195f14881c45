"""Prime-field arithmetic, multiplicative characters and character sums.

Characters of F_p^x are stored as exponents e mod p-1 relative to the least
primitive root g, so chi(g^k) = zeta^(e*k) for a primitive (p-1)-th root of
unity zeta chosen by the active backend.  Two backends evaluate sums:

* ``ComplexBackend`` -- zeta = exp(2 pi i/(p-1)) in complex128.
* ``ModularBackend`` -- zeta is a root of exact order p-1 in F_l for several
  auxiliary primes l = 1 (mod p-1); integers are recovered by CRT.

Every character sum in the package reduces to a histogram of exponents
(``hist_sum``) or a length-(p-1) discrete Fourier transform (``dft``), both of
which each backend implements exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .errors import (
    AmbiguousReconstruction,
    BackendUnsupported,
    ContextMismatch,
    DenominatorNotDividing,
    EvenPrime,
    Inconsistent,
    NotPrime,
    RoundingError,
)

#: integer rounding on the complex backend is refused beyond this distance
ROUNDING_TOLERANCE = 1e-4

# residues are multiplied in int64, so every auxiliary prime stays below 2**31
_MAX_AUX_PRIME = 2**31


# ---------------------------------------------------------------------------
# prime field context
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrimeFieldContext:
    """F_p with its least primitive root and discrete-log tables.

    ``dlog[x]`` is the discrete log of x for 1 <= x < p (``dlog[0]`` is -1);
    ``power[k]`` is g^k mod p.
    """

    p: int
    generator: int
    dlog: np.ndarray = field(repr=False, compare=False)
    power: np.ndarray = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        """Order p-1 of the unit group (and of every character group)."""
        return self.p - 1

    def reduce(self, z) -> int:
        """Reduce an integer or rational to a residue mod p."""
        z = Fraction(z)
        if z.denominator % self.p == 0:
            raise ZeroDivisionError(f"denominator of {z} vanishes mod {self.p}")
        return z.numerator * pow(z.denominator, -1, self.p) % self.p

    def log(self, x) -> int:
        """Discrete log of a nonzero element."""
        x = self.reduce(x)
        if x == 0:
            raise ValueError("log of zero")
        return int(self.dlog[x])

    @lru_cache(maxsize=None)
    def one_minus_tables(self):
        """Arrays (x, dlog x, dlog(1-x)) over x in F_p minus {0, 1}."""
        x = np.arange(2, self.p, dtype=np.int64)
        return x, self.dlog[x], self.dlog[(1 - x) % self.p]


@lru_cache(maxsize=256)
def build_field(p: int) -> PrimeFieldContext:
    """Return the context for F_p (cached, so contexts for equal p are shared)."""
    p = int(p)
    if p == 2:
        raise EvenPrime("p = 2 is not supported")
    if p < 2 or not sympy.isprime(p):
        raise NotPrime(f"{p} is not prime")
    g = int(sympy.primitive_root(p))
    power = np.empty(p - 1, dtype=np.int64)
    acc = 1
    for k in range(p - 1):
        power[k] = acc
        acc = acc * g % p
    dlog = np.full(p, -1, dtype=np.int64)
    dlog[power] = np.arange(p - 1, dtype=np.int64)
    return PrimeFieldContext(p, g, dlog, power)


# ---------------------------------------------------------------------------
# characters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiplicativeCharacter:
    """The character g^k -> zeta^(exponent*k), extended by chi(0) = 0."""

    exponent: int
    ctx: PrimeFieldContext

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.ctx.order)

    def _check(self, other: "MultiplicativeCharacter"):
        if self.ctx.p != other.ctx.p:
            raise ContextMismatch(f"characters of F_{self.ctx.p} and F_{other.ctx.p}")

    def __mul__(self, other: "MultiplicativeCharacter") -> "MultiplicativeCharacter":
        self._check(other)
        return MultiplicativeCharacter(self.exponent + other.exponent, self.ctx)

    def __truediv__(self, other: "MultiplicativeCharacter") -> "MultiplicativeCharacter":
        self._check(other)
        return MultiplicativeCharacter(self.exponent - other.exponent, self.ctx)

    def __pow__(self, k: int) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(self.exponent * k, self.ctx)

    def conjugate(self) -> "MultiplicativeCharacter":
        return MultiplicativeCharacter(-self.exponent, self.ctx)

    @property
    def is_trivial(self) -> bool:
        return self.exponent == 0

    @property
    def order(self) -> int:
        n = self.ctx.order
        return n // math.gcd(n, self.exponent)

    def sign(self) -> int:
        """chi(-1), always +-1 and backend independent."""
        return -1 if self.exponent % 2 else 1

    def __repr__(self):
        return f"chi[{self.exponent}/{self.ctx.order} mod {self.ctx.p}]"


def trivial_character(ctx: PrimeFieldContext) -> MultiplicativeCharacter:
    return MultiplicativeCharacter(0, ctx)


def char_from_rational(ctx: PrimeFieldContext, r) -> MultiplicativeCharacter:
    """The character iota_p(r), with exponent (p-1)*r mod p-1."""
    r = Fraction(r)
    e = r * ctx.order
    if e.denominator != 1:
        raise DenominatorNotDividing(
            f"denominator of {r} does not divide p-1 = {ctx.order}")
    return MultiplicativeCharacter(int(e), ctx)


def _same_context(*chars: MultiplicativeCharacter) -> PrimeFieldContext:
    ctx = chars[0].ctx
    for c in chars[1:]:
        if c.ctx.p != ctx.p:
            raise ContextMismatch(f"characters of F_{ctx.p} and F_{c.ctx.p}")
    return ctx


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------

class ComplexBackend:
    """Floating-point evaluation with zeta = exp(2 pi i / (p-1))."""

    name = "complex"

    def __init__(self, ctx: PrimeFieldContext):
        self.ctx = ctx
        n = ctx.order
        self.table = np.exp(2j * np.pi * np.arange(n) / n)

    def zeta(self, e):
        """zeta**e for an integer or integer array e."""
        return self.table[np.asarray(e) % self.ctx.order]

    def const(self, n):
        return complex(n)

    def zeros(self, n: int):
        return np.zeros(n, dtype=complex)

    def hist_sum(self, counts):
        """Sum of counts[d] * zeta**d."""
        return complex(np.dot(np.asarray(counts, dtype=float), self.table))

    def bucket(self, index, e):
        """Vector w with w[d] = sum of zeta**e[x] over x with index[x] = d."""
        vals = self.zeta(e)
        n = self.ctx.order
        return (np.bincount(index, weights=vals.real, minlength=n)
                + 1j * np.bincount(index, weights=vals.imag, minlength=n))

    def dft(self, w):
        """Vector J with J[k] = sum_d w[d] zeta**(k*d)."""
        n = self.ctx.order
        return np.fft.ifft(w) * n

    def total(self, v):
        return complex(np.sum(v))

    def to_int(self, v, bound=None) -> int:
        v = complex(v)
        n = round(v.real)
        dist = abs(v - n)
        if dist >= ROUNDING_TOLERANCE:
            raise RoundingError(f"{v} is {dist:.3g} away from an integer")
        if bound is not None and abs(n) > bound:
            raise Inconsistent(f"{n} exceeds the bound {bound}")
        return int(n)

    def is_zero(self, v) -> bool:
        return abs(complex(v)) < ROUNDING_TOLERANCE


class Residues:
    """A value (or array of values) held as residues modulo several primes.

    ``data`` has shape (s, *shape) with one slice per modulus.
    """

    __slots__ = ("data", "moduli")

    def __init__(self, data, moduli):
        self.data = data
        self.moduli = moduli

    def _m(self, data=None):
        d = self.data if data is None else data
        return self.moduli.reshape((-1,) + (1,) * (d.ndim - 1))

    def _coerce(self, other):
        if isinstance(other, Residues):
            return other.data
        if isinstance(other, (int, np.integer)):
            m = self.moduli.reshape((-1,) + (1,) * (self.data.ndim - 1))
            return np.asarray(int(other) % m, dtype=np.int64) * np.ones_like(self.data)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        r = self.data + o
        return Residues(r % self._m(r), self.moduli)

    __radd__ = __add__

    def __neg__(self):
        return Residues((-self.data) % self._m(), self.moduli)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Residues) else -int(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        r = self.data * o
        return Residues(r % self._m(r), self.moduli)

    __rmul__ = __mul__

    def inverse(self):
        inv = np.empty_like(self.data)
        for i, m in enumerate(self.moduli):
            flat = self.data[i].reshape(-1)
            inv[i] = np.array([pow(int(x), -1, int(m)) for x in flat],
                              dtype=np.int64).reshape(self.data[i].shape)
        return Residues(inv, self.moduli)

    def __truediv__(self, other):
        if isinstance(other, Residues):
            return self * other.inverse()
        other = int(other)
        inv = np.array([pow(other, -1, int(m)) for m in self.moduli], dtype=np.int64)
        return self * Residues(inv.reshape((-1,) + (1,) * (self.data.ndim - 1))
                               * np.ones_like(self.data), self.moduli)

    def __pow__(self, k: int):
        out = np.empty_like(self.data)
        for i, m in enumerate(self.moduli):
            flat = self.data[i].reshape(-1)
            out[i] = np.array([pow(int(x), k, int(m)) for x in flat],
                              dtype=np.int64).reshape(self.data[i].shape)
        return Residues(out, self.moduli)

    def __getitem__(self, idx):
        return Residues(self.data[(slice(None),) + (idx if isinstance(idx, tuple) else (idx,))],
                        self.moduli)

    def sum(self, axis=-1):
        r = self.data.sum(axis=axis if axis < 0 else axis + 1)
        return Residues(r % self._m(r), self.moduli)

    def prod(self):
        """Product over the trailing axis of a vector."""
        acc = np.ones(self.data.shape[0], dtype=np.int64)
        for j in range(self.data.shape[-1]):
            acc = acc * self.data[:, j] % self.moduli
        return Residues(acc, self.moduli)

    @property
    def shape(self):
        return self.data.shape[1:]

    def __len__(self):
        return self.data.shape[1]

    def residues(self):
        """Residues of a scalar value as a list of ints."""
        return [int(x) for x in self.data.reshape(len(self.moduli), -1)[:, 0]]

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return bool(np.array_equal(self.data % self._m(), o % self._m()))

    __hash__ = None

    def __repr__(self):
        return f"Residues({self.data.tolist()} mod {self.moduli.tolist()})"


@lru_cache(maxsize=64)
def _dft_index(n: int) -> np.ndarray:
    k = np.arange(n, dtype=np.int64)
    return (k[:, None] * k[None, :]) % n


def auxiliary_primes(p: int, bound: int) -> list[int]:
    """Smallest primes l = 1 (mod p-1), l != p, whose product exceeds 2*bound."""
    n = p - 1
    out, prod = [], 1
    ell = 1
    while prod <= 2 * bound:
        ell += n
        if ell >= _MAX_AUX_PRIME:
            raise OverflowError("auxiliary prime exceeds the int64-safe range")
        # l = p is = 1 mod p-1 but divides every q-power denominator
        if ell != p and sympy.isprime(ell):
            out.append(ell)
            prod *= ell
    return out


class ModularBackend:
    """Exact evaluation modulo auxiliary primes l = 1 (mod p-1)."""

    name = "modular"

    def __init__(self, ctx: PrimeFieldContext, bound: int = 10**12):
        self.ctx = ctx
        self.bound = int(bound)
        n = ctx.order
        self.primes = auxiliary_primes(ctx.p, self.bound)
        self.moduli = np.array(self.primes, dtype=np.int64)
        tables = []
        self.roots = []
        for ell in self.primes:
            h = int(sympy.primitive_root(ell))
            z = pow(h, (ell - 1) // n, ell)
            self.roots.append(z)
            t = np.empty(n, dtype=np.int64)
            acc = 1
            for k in range(n):
                t[k] = acc
                acc = acc * z % ell
            tables.append(t)
        self.tables = np.stack(tables)

    def _wrap(self, data):
        return Residues(np.asarray(data, dtype=np.int64), self.moduli)

    def zeta(self, e):
        e = np.asarray(e) % self.ctx.order
        return self._wrap(self.tables[:, e])

    def const(self, n):
        return self._wrap(np.array([int(n) % ell for ell in self.primes]))

    def zeros(self, n: int):
        return self._wrap(np.zeros((len(self.primes), n)))

    def hist_sum(self, counts):
        c = np.asarray(counts, dtype=np.int64)
        out = [int(((c % ell) * self.tables[i] % ell).sum() % ell)
               for i, ell in enumerate(self.primes)]
        return self._wrap(out)

    def bucket(self, index, e):
        n = self.ctx.order
        vals = self.zeta(e).data
        out = np.empty((len(self.primes), n), dtype=np.int64)
        for i, ell in enumerate(self.primes):
            # exact: at most p terms below 2**31, far under 2**53
            out[i] = np.bincount(index, weights=vals[i].astype(float),
                                 minlength=n).astype(np.int64) % ell
        return self._wrap(out)

    def dft(self, w: Residues):
        idx = _dft_index(self.ctx.order)
        out = np.empty_like(w.data)
        for i, ell in enumerate(self.primes):
            mat = self.tables[i][idx]
            out[i] = (mat * w.data[i][None, :] % ell).sum(axis=1) % ell
        return self._wrap(out)

    def total(self, v: Residues):
        return v.sum()

    def to_int(self, v: Residues, bound=None) -> int:
        return crt_reconstruct(v.residues(), self.primes,
                               self.bound if bound is None else bound)

    def is_zero(self, v: Residues) -> bool:
        return all(r == 0 for r in v.residues())


def make_backend(ctx: PrimeFieldContext, name: str = "modular", bound: int = 10**12):
    if name in ("modular", "exact"):
        return ModularBackend(ctx, bound)
    if name == "complex":
        return ComplexBackend(ctx)
    raise ValueError(f"unknown backend {name!r}")


def _default_backend(ctx, backend):
    return ComplexBackend(ctx) if backend is None else backend


# ---------------------------------------------------------------------------
# character sums
# ---------------------------------------------------------------------------

def char_eval(chi: MultiplicativeCharacter, x, backend=None):
    """chi(x) in the backend, with chi(0) = 0 for every chi."""
    b = _default_backend(chi.ctx, backend)
    x = chi.ctx.reduce(x)
    if x == 0:
        return b.const(0)
    return b.zeta(chi.exponent * int(chi.ctx.dlog[x]))


def gauss_sum(chi: MultiplicativeCharacter, backend=None) -> complex:
    """g(chi) = sum_x chi(x) exp(2 pi i x / p); complex backend only."""
    if backend is not None and not isinstance(backend, ComplexBackend):
        raise BackendUnsupported("Gauss sums need p-th roots of unity")
    ctx = chi.ctx
    b = _default_backend(ctx, backend)
    x = np.arange(1, ctx.p)
    theta = np.exp(2j * np.pi * x / ctx.p)
    return complex(np.sum(b.zeta(chi.exponent * ctx.dlog[x]) * theta))


def jacobi_sum(a: MultiplicativeCharacter, b: MultiplicativeCharacter, backend=None):
    """J(A, B) = sum_x A(x) B(1-x), by direct summation."""
    ctx = _same_context(a, b)
    bk = _default_backend(ctx, backend)
    _, lx, l1x = ctx.one_minus_tables()
    e = (a.exponent * lx + b.exponent * l1x) % ctx.order
    return bk.hist_sum(np.bincount(e, minlength=ctx.order))


def jacobi_family(ctx: PrimeFieldContext, a0: int, b0: int, backend):
    """Vector over k of J(chi^(a0+k), chi^(b0-k)), chi the generator character.

    Direct sum reorganised by d(x) = dlog x - dlog(1-x):
    J_k = sum_x zeta^(a0 lx + b0 l1x) zeta^(k d(x)), a DFT in k.
    """
    _, lx, l1x = ctx.one_minus_tables()
    n = ctx.order
    d = (lx - l1x) % n
    w = backend.bucket(d, (a0 * lx + b0 * l1x) % n)
    return backend.dft(w)


def binomial(a: MultiplicativeCharacter, b: MultiplicativeCharacter, backend=None):
    """Greene's binomial (A over B) as (numerator, divisor) = (B(-1) J(A, B-bar), p).

    The numerator alone is the unnormalised value; numerator/divisor is the
    normalised coefficient.
    """
    ctx = _same_context(a, b)
    num = jacobi_sum(a, b.conjugate(), backend) * b.sign()
    return num, ctx.p


def kronecker_symbol(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n < 1:
        raise ValueError("n must be positive")
    a = int(a)
    result = 1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(sympy.jacobi_symbol(a % n, n))


def crt_reconstruct(residues, moduli, bound: int) -> int:
    """The unique x with |x| <= bound and x = residues[i] mod moduli[i]."""
    moduli = [int(m) for m in moduli]
    for i, m in enumerate(moduli):
        for m2 in moduli[i + 1:]:
            if math.gcd(m, m2) != 1:
                raise ValueError(f"moduli {m} and {m2} are not coprime")
    prod = math.prod(moduli)
    if prod <= 2 * bound:
        raise AmbiguousReconstruction(
            f"product of moduli {prod} does not exceed 2*bound = {2 * bound}")
    x = 0
    for r, m in zip(residues, moduli):
        rest = prod // m
        x += int(r) * rest * pow(rest, -1, m)
    x %= prod
    if x > prod // 2:
        x -= prod
    if abs(x) > bound:
        raise Inconsistent(f"reconstructed {x} exceeds the bound {bound}")
    return x
