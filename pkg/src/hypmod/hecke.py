"""Hecke operators on spans of rescaled K4/K5 eta quotients.

A family is the span of f_j = K(j/N)(N tau) over the j listed in the
catalog.  Every f_j is supported on exponents j + N*Z, which makes the
triangular decomposition in ``decompose_in_basis`` cheap and exact.
"""

from __future__ import annotations

import difflib
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Sequence

from .errors import (
    CoefficientNotRational,
    InsufficientPrecision,
    NoRationalSolution,
    NotAnEigenvector,
    ResidualNonZero,
)
from .field import kronecker_symbol
from .numberfield import (
    NumberFieldElement,
    alphas,
    betas,
    nf_make,
    sqrt3_field,
    sqrt_minus3_field,
)
from .qseries import GRID, FormalQSeries, k4_series, k5_series, rescale

MARGIN = 10
MIN_INPUT_PREC = 600


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenformFamily:
    """The span of f_j = K(j/N)(N tau) for one row of the family tables."""

    id: str
    kind: str                       # "K4" or "K5"
    N: int
    js: tuple
    level: int
    nebentypus: int | None          # D for the character kronecker(D, .), or None
    operators: tuple = ()
    completions: tuple = ()         # each: callable () -> dict j -> coefficient
    labels: tuple = ()
    galois: bool = True
    corrected: tuple = ()           # computed completions where the printed one fails

    @property
    def weight(self) -> int:
        return 4 if self.kind == "K4" else 2

    @property
    def r_values(self) -> tuple:
        return tuple(Fraction(j, self.N) for j in self.js)

    def chi(self, p: int) -> int:
        if self.level % p == 0:
            return 0
        if self.nebentypus is None:
            return 1
        return kronecker_symbol(self.nebentypus, p)

    def basis_series(self, j: int, prec: int) -> FormalQSeries:
        """f_j to q-exponent ``prec`` (exclusive, integer)."""
        r = Fraction(j, self.N)
        make = k4_series if self.kind == "K4" else k5_series
        return rescale(make(r, Fraction(prec, self.N)), self.N)

    def basis(self, prec: int) -> list[FormalQSeries]:
        return [self.basis_series(j, prec) for j in self.js]

    def completion(self, index: int = 0) -> dict:
        return self.completions[index]()


def _k4_5_completion():
    b1, b2 = betas()
    return {1: 1, 3: -b1, 5: b2, 7: -b1 * b2 / 5}


def _k4_6_completion():
    s3 = sqrt3_field().gen
    return {1: 1, 5: 32, 7: 8 * s3, 11: 4 * s3}


def _k4_6_computed_completion():
    # T_5 swaps f_1, f_5 with T_5 f_1 = 208 f_5, so d_5^2 = 208 = 16 * 13
    r13 = nf_make([-13, 0, 1], "s13").gen
    return {1: 1, 5: 4 * r13, 7: 8 * r13, 11: 32}


def _k4_7_completion():
    a = alphas()
    return {1: 1, 5: -a[0], 7: a[1], 11: -a[2], 13: -a[3],
            17: a[4], 19: -a[5], 23: -a[6]}


def _k5_4_completion():
    s = sqrt_minus3_field().gen
    return {1: 1, 7: -3 * s}


FAMILIES: dict[str, EigenformFamily] = {f.id: f for f in [
    EigenformFamily("k4-1", "K4", 2, (1,), 8, None, (3, 5, 7, 11, 13),
                    (lambda: {1: 1},), ("8.4.a.a",)),
    EigenformFamily("k4-2", "K4", 3, (1, 2), 9, None, (2, 5, 7),
                    (), ("9.4.a.a",), galois=False),
    EigenformFamily("k4-3", "K4", 4, (1, 3), 32, None, (3,),
                    (lambda: {1: 1, 3: -8}, lambda: {1: 1, 3: 8}),
                    ("32.4.a.a", "32.4.a.c")),
    EigenformFamily("k4-4", "K4", 6, (1, 5), 72, None, (5,),
                    (lambda: {1: 1, 5: -16}, lambda: {1: 1, 5: 16}),
                    ("72.4.a.d", "72.4.a.a")),
    EigenformFamily("k4-5", "K4", 8, (1, 3, 5, 7), 128, 2, (2, 3, 5, 7),
                    (_k4_5_completion,), ("128.4.b.e",)),
    EigenformFamily("k4-6", "K4", 12, (1, 5, 7, 11), 288, None, (5, 7, 11),
                    (_k4_6_completion,), ("288.4.a.l",),
                    corrected=(_k4_6_computed_completion,)),
    EigenformFamily("k4-7", "K4", 24, (1, 5, 7, 11, 13, 17, 19, 23), 1152, 2,
                    (5, 7, 11, 13, 17, 19, 23), (_k4_7_completion,), ("1152.4.d.q",)),
    EigenformFamily("k5-1", "K5", 2, (1,), 36, None, (5, 7, 11, 13),
                    (lambda: {1: 1},), ("36.2.a.a",)),
    EigenformFamily("k5-2", "K5", 3, (1,), 27, None, (2, 5, 7, 11, 13),
                    (lambda: {1: 1},), ("27.2.a.a",)),
    EigenformFamily("k5-3", "K5", 6, (1,), 36, None, (5, 7, 11, 13),
                    (lambda: {1: 1},), ("36.2.a.a",)),
    EigenformFamily("k5-4", "K5", 12, (1, 7), 432, 3, (7,),
                    (_k5_4_completion,), ("432.2.c.a",), galois=False),
]}


def get_family(family_id: str) -> EigenformFamily:
    try:
        return FAMILIES[family_id.lower()]
    except KeyError:
        raise KeyError(f"unknown family {family_id!r}; known: {sorted(FAMILIES)}") from None


def family_for_r(r, kind: str = "K4") -> EigenformFamily:
    """The catalog family containing K(r)."""
    r = Fraction(r)
    for fam in FAMILIES.values():
        if fam.kind == kind and r.denominator == fam.N and r.numerator in fam.js:
            return fam
    raise KeyError(f"no {kind} family contains r = {r}")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def _dense(series: FormalQSeries, n: int) -> list:
    if not series.is_integral_grid():
        raise ValueError("Hecke operators need a series on integer exponents")
    if series.prec < n * GRID:
        raise InsufficientPrecision(f"need q^{n - 1}, have O(q^{series.precision})")
    out = [0] * n
    for g, c in series.terms():
        if g >= n * GRID:
            break
        out[g // GRID] = c
    return out


def hecke_Tp(series: FormalQSeries, p: int, k: int, level: int, nebentypus: int | None = None,
             out_prec: int | None = None) -> FormalQSeries:
    """T_p on q-expansions: b_n = a_{np} + chi(p) p^(k-1) a_{n/p}."""
    known = series.prec // GRID if series.prec % GRID == 0 else series.prec // GRID + 1
    if out_prec is None:
        out_prec = (known - 1) // p + 1
    if out_prec * p > known or out_prec < 1:
        raise InsufficientPrecision(
            f"T_{p} to q^{out_prec} needs input precision q^{out_prec * p}, have q^{known}")
    if level % p == 0:
        chi = 0
    elif nebentypus is None:
        chi = 1
    else:
        chi = kronecker_symbol(nebentypus, p)
    a = _dense(series, out_prec * p)
    c = chi * p ** (k - 1)
    b = [a[n * p] for n in range(out_prec)]
    if c:
        for n in range(0, out_prec, p):
            if a[n // p]:
                b[n] = b[n] + c * a[n // p]
    return FormalQSeries(0, GRID, b, out_prec * GRID)


def decompose_in_basis(series: FormalQSeries, basis: Sequence[FormalQSeries],
                       margin: int = MARGIN) -> list:
    """Coefficients c with series = sum c_i basis_i, by a triangular solve.

    Basis elements must have distinct leading exponents.  The residual must
    vanish to the shared precision, which has to extend at least ``margin``
    lattice steps past every leading exponent.
    """
    order = sorted(range(len(basis)), key=lambda i: basis[i].start)
    starts = [basis[i].start for i in order]
    if len(set(starts)) != len(starts):
        raise ValueError("basis leading exponents are not distinct")
    prec = min([series.prec] + [b.prec for b in basis])
    for b in basis:
        if b.start + margin * b.step >= prec:
            raise InsufficientPrecision(
                f"precision q^{Fraction(prec, GRID)} leaves fewer than {margin} checked "
                f"coefficients past q^{b.valuation}")
    residual = series.truncate(prec)
    coeffs = [0] * len(basis)
    for i in order:
        b = basis[i]
        c = residual.coeff_grid(b.start)
        if not c:
            continue
        lead = b.leading()
        c = _div(c, lead)
        coeffs[i] = c
        residual = residual - b.truncate(prec).scale(c)
    if not residual.is_zero():
        raise ResidualNonZero(
            f"series is not in the span: residual starts at q^{residual.valuation}")
    return coeffs


def _div(c, lead):
    if lead == 1:
        return c
    if isinstance(c, int) and isinstance(lead, int):
        q = Fraction(c, lead)
        return int(q) if q.denominator == 1 else q
    return c / lead


@lru_cache(maxsize=None)
def support_step(fam: EigenformFamily) -> int:
    """Largest exponent spacing among the basis elements (N or a multiple of it)."""
    return max(fam.basis_series(j, 12 * fam.N + max(fam.js)).step for j in fam.js) // GRID


def output_precision(fam: EigenformFamily, margin: int = MARGIN) -> int:
    """Output q-precision giving ``margin`` checked coefficients per basis element."""
    return max(fam.js) + margin * max(fam.N, support_step(fam)) + 1


def input_precision(fam: EigenformFamily, p: int, margin: int = MARGIN) -> int:
    return max(p * output_precision(fam, margin), MIN_INPUT_PREC)


def operator_images(fam: EigenformFamily, p: int, margin: int = MARGIN):
    """[(j, T_p f_j, basis at output precision)] for every basis element."""
    pin = input_precision(fam, p, margin)
    out = pin // p
    basis_in = fam.basis(pin)
    basis_out = [b.truncate(out * GRID) for b in basis_in]
    images = [hecke_Tp(b, p, fam.weight, fam.level, fam.nebentypus, out) for b in basis_in]
    return images, basis_out


def operator_matrix(fam: EigenformFamily, p: int, margin: int = MARGIN) -> list[list]:
    """M with T_p f_{js[c]} = sum_r M[r][c] f_{js[r]}."""
    images, basis = operator_images(fam, p, margin)
    cols = [decompose_in_basis(img, basis, margin) for img in images]
    n = len(fam.js)
    return [[cols[c][r] for c in range(n)] for r in range(n)]


def matmul(A, B):
    n, m, k = len(A), len(B[0]), len(B)
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def proportionality(A, B):
    """c with A = c B (entrywise), or None."""
    c = None
    for ra, rb in zip(A, B):
        for x, y in zip(ra, rb):
            if y == 0:
                if x != 0:
                    return None
                continue
            q = Fraction(x) / Fraction(y)
            if c is None:
                c = q
            elif c != q:
                return None
    return c


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def format_combination(fam: EigenformFamily, coeffs: Sequence) -> str:
    parts = [f"{c}*f{j}" for j, c in zip(fam.js, coeffs) if c]
    return " + ".join(parts) if parts else "0"


@dataclass
class HeckeTable:
    family: str
    cells: list = field(default_factory=list)     # (p, j, text)
    fixture: list | None = None
    mismatches: list = field(default_factory=list)

    def lines(self) -> list[str]:
        return [f"T{p} x f{j} -> {text}" for p, j, text in self.cells]

    def diff(self) -> str:
        if self.fixture is None:
            return ""
        return "".join(difflib.unified_diff(
            [line + "\n" for line in self.fixture], [line + "\n" for line in self.lines()],
            fromfile=f"expected/{self.family}", tofile=f"computed/{self.family}"))

    @property
    def ok(self) -> bool:
        return self.fixture is not None and not self.mismatches


def load_table_fixture(family_id: str) -> list[str] | None:
    name = f"hecke_{family_id}.txt"
    res = resources.files("hypmod") / "data" / name
    if not res.is_file():
        return None
    return [line.strip() for line in res.read_text().splitlines()
            if line.strip() and not line.startswith("#")]


def reproduce_table(family_id: str, margin: int = MARGIN) -> HeckeTable:
    """Compute every (T_p, f_j) cell of a family and compare with its fixture."""
    fam = get_family(family_id)
    table = HeckeTable(fam.id, fixture=load_table_fixture(fam.id))
    for p in fam.operators:
        images, basis = operator_images(fam, p, margin)
        for j, img in zip(fam.js, images):
            try:
                text = format_combination(fam, decompose_in_basis(img, basis, margin))
            except ResidualNonZero:
                text = "not in span"
            table.cells.append((p, j, text))
    if table.fixture is not None:
        expected = {line.split("->")[0].strip(): line for line in table.fixture}
        got = {line.split("->")[0].strip(): line for line in table.lines()}
        for key in sorted(set(expected) | set(got)):
            if expected.get(key) != got.get(key):
                table.mismatches.append((key, expected.get(key), got.get(key)))
    return table


# ---------------------------------------------------------------------------
# eigenforms
# ---------------------------------------------------------------------------

def combine(fam: EigenformFamily, coeffs: dict, prec: int) -> FormalQSeries:
    """sum_j d_j f_j to q-precision ``prec``."""
    total = None
    for j in fam.js:
        d = coeffs.get(j, 0)
        if not d:
            continue
        term = fam.basis_series(j, prec)
        term = term if d == 1 else term.map(lambda c, d=d: d * c)
        total = term if total is None else total + term
    return total


@dataclass
class EigenformReport:
    family: str
    primes: list
    eigenvalues: dict
    checked_to: int


def verify_eigenform(family_id: str, primes: Sequence[int] | None = None,
                     coeffs: dict | None = None, prec: int = 60) -> EigenformReport:
    """Check T_p f = a_p f for f = sum d_j f_j through q^prec."""
    fam = get_family(family_id)
    if coeffs is None:
        if not fam.completions:
            raise NoRationalSolution(f"family {fam.id} has no catalog completion", None)
        coeffs = fam.completion()
    primes = list(primes if primes is not None else fam.operators)
    primes = [p for p in primes if fam.level % p]
    top = max(primes) if primes else 1
    f = combine(fam, coeffs, prec * top)
    eigenvalues = {}
    for p in primes:
        tf = hecke_Tp(f, p, fam.weight, fam.level, fam.nebentypus, prec)
        ap = f[p]
        lhs, rhs = tf, f.truncate(prec * GRID).map(lambda c: ap * c)
        diff = lhs.first_difference(rhs)
        if diff is not None:
            raise NotAnEigenvector(p, f"T_{p} f differs from a_{p} f at q^{Fraction(diff, GRID)}")
        if (p - 1) % fam.N == 0:
            a1 = fam.basis_series(1, p + 1)[p]
            if a1 != ap:
                raise NotAnEigenvector(p, f"a_{p} is not carried by f_1 alone")
            if isinstance(ap, NumberFieldElement):
                if not ap.is_rational():
                    raise CoefficientNotRational(f"a_{p} = {ap}")
                ap = ap.rational()
            if isinstance(ap, Fraction) and ap.denominator != 1:
                raise CoefficientNotRational(f"a_{p} = {ap}")
        eigenvalues[p] = ap
    return EigenformReport(fam.id, primes, eigenvalues, prec)


def eigenvalue_from_j1(fam: EigenformFamily, p: int) -> int:
    """a_p of the completed eigenform for p = 1 mod N, read from f_1 alone."""
    if (p - 1) % fam.N:
        raise ValueError(f"p = {p} is not 1 mod {fam.N}")
    return fam.basis_series(1, p + 1)[p]


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def complete_eigenform_rational(family_id: str, margin: int = MARGIN) -> list[dict]:
    """Rational completions f_1 + d f_j of a two-dimensional family.

    An operator swapping the two basis elements (T f_1 = c f_j, T f_j = c' f_1)
    forces d^2 = c / c'.  Every returned completion passes verify_eigenform.
    """
    fam = get_family(family_id)
    if len(fam.js) == 1:
        return [{fam.js[0]: 1}]
    catalog = fam.completion() if fam.completions else None
    if len(fam.js) != 2:
        raise NoRationalSolution(f"family {fam.id} is not two-dimensional", catalog)
    j = fam.js[1]
    for p in fam.operators:
        if fam.level % p == 0:
            continue
        M = operator_matrix(fam, p, margin)
        c, c_prime = M[1][0], M[0][1]
        if M[0][0] or M[1][1] or not c or not c_prime:
            continue
        d = _rational_sqrt(Fraction(c) / Fraction(c_prime))
        if d is None:
            if catalog is not None:
                verify_eigenform(fam.id, coeffs=catalog)
            raise NoRationalSolution(
                f"d^2 = {Fraction(c) / Fraction(c_prime)} has no rational root", catalog)
        out = []
        for s in (-d, d):
            s = int(s) if s.denominator == 1 else s
            cand = {1: 1, j: s}
            verify_eigenform(fam.id, coeffs=cand)
            out.append(cand)
        return out
    raise NoRationalSolution(f"no swapping operator for family {fam.id}", catalog)


def observed_support_modulus(series: FormalQSeries) -> int:
    """Largest m with the support inside (leading exponent) + m*Z."""
    if not series.is_integral_grid():
        raise ValueError("series is not on integer exponents")
    lead = series.start
    g = 0
    for e, _ in series.terms():
        g = math.gcd(g, e - lead)
    return g // GRID if g else 0


__all__ = [
    "EigenformFamily", "FAMILIES", "get_family", "family_for_r", "hecke_Tp",
    "decompose_in_basis", "operator_matrix", "reproduce_table", "verify_eigenform",
    "complete_eigenform_rational", "observed_support_modulus", "eigenvalue_from_j1",
    "HeckeTable", "EigenformReport", "combine", "matmul", "proportionality",
    "operator_images", "output_precision", "input_precision", "support_step",
]
