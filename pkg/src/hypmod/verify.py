"""Prime-by-prime verification of the character-sum / Fourier-coefficient
identities, prime sweeps and report serialization.

Every identity is arranged as ``lhs == rhs`` where rhs is a rational integer
built from a Fourier coefficient, and lhs is a character-sum expression that
must therefore also be a rational integer.  On the modular backend lhs is
reconstructed by CRT against an explicit bound; on the complex backend it is
rounded with a 1e-4 tolerance.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import sympy

from .errors import (
    AmbiguousReconstruction,
    Inconsistent,
    PrimeNotSplit,
    RoundingError,
)
from .field import build_field, char_eval, char_from_rational, jacobi_sum, make_backend
from .hecke import family_for_r
from .hypergeometric import P_HD, appell_F1_rational, appell_F2_rational, hd_k4, hd_k5, hd_k5_bar, lcd

SCHEMA_VERSION = 1
HALF = Fraction(1, 2)
THIRD = Fraction(1, 3)
K4_R = tuple(Fraction(1, d) for d in (2, 3, 4, 6, 8, 12, 24))
K5_R = tuple(Fraction(1, d) for d in (2, 3, 6, 12))
DEFAULT_CPRIMES = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 6))
THEOREMS = ("thm1", "thm2", "f1", "f2")

# extra headroom of the auxiliary-prime product over the reconstruction bound:
# a value that is not a small integer survives reconstruction with
# probability about 2**-32
HEADROOM = 2**32


@dataclass
class VerificationReport:
    theorem: str
    r: str
    p: int
    backend: str
    lhs: int | None
    rhs: int | None
    status: str                      # pass | fail | skipped
    reason: str = ""
    cprime: str | None = None
    ms: float | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def sort_key(self):
        return (self.theorem, Fraction(self.r), Fraction(self.cprime or 0), self.p)


# ---------------------------------------------------------------------------
# Fourier coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _j1_coefficients(kind: str, r: Fraction, n: int) -> tuple:
    fam = family_for_r(r, kind)
    f1 = fam.basis_series(1, n)
    return tuple(f1.integer_coefficients(n))


def fourier_coefficient(kind: str, r, p: int) -> int:
    """a_p of the completed eigenform attached to K(r), for p = 1 mod N(r).

    Only the j = 1 basis element has support at p, so a_p is read from it.
    """
    r = Fraction(r)
    if (p - 1) % r.denominator:
        raise PrimeNotSplit(f"p = {p} is not 1 mod {r.denominator}")
    n = 1 << max(9, (p + 1).bit_length())
    return _j1_coefficients(kind, r, n)[p]


# ---------------------------------------------------------------------------
# per-prime verifiers
# ---------------------------------------------------------------------------

def _require_split(values, p: int) -> int:
    M = lcd(values)
    if (p - 1) % M:
        raise PrimeNotSplit(f"p = {p} is not 1 mod M = {M}")
    return M


def _setup(p: int, backend: str, bound: int):
    ctx = build_field(p)
    bk = make_backend(ctx, backend, bound * HEADROOM if backend != "complex" else bound)
    return ctx, bk


def _iota(ctx, bk, r, z):
    return char_eval(char_from_rational(ctx, r), z, bk)


def _psi_inverse(ctx, bk, r):
    """psi(r)^(-1) for the tabulated multiplier psi(r) of the weight-four family."""
    r = Fraction(r)
    if r in (HALF, Fraction(1, 6)):
        return char_eval(char_from_rational(ctx, r).conjugate(), -1, bk)
    if r in (THIRD, Fraction(1, 4)):
        return bk.const(1)
    return char_eval(char_from_rational(ctx, r).conjugate(), -64, bk)


def _finish(theorem, r, p, bk, lhs_value, rhs, bound, cprime=None) -> VerificationReport:
    try:
        lhs = bk.to_int(lhs_value, bound) if bk.name == "complex" else bk.to_int(lhs_value, 2 * bound)
    except (RoundingError, Inconsistent, AmbiguousReconstruction) as exc:
        return VerificationReport(theorem, str(r), p, bk.name, None, rhs, "fail",
                                  f"{type(exc).__name__}: {exc}", cprime)
    status = "pass" if lhs == rhs else "fail"
    return VerificationReport(theorem, str(r), p, bk.name, lhs, rhs, status,
                              "" if status == "pass" else "lhs != rhs", cprime)


def verify_weight4(r, p: int, backend: str = "exact") -> VerificationReport:
    """-psi(r)^(-1) (P(HD_K4(r); 1) + phi(-1) p) == a_p."""
    r = Fraction(r)
    _require_split([HALF, r], p)
    bound = math.ceil(5 * p**1.5 + p)
    ctx, bk = _setup(p, backend, bound)
    P = P_HD(hd_k4(r), 1, p, bk)
    phi = _iota(ctx, bk, HALF, -1)
    lhs = -(_psi_inverse(ctx, bk, r) * (P + phi * p))
    return _finish("thm1", r, p, bk, lhs, fourier_coefficient("K4", r, p), bound)


def verify_weight2(r, p: int, backend: str = "exact") -> VerificationReport:
    """iota(r)(27) P(HD_K5(r); 1) + iota(1-r)(27) P(HD_bar; 1) == -a_p."""
    r = Fraction(r)
    _require_split([THIRD, r], p)
    bound = math.ceil(6 * math.sqrt(p)) + 1
    ctx, bk = _setup(p, backend, bound)
    lhs = (_iota(ctx, bk, r, 27) * P_HD(hd_k5(r), 1, p, bk)
           + _iota(ctx, bk, 1 - r, 27) * P_HD(hd_k5_bar(r), 1, p, bk))
    return _finish("thm2", r, p, bk, lhs, -fourier_coefficient("K5", r, p), bound)


def verify_appell_f1(r, p: int, backend: str = "exact") -> VerificationReport:
    """iota(r)(-27) F1(r; 1/6, 1/6; 1; 1, 1) + iota(1-r)(-27) F1(1-r; 1/3, 1/3; 1; 1, 1) == -a_p."""
    r = Fraction(r)
    _require_split([THIRD, r, Fraction(1, 6)], p)
    bound = 2 * p + 1
    ctx, bk = _setup(p, backend, bound)
    sixth = Fraction(1, 6)
    lhs = (_iota(ctx, bk, r, -27) * appell_F1_rational(r, sixth, sixth, 1, 1, 1, p, bk)
           + _iota(ctx, bk, 1 - r, -27)
           * appell_F1_rational(1 - r, THIRD, THIRD, 1, 1, 1, p, bk))
    return _finish("f1", r, p, bk, lhs, -fourier_coefficient("K5", r, p), bound)


def verify_appell_f2(r, cprime, p: int, backend: str = "exact") -> VerificationReport:
    """iota(r)(-27) iota(c')(-1) F2(1/3; r, 1; 1, c'; 1, 1) + X
    + iota(1-r)(-27) iota(c')(-1) F2(2/3; 1-r, 1; 1, c'; 1, 1) == a_p."""
    r, c = Fraction(r), Fraction(cprime)
    _require_split([THIRD, r, c], p)
    bound = 2 * p * p + 2 * p + 1
    ctx, bk = _setup(p, backend, bound)

    def J(a, b):
        return jacobi_sum(char_from_rational(ctx, a), char_from_rational(ctx, b), bk)

    sign_c = _iota(ctx, bk, c, -1)
    left = _iota(ctx, bk, r, -27)
    right = _iota(ctx, bk, 1 - r, -27)
    X = (-(left * J(c, THIRD - c) * J(r + c - THIRD, THIRD - c))
         - right * J(c, 2 * THIRD - c) * J(THIRD - r + c, 2 * THIRD - c))
    lhs = (left * sign_c * appell_F2_rational(THIRD, r, 1, 1, c, 1, 1, p, bk)
           + X
           + right * sign_c * appell_F2_rational(2 * THIRD, 1 - r, 1, 1, c, 1, 1, p, bk))
    return _finish("f2", r, p, bk, lhs, fourier_coefficient("K5", r, p), bound, str(c))


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def split_primes(M: int, pmax: int, pmin: int = 3) -> list[int]:
    """Primes pmin <= p <= pmax with p = 1 (mod M)."""
    return [p for p in sympy.primerange(max(pmin, 3), pmax + 1) if (p - 1) % M == 0]


def _modulus(theorem: str, r: Fraction, cprime: Fraction | None) -> int:
    if theorem == "thm1":
        return lcd([HALF, r])
    if theorem == "thm2":
        return lcd([THIRD, r])
    if theorem == "f1":
        return lcd([THIRD, r, Fraction(1, 6)])
    return lcd([THIRD, r, cprime])


def _run_task(task) -> VerificationReport:
    theorem, r, cprime, p, backend, timed = task
    start = time.perf_counter()
    try:
        if theorem == "thm1":
            rep = verify_weight4(r, p, backend)
        elif theorem == "thm2":
            rep = verify_weight2(r, p, backend)
        elif theorem == "f1":
            rep = verify_appell_f1(r, p, backend)
        else:
            rep = verify_appell_f2(r, cprime, p, backend)
    except PrimeNotSplit as exc:
        rep = VerificationReport(theorem, str(r), p, backend, None, None, "skipped", str(exc),
                                 None if cprime is None else str(cprime))
    except Exception as exc:  # report, never crash the sweep
        rep = VerificationReport(theorem, str(r), p, backend, None, None, "fail",
                                 f"{type(exc).__name__}: {exc}",
                                 None if cprime is None else str(cprime))
    if timed:
        rep.ms = round((time.perf_counter() - start) * 1000, 3)
    return rep


@dataclass
class SweepReport:
    theorem: str
    backend: str
    pmax: int
    results: list = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def to_json(self) -> str:
        body = {
            "schema_version": SCHEMA_VERSION,
            "theorem": self.theorem,
            "backend": self.backend,
            "pmax": self.pmax,
            "note": self.note,
            "counts": self.counts,
            "results": [asdict(r) for r in self.results],
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theorem", "r", "p", "lhs", "rhs", "status", "ms"])
        for r in self.results:
            label = r.r if r.cprime is None else f"{r.r};c'={r.cprime}"
            w.writerow([r.theorem, label, r.p, r.lhs, r.rhs, r.status,
                        "" if r.ms is None else r.ms])
        return buf.getvalue()


def sweep(theorem: str, r_values: Iterable | None = None, pmax: int = 100,
          backend: str = "exact", jobs: int = 1, cprimes: Sequence | None = None,
          timings: bool = False) -> SweepReport:
    """Run a verifier over every split prime up to ``pmax``.

    Results are sorted by (theorem, r, c', p) whatever the parallelism.
    Wall times are recorded only with ``timings=True`` so that reports are
    reproducible byte for byte.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")
    if r_values is None:
        r_values = K4_R if theorem == "thm1" else K5_R
    rs = [Fraction(r) for r in r_values]
    cs = [Fraction(c) for c in (cprimes or DEFAULT_CPRIMES)] if theorem == "f2" else [None]
    tasks = []
    for r in rs:
        for c in cs:
            for p in split_primes(_modulus(theorem, r, c), pmax):
                tasks.append((theorem, r, c, p, backend, timings))
    report = SweepReport(theorem, backend, pmax)
    if not tasks:
        report.note = "no primes in range"
        return report
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        results = [_run_task(t) for t in tasks]
    report.results = sorted(results, key=VerificationReport.sort_key)
    return report


__all__ = [
    "VerificationReport", "SweepReport", "verify_weight4", "verify_weight2",
    "verify_appell_f1", "verify_appell_f2", "sweep", "split_primes",
    "fourier_coefficient", "K4_R", "K5_R", "DEFAULT_CPRIMES", "SCHEMA_VERSION",
]
