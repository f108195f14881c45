"""Optional cross-check of Fourier coefficients against LMFDB.

Offline by default: coefficients are read from a cache directory
(``HYPMOD_CACHE_DIR``, falling back to the packaged fixtures).  Network access
happens only with ``allow_network=True``; fetched values are written back to
the cache so later runs stay offline.
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import CoefficientMismatch, LabelNotFound, NetworkDisabled
from .hecke import FAMILIES, combine

DEFAULT_BASE_URL = "https://www.lmfdb.org"


def _label_family(label: str):
    for fam in FAMILIES.values():
        if label in fam.labels:
            return fam, fam.labels.index(label)
    raise LabelNotFound(f"{label} is not attached to any catalog family")


def local_coefficients(label: str, primes) -> dict:
    """a_p of the catalog eigenform carrying ``label``."""
    fam, idx = _label_family(label)
    coeffs = fam.completion(idx if idx < len(fam.completions) else 0)
    top = max(primes) + 1
    f = combine(fam, coeffs, top)
    return {p: f[p] for p in primes}


def _cache_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("HYPMOD_CACHE_DIR")
    if env:
        dirs.append(Path(env))
    dirs.append(Path(str(resources.files("hypmod") / "data" / "lmfdb")))
    return dirs


def _cache_file(label: str, directory: Path) -> Path:
    return directory / f"{label}.json"


def load_cached(label: str) -> dict | None:
    for d in _cache_dirs():
        path = _cache_file(label, d)
        if path.is_file():
            data = json.loads(path.read_text())
            return {int(p): int(v) for p, v in data["a_p"].items()}
    return None


def fetch_remote(label: str, base_url: str | None = None, timeout: float = 30.0) -> dict:
    """a_n for n <= 1000 from the LMFDB newform API (trace form)."""
    base = base_url or os.environ.get("LMFDB_BASE_URL", DEFAULT_BASE_URL)
    query = urllib.parse.urlencode({"label": label, "_format": "json", "_fields": "label,traces"})
    url = f"{base.rstrip('/')}/api/mf_newforms/?{query}"
    try:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            payload = json.load(resp)
    except urllib.error.HTTPError as exc:
        if exc.code == 404:
            raise LabelNotFound(label) from exc
        raise
    rows = payload.get("data") or []
    if not rows:
        raise LabelNotFound(label)
    traces = rows[0]["traces"]
    # traces[n-1] is the trace of a_n; for a rational newform this is a_n
    return {n: int(v) for n, v in enumerate(traces, start=1)}


def write_cache(label: str, a_p: dict, source: str, directory: Path | None = None) -> Path:
    d = directory or Path(os.environ.get("HYPMOD_CACHE_DIR", "."))
    d.mkdir(parents=True, exist_ok=True)
    path = _cache_file(label, d)
    body = {"label": label, "source": source,
            "a_p": {str(p): int(v) for p, v in sorted(a_p.items())}}
    path.write_text(json.dumps(body, indent=2) + "\n")
    return path


@dataclass
class CrosscheckReport:
    label: str
    primes: list
    local: dict
    remote: dict
    source: str


def lmfdb_crosscheck(label: str, primes, allow_network: bool = False,
                     base_url: str | None = None) -> CrosscheckReport:
    """Compare catalog a_p with cached (or, if allowed, fetched) LMFDB values."""
    primes = sorted(int(p) for p in primes)
    local = local_coefficients(label, primes)
    remote = load_cached(label)
    source = "cache"
    if remote is None or any(p not in remote for p in primes):
        if not allow_network:
            raise NetworkDisabled(
                f"no cached coefficients for {label}; pass allow_network=True to fetch")
        remote = fetch_remote(label, base_url)
        write_cache(label, remote, "lmfdb")
        source = "network"
    for p in primes:
        if local[p] != remote[p]:
            raise CoefficientMismatch(f"{label}: a_{p} local {local[p]} != reference {remote[p]}")
    return CrosscheckReport(label, primes, local, {p: remote[p] for p in primes}, source)


# ---------------------------------------------------------------------------
# elliptic-curve point counts (independent oracle for the weight-two forms)
# ---------------------------------------------------------------------------

def curve_ap(a: tuple, p: int) -> int:
    """a_p = p + 1 - #E(F_p) for y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""
    a1, a2, a3, a4, a6 = a
    count = 1                                   # point at infinity
    for x in range(p):
        # y^2 + (a1 x + a3) y - f(x) = 0 has 1 + legendre(disc) solutions
        b = (a1 * x + a3) % p
        f = (x**3 + a2 * x * x + a4 * x + a6) % p
        disc = (b * b + 4 * f) % p
        if p == 2:
            count += sum(1 for y in range(2) if (y * y + b * y - f) % 2 == 0)
            continue
        if disc == 0:
            count += 1
        elif pow(disc, (p - 1) // 2, p) == 1:
            count += 2
    return p + 1 - count


CURVES = {
    "27.2.a.a": (0, 0, 1, 0, -7),
    "36.2.a.a": (0, 0, 0, 0, 1),
}
