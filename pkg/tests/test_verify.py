import json
from fractions import Fraction

import pytest

from hypmod.errors import PrimeNotSplit
from hypmod.verify import (K4_R, K5_R, fourier_coefficient, split_primes, sweep,
                           verify_appell_f1, verify_appell_f2, verify_weight2, verify_weight4)

F = Fraction


def test_weight4_examples():
    rep = verify_weight4(F(1, 2), 3)
    assert rep.passed and rep.lhs == rep.rhs == -4
    assert verify_weight4(F(1, 8), 17).passed
    with pytest.raises(PrimeNotSplit):
        verify_weight4(F(1, 24), 7)


def test_weight2_examples():
    assert verify_weight2(F(1, 3), 7).passed
    assert verify_weight2(F(1, 12), 13).passed
    rep = verify_weight2(F(1, 2), 7)
    assert rep.passed and rep.lhs == rep.rhs == 4


def test_appell_examples():
    assert verify_appell_f1(F(1, 3), 7).passed
    rep = verify_appell_f1(F(1, 12), 13)
    assert rep.passed and rep.lhs == rep.rhs == 5
    assert verify_appell_f2(F(1, 3), F(1, 2), 7).passed
    assert verify_appell_f2(F(1, 2), F(1, 4), 13).passed


def test_fourier_coefficient_anchors():
    assert fourier_coefficient("K4", F(1, 2), 3) == -4
    assert fourier_coefficient("K5", F(1, 3), 7) == -1


@pytest.mark.parametrize("theorem,r,p", [
    ("thm1", F(1, 4), 13), ("thm1", F(1, 6), 37), ("thm2", F(1, 6), 19),
    ("thm2", F(1, 12), 37), ("f1", F(1, 2), 31)])
def test_backends_agree(theorem, r, p):
    fn = {"thm1": verify_weight4, "thm2": verify_weight2, "f1": verify_appell_f1}[theorem]
    exact, approx = fn(r, p, "exact"), fn(r, p, "complex")
    assert exact.passed and approx.passed
    assert (exact.lhs, exact.rhs) == (approx.lhs, approx.rhs)


def test_split_primes():
    assert split_primes(8, 100) == [17, 41, 73, 89, 97]
    assert split_primes(3, 20, pmin=5) == [7, 13, 19]


def test_sweep_is_deterministic_across_workers():
    one = sweep("thm1", [F(1, 4), F(1, 8)], 120, jobs=1)
    two = sweep("thm1", [F(1, 4), F(1, 8)], 120, jobs=2)
    assert one.ok and one.to_json() == two.to_json()
    ps = [(r.r, r.p) for r in one.results]
    assert ps == sorted(ps, key=lambda t: (F(t[0]), t[1]))


def test_sweep_reports():
    rep = sweep("thm2", [F(1, 3)], 40)
    body = json.loads(rep.to_json())
    assert body["schema_version"] == 1 and body["counts"]["pass"] == len(split_primes(3, 40))
    assert all(r["ms"] is None for r in body["results"])
    assert rep.to_csv().splitlines()[0] == "theorem,r,p,lhs,rhs,status,ms"


def test_sweep_f2_labels_cprime():
    rep = sweep("f2", [F(1, 3)], 40, cprimes=[F(1, 2)])
    assert rep.ok and "c'=1/2" in rep.to_csv()


def test_empty_range():
    rep = sweep("thm1", [F(1, 24)], 50)
    assert rep.results == [] and rep.note == "no primes in range" and rep.ok


def test_timings_only_on_request():
    rep = sweep("thm1", [F(1, 2)], 20, timings=True)
    assert all(r.ms is not None for r in rep.results)


def test_unknown_theorem():
    with pytest.raises(ValueError):
        sweep("thm9")


def test_default_r_values():
    assert len(K4_R) == 7 and len(K5_R) == 4
