import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sympy import isprime, primerange

from towerlab.curves import (
    Curve,
    curve_table,
    eta_product_11a,
    extend_from_primes,
    ingest_file,
    ingest_or_count,
    naive_count,
)
from towerlab.errors import InsufficientCoefficients, InvalidInput

E11 = (0, -1, 1, -10, -20)


def test_11a_coefficients():
    t = curve_table("11a", 20)
    assert [int(t[n]) for n in (1, 2, 3, 5, 7, 13)] == [1, -2, -1, 1, -2, 4]
    assert t[4] == 2
    assert t.check_invariants() == []


def test_matches_eta_product():
    t = curve_table("11a", 600)
    assert np.array_equal(t.an[1:], eta_product_11a(600)[1:])


@pytest.mark.parametrize("ell", [601, 613, 1009, 2003])
def test_bsgs_matches_naive(ell):
    assert Curve(E11).count_points(ell) == naive_count(E11, ell)


@pytest.mark.parametrize("label", ["11a", "14a", "37a", "43a"])
def test_named_curves_satisfy_invariants(label):
    assert curve_table(label, 300).check_invariants() == []


def test_bad_models():
    with pytest.raises(InvalidInput):
        Curve((0, 0, 0, 0, 0))
    with pytest.raises(InvalidInput):
        Curve((1, 2, 3))
    with pytest.raises(InvalidInput):
        curve_table("99z", 10)
    with pytest.raises(InvalidInput):
        curve_table(E11, 10)
    with pytest.raises(InvalidInput):
        curve_table(E11, 10, N=13)


def test_require():
    t = curve_table("11a", 50)
    assert len(t.require(30)) == 31
    with pytest.raises(InsufficientCoefficients):
        t.require(51)


def test_file_ingest(tmp_path):
    t = curve_table("11a", 100)
    good = tmp_path / "f.json"
    good.write_text(json.dumps(t.to_dict()))
    u = ingest_or_count(str(good), 60)
    assert u.source == "file" and np.array_equal(u.an, t.an[:61])
    with pytest.raises(InsufficientCoefficients):
        ingest_file(good, 101)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"N": 11, "an": [2, 1]}))
    with pytest.raises(InvalidInput):
        ingest_file(bad)
    broken = dict(t.to_dict())
    broken["an"] = list(broken["an"])
    broken["an"][3] += 1
    bad.write_text(json.dumps(broken))
    with pytest.raises(InvalidInput):
        ingest_file(bad)
    with pytest.raises(InvalidInput):
        ingest_file(tmp_path / "missing.json")


def test_cache_round_trip(tmp_path):
    a = curve_table("37a", 200, data_dir=tmp_path)
    assert list(tmp_path.iterdir())
    b = curve_table("37a", 200, data_dir=tmp_path)
    assert np.array_equal(a.an, b.an)


@given(st.integers(2, 400))
def test_hasse_bound(ell):
    if not isprime(ell):
        return
    a = Curve(E11).ap(ell)
    assert a * a <= 4 * ell


@given(st.dictionaries(st.sampled_from(list(primerange(2, 60))), st.integers(-5, 5)))
def test_extension_is_multiplicative(ap):
    ap = {ell: ap.get(ell, 0) for ell in primerange(2, 60)}
    an = extend_from_primes(ap, 11, 59)
    for m in range(1, 60):
        for n in range(1, 60 // m + 1):
            if m * n <= 59 and np.gcd(m, n) == 1:
                assert an[m * n] == an[m] * an[n]
