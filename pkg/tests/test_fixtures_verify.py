import numpy as np
import pytest

from towerlab import fixtures as fx
from towerlab.errors import InvalidParameter
from towerlab.padic import make_ring
from towerlab.series import weierstrass_prepare
from towerlab.verify import FAMILIES, SuiteConfig, brute_force_count, ideal_identity, verify_suite

Z5 = make_ring(5, 0)


def test_streams_are_deterministic_and_independent():
    a = fx.stream(7, "x").integers(0, 10**9, 5)
    b = fx.stream(7, "x").integers(0, 10**9, 5)
    c = fx.stream(7, "y").integers(0, 10**9, 5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_planted_series_reproducible():
    s1 = fx.planted_series(fx.stream(1, "p"), Z5, 32, 12)
    s2 = fx.planted_series(fx.stream(1, "p"), Z5, 32, 12)
    assert s1.series == s2.series and (s1.mu, s1.lam) == (s2.mu, s2.lam)
    w = weierstrass_prepare(s1.series)
    assert (w.mu, w.lam) == (s1.mu, s1.lam)


def test_basechange_fixture_zero_levels():
    rng = fx.stream(2, "bc")
    kinds = {bool(fx.basechange_fixture(rng, Z5, (32, 32), 12, zero_rate=0.5).zero_levels) for _ in range(12)}
    assert kinds == {True, False}


def test_brute_force_count_matches_known_values():
    ainvs = (0, -1, 1, -10, -20)
    assert [p + 1 - brute_force_count(ainvs, p) for p in (2, 3, 5, 7)] == [-2, -1, 1, -2]


def test_ideal_identity_small():
    assert ideal_identity(-23, 500) == []
    assert ideal_identity(-4, 500, 5) == []


def test_default_families_pass():
    rep = verify_suite(SuiteConfig(seed=3, count=3, nmax=1, ideal_nmax=300))
    assert [r.family for r in rep.results] == list(FAMILIES)
    assert rep.passed, rep.to_dict()


def test_planted_violation_fails():
    rep = verify_suite(SuiteConfig(seed=3, count=4, families=("wd2",), plant_violation=True))
    assert not rep.passed
    assert rep.results[0].failures


def test_family_filter_and_unknown():
    rep = verify_suite(SuiteConfig(seed=0, count=2, nmax=2, families=("basechange",)))
    assert [r.family for r in rep.results] == ["basechange"]
    rows = rep.to_dict()["families"][0]["rows"]
    assert rows and all(set(r) >= {"n", "lifted_degree", "base_degree", "expected", "pass"} for r in rows)
    with pytest.raises(InvalidParameter):
        verify_suite(SuiteConfig(families=("nope",)))
