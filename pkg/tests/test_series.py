import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from towerlab import fixtures as fx
from towerlab.basechange import cyclotomic_values
from towerlab.errors import DivergentSubstitution, InsufficientPrecision, InvalidParameter
from towerlab.padic import make_ring
from towerlab.series import (
    INFINITE,
    TruncatedSeries1,
    TruncatedSeries2,
    check_degree_relation,
    content_factor,
    is_infinite,
    mu_invariant,
    specialize_axis,
    weierstrass_degree,
    weierstrass_divide,
    weierstrass_prepare,
)

Z5 = make_ring(5, 0)


def S1(coeffs, ring=Z5, t=16, prec=None):
    return TruncatedSeries1.from_coeffs(ring, coeffs, t, prec)


def S2(terms, ring=Z5, orders=(16, 16)):
    return TruncatedSeries2.from_dict_terms(ring, terms, orders)


# -- preparation examples ----------------------------------------------------


def test_prepare_already_distinguished():
    w = weierstrass_prepare(S1([5, 1]))
    assert (w.mu, w.lam) == (0, 1)
    assert w.distinguished == S1([5, 1])
    assert w.unit == S1([1])


def test_prepare_unit_times_p():
    w = weierstrass_prepare(S1([5, 5]))
    assert (w.mu, w.lam) == (1, 0)
    assert w.unit == S1([1, 1], prec=w.unit.prec)


def test_prepare_planted_product():
    f = S1([5, 5, 1])
    u = S1([1, 2, 3])
    w = weierstrass_prepare((f * u).scale(25))
    assert (w.mu, w.lam) == (2, 2)
    assert w.distinguished.with_prec(w.determined_prec) == f.with_prec(w.determined_prec)
    assert w.unit.with_prec(w.determined_prec) == u.with_prec(w.determined_prec)


def test_degree_examples():
    assert weierstrass_degree(S1([1, 1])) == 0
    assert weierstrass_degree(S1([0, 5, 0, 1])) == 3
    assert weierstrass_degree(S1([])) is INFINITE
    assert is_infinite(mu_invariant(S1([])))


def test_prepare_errors():
    with pytest.raises(InsufficientPrecision):
        weierstrass_prepare(S1([]))


def test_weierstrass_division():
    w = S1([5, 0, 1])
    a = S1([1, 2, 3, 4, 5])
    q, r = weierstrass_divide(a, w)
    assert q.truncate(16) * w + r.truncate(16) == a.with_prec(q.prec)
    with pytest.raises(InvalidParameter):
        weierstrass_divide(a, S1([5, 2]), 1)


def test_inverse_and_compose():
    u = S1([1, 3, 7])
    assert u * u.inverse() == S1([1])
    x = S1([0, 1])
    assert u.compose(x) == u
    with pytest.raises(DivergentSubstitution):
        u.compose(S1([1, 1]))


def test_json_round_trip():
    F = S2({(1, 0): 3, (0, 2): 5})
    assert TruncatedSeries2.from_dict(F.to_dict()) == F


# -- content and degree relation ---------------------------------------------


def test_content_monomial():
    mu, varpi, q = content_factor(S2({(1, 1): 1}), 2)
    assert mu == 0
    assert varpi.degree() == 1 and varpi == S1([0, 1], prec=varpi.prec)
    assert q == S2({(1, 0): 1}, orders=q.shape).with_prec(q.prec)


def test_content_planted():
    F = S2({(1, 1): 5, (0, 2): 5})
    cf = content_factor(F, 2)
    assert cf.mu == 1 and cf.degree == 1


def test_content_coprime():
    cf = content_factor(S2({(2, 0): 1, (0, 1): 1}), 2)
    assert cf.mu == 0 and cf.degree == 0


@pytest.mark.parametrize(
    "terms, expected",
    [
        ({(1, 1): 1}, (1, 1, 1, 1)),
        ({(2, 1): 1}, (2, 1, 1, 2)),
        ({(0, 0): 1, (1, 0): 1, (0, 1): 1}, (0, 0, 0, 0)),
    ],
)
def test_degree_relation_examples(terms, expected):
    rep = check_degree_relation(S2(terms))
    assert rep.holds
    assert (rep.r1, rep.deg_varpi2, rep.r2, rep.deg_varpi1) == expected


def test_degree_relation_counterexample_is_reported():
    rep = check_degree_relation(fx.violation_fixture(Z5, (16, 16)).series)
    assert not rep.holds


# -- specialization -----------------------------------------------------------


def test_specialize_examples():
    R1 = make_ring(5, 1)
    assert specialize_axis(S2({(0, 1): 1}), 2, R1.zero()).is_zero()
    s = specialize_axis(S2({(1, 0): 1, (0, 1): 1}), 2, R1.pi())
    assert s == TruncatedSeries1.from_coeffs(R1, [R1.pi(), 1], 16, s.prec)


def test_specialize_geometric():
    R1 = make_ring(5, 1)
    F = S2({(0, k): 1 for k in range(16)})
    s = specialize_axis(F, 2, R1.pi())
    expected = (1 - R1.pi()).inverse().with_prec(s.prec)
    assert s[0] == expected


def test_specialize_rejects_units():
    R1 = make_ring(5, 1)
    with pytest.raises(DivergentSubstitution):
        specialize_axis(S2({(0, 1): 1}), 2, R1.one())


# -- properties ---------------------------------------------------------------


@given(st.integers(0, 2**32), st.sampled_from([5, 7]))
def test_round_trip_and_uniqueness(seed, p):
    ring = make_ring(p, 0)
    ps = fx.planted_series(np.random.default_rng(seed), ring, 32, 12)
    w1 = weierstrass_prepare(ps.series)
    w2 = weierstrass_prepare(ps.series)
    assert (w1.mu, w1.lam) == (ps.mu, ps.lam)
    assert w1.reconstruct() == ps.series
    assert w1.distinguished == w2.distinguished


@given(st.integers(0, 2**32))
def test_round_trip_ramified(seed):
    ring = make_ring(5, 1)
    ps = fx.planted_series(np.random.default_rng(seed), ring, 24, 40, max_lam=4)
    w = weierstrass_prepare(ps.series)
    assert (w.mu, w.lam) == (ps.mu, ps.lam)
    assert w.reconstruct() == ps.series


@given(st.integers(0, 2**32))
def test_degree_additivity(seed):
    rng = np.random.default_rng(seed)
    g = fx.planted_series(rng, Z5, 40, 15, max_lam=5).series
    h = fx.planted_series(rng, Z5, 40, 15, max_lam=5).series
    assert weierstrass_degree(g * h) == weierstrass_degree(g) + weierstrass_degree(h)


@given(st.integers(0, 2**32))
def test_zero_count_bound(seed):
    rng = np.random.default_rng(seed)
    g = fx.planted_series(rng, Z5, 32, 10, max_lam=3, max_mu=0).series
    if rng.random() < 0.5:
        g = g * S1([0, 1], t=32, prec=10)
    R = make_ring(5, 2)
    ge = g.embed(R)
    zeros = sum(1 for _, z in cyclotomic_values(R, 2) if ge.evaluate(z).is_zero())
    assert zeros <= weierstrass_degree(g)


@given(st.integers(0, 2**32))
def test_degree_relation_on_fixtures(seed):
    f = fx.relation_fixture(np.random.default_rng(seed), Z5, (24, 24), 12)
    rep = check_degree_relation(f.series)
    assert rep.holds
    assert (rep.deg_varpi1, rep.deg_varpi2) == (f.deg_varpi1, f.deg_varpi2)


@given(st.integers(0, 2**32))
def test_specialization_invariance(seed):
    f = fx.basechange_fixture(np.random.default_rng(seed), Z5, (32, 32), 12, zero_rate=0.3)
    cf = content_factor(f.series, 2)
    R = make_ring(5, 1)
    w = cf.varpi.embed(R)
    for _, z in cyclotomic_values(R, 1):
        if not w.evaluate(z).is_zero():
            assert weierstrass_degree(specialize_axis(f.series, 2, z)) == f.r1
