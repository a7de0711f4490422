from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from towerlab.characters import (
    DirichletCharacter,
    HeckeCharacter,
    basechange_char,
    decompose,
    enumerate_cyclotomic,
    enumerate_ring_class,
    make_hecke,
    orbit,
    split_label,
    tame_parts,
    trivial_hecke,
    trivial_ring_class,
)
from towerlab.errors import InvalidParameter, UnsupportedRamified
from towerlab.quadforms import class_group


def test_cyclotomic_enumeration():
    chars = enumerate_cyclotomic(5, 1)
    assert len(chars) == 4
    assert sum(1 for x in chars if x.conductor == 5) == 3
    mod25 = enumerate_cyclotomic(5, 2)
    assert len(mod25) == 20
    order5 = [x for x in mod25 if x.order == 5]
    assert len(order5) == 4 and all(x.conductor == 25 for x in order5)
    assert enumerate_cyclotomic(7, 0) == [DirichletCharacter(7, 0, 0)]


def test_cyclotomic_errors():
    for p in (4, 3, 9):
        with pytest.raises(InvalidParameter):
            enumerate_cyclotomic(p, 1)


def test_dirichlet_values():
    chi = DirichletCharacter(5, 2, 4)
    assert chi.label(5) is None and chi(10) == 0
    assert chi.label(1) == 0
    assert chi.lift(3).label(7) == chi.label(7)
    assert chi.primitive() == chi
    assert DirichletCharacter(5, 2, 5).primitive().n == 1


def test_ring_class_enumeration():
    chars = enumerate_ring_class(-4, 5, 1)
    assert len(chars) == 2 and class_group(-4, 5).h == 2
    assert sum(1 for r in chars if r.conductor == 5) == 1
    assert len(enumerate_ring_class(-4, 5, 2)) == 10
    assert [r.is_trivial() for r in enumerate_ring_class(-4, 5, 0)] == [True]
    with pytest.raises(UnsupportedRamified):
        enumerate_ring_class(-15, 5, 1)


def test_decompose_trivial():
    d = decompose(trivial_hecke(-4, 5))
    assert d.rho.is_trivial() and d.chi.order == 1
    assert d.tame.is_trivial() and d.wild.is_trivial()


def test_decompose_wild_cyclotomic():
    W = make_hecke(trivial_ring_class(-4, 5, 2), DirichletCharacter(5, 2, 4))
    d = decompose(W)
    assert d.rho.is_trivial()
    assert d.tame.is_trivial()
    assert d.wild == W


def test_decompose_mixed():
    rho = next(r for r in enumerate_ring_class(-4, 5, 1) if r.conductor == 5)
    chi = DirichletCharacter(5, 1, 1)
    W = make_hecke(rho, chi)
    d = decompose(W)
    assert d.tame * d.wild == W
    assert d.tame.order % 5 != 0
    assert d.wild.order in (1, 5, 25)


def test_orbit_examples():
    o = orbit(-4, 5, 1, 25)
    assert len(o) == 4 and all(W.order == 5 for W in o)
    assert orbit(-4, 5, 1, 1) == [trivial_hecke(-4, 5)]
    rc = orbit(-4, 5, 25, 1)
    assert len(rc) == 4 and all(W.chi.order == 1 and W.rho.order == 5 for W in rc)


@pytest.mark.parametrize("c, q", [(1, 5), (5, 1), (5, 5), (25, 1), (1, 25), (5, 25)])
def test_orbit_sizes_match_enumeration(c, q):
    D, p = -4, 5
    total = sum(len(orbit(D, p, c, q, W0)) for W0 in tame_parts(D, p, c, q))
    distinct = set()
    for r in enumerate_ring_class(D, p, {1: 0, 5: 1, 25: 2}[c]):
        if r.conductor != c:
            continue
        for x in enumerate_cyclotomic(p, {1: 0, 5: 1, 25: 2}[q]):
            if x.conductor == q:
                distinct.add(HeckeCharacter(r, x).key())
    assert total == len(distinct)


def test_basechange_char():
    rho = trivial_ring_class(-4, 5, 1)
    assert basechange_char(rho, 2).on_generator() == 0
    r = enumerate_ring_class(-4, 5, 2)[3]
    bc = basechange_char(r, 1, r.label(1))
    assert bc.order == r.order
    assert bc.on_generator(2) == (2 * r.label(1)) % 1
    with pytest.raises(InvalidParameter):
        basechange_char(rho, -1)


@given(st.integers(0, 19), st.integers(0, 19), st.integers(1, 624), st.integers(1, 624))
def test_dirichlet_multiplicative(k1, k2, a, b):
    x, y = DirichletCharacter(5, 2, k1), DirichletCharacter(5, 2, k2)
    if a % 5 == 0 or b % 5 == 0:
        return
    assert x.label(a * b) == (x.label(a) + x.label(b)) % 1
    assert (x * y).label(a) == (x.label(a) + y.label(a)) % 1


@given(st.fractions(min_value=0, max_value=1, max_denominator=500))
def test_split_label_recombines(label):
    u, v = split_label(label, 5)
    assert (u + v) % 1 == Fraction(label) % 1
    assert u.denominator % 5 != 0
    d = v.denominator
    while d % 5 == 0:
        d //= 5
    assert d == 1


@given(st.integers(0, 9), st.integers(0, 19))
def test_recomposition(i, k):
    rho = enumerate_ring_class(-4, 5, 2)[i]
    W = make_hecke(rho, DirichletCharacter(5, 2, k))
    d = decompose(W)
    assert d.tame * d.wild == W
