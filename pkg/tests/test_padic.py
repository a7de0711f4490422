from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from towerlab.errors import InvalidParameter, PrecisionError, RingTooSmall
from towerlab.padic import AtLeast, make_ring, root_of_unity, teichmuller, vp

RINGS = [(5, 0), (5, 1), (7, 0), (7, 1), (5, 2)]

ints = st.integers(min_value=-(10**40), max_value=10**40)


def elem(ring, draw_ints):
    return ring.element(draw_ints[: ring.e])


@st.composite
def ring_and_elements(draw, k=2):
    p, m = draw(st.sampled_from(RINGS))
    ring = make_ring(p, m)
    out = [ring.element(draw(st.lists(ints, min_size=ring.e, max_size=ring.e))) for _ in range(k)]
    return ring, out


def test_vp():
    assert vp(250, 5) == 3
    assert vp(7, 5) == 0
    with pytest.raises(InvalidParameter):
        vp(0, 5)


def test_ring_degree_and_precision():
    R = make_ring(5, 2)
    assert R.e == 20
    assert R.default_prec == 400
    assert make_ring(7, 0).e == 1


def test_integer_arithmetic_matches_z():
    R = make_ring(7, 0)
    a, b = R.from_int(123456), R.from_int(-98765)
    assert a * b == R.from_int(123456 * -98765)
    assert (a + b) == R.from_int(123456 - 98765)


def test_valuation_of_p_is_ramification_index():
    R = make_ring(5, 1)
    assert R.from_int(5).valuation() == 4
    assert R.pi().valuation() == 1
    assert isinstance(R.zero().valuation(), AtLeast)


def test_inverse_needs_unit():
    R = make_ring(5, 1)
    with pytest.raises(PrecisionError):
        R.pi().inverse()


def test_zeta_has_order_p_power():
    R = make_ring(5, 2)
    z = R.zeta()
    assert z**25 == R.one()
    assert not (z**5 == R.one())


def test_root_of_unity_labels():
    R = make_ring(7, 1)
    for lab in (Fraction(1, 7), Fraction(1, 6), Fraction(5, 42), Fraction(1, 2)):
        z = root_of_unity(R, lab)
        assert z ** lab.denominator == R.one()
        for d in range(1, lab.denominator):
            if lab.denominator % d == 0:
                assert not (z**d == R.one())
    assert root_of_unity(R, Fraction(1, 2)) == R.from_int(-1)


def test_root_of_unity_rejects_missing_orders():
    with pytest.raises(RingTooSmall):
        root_of_unity(make_ring(5, 0), Fraction(1, 3))
    with pytest.raises(RingTooSmall):
        root_of_unity(make_ring(5, 1), Fraction(1, 25))


def test_teichmuller_is_root_of_unity():
    R = make_ring(7, 0)
    for k in range(1, 7):
        t = teichmuller(R, k)
        assert t**6 == R.one()
        assert not (t - k).is_unit()


def test_embed_is_ring_homomorphism():
    R1, R2 = make_ring(5, 1), make_ring(5, 2)
    a = R1.element([3, 1, 4, 1])
    b = R1.element([2, 7, 1, 8])
    assert (a * b).embed(R2) == a.embed(R2) * b.embed(R2)
    assert R1.zeta().embed(R2) == R2.zeta() ** 5


def test_mixed_ring_arithmetic_rejected():
    with pytest.raises(InvalidParameter):
        make_ring(5, 1).one() + make_ring(5, 0).one()


def test_div_pi():
    R = make_ring(5, 1)
    x = R.from_int(5)
    assert x.div_pi(4) * R.pi() ** 4 == x.with_prec(x.prec)
    with pytest.raises(PrecisionError):
        R.one().div_pi()


def test_serialization_round_trip():
    R = make_ring(7, 1)
    x = R.element([1, 2, 3, 4, 5, 6])
    from towerlab.padic import PadicElement

    assert PadicElement.from_dict(x.to_dict()) == x


@given(ring_and_elements(3))
def test_ring_axioms(data):
    ring, (a, b, c) = data
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a - a == ring.zero()


@given(ring_and_elements(2))
def test_valuation_is_additive(data):
    ring, (a, b) = data
    va, vb = a.valuation(), b.valuation()
    if isinstance(va, AtLeast) or isinstance(vb, AtLeast):
        return
    if va + vb < a.prec:
        assert (a * b).valuation() == va + vb


@given(ring_and_elements(1))
def test_unit_inverse(data):
    ring, (a,) = data
    if a.is_unit():
        assert a * a.inverse() == ring.one()
