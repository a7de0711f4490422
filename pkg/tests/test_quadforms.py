import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from towerlab.errors import InvalidParameter, OutOfDomain
from towerlab.quadforms import (
    QuadField,
    class_group,
    class_number_formula,
    compose_forms,
    is_fundamental,
    kronecker_omega,
    project_class,
    reduce_form,
)
from towerlab.verify import IDEAL_DISCS, divisor_omega_sums


def test_reduced_forms():
    assert class_group(-4).forms == [(1, 0, 1)]
    assert set(class_group(-23).forms) == {(1, 1, 6), (2, 1, 3), (2, -1, 3)}
    assert set(class_group(-47).forms) == {(1, 1, 12), (2, 1, 6), (2, -1, 6), (3, 1, 4), (3, -1, 4)}


def test_principal_form_first():
    for D in IDEAL_DISCS:
        assert class_group(D).forms[0][0] == 1


def test_composition_d23():
    G = class_group(-23)
    a, b = G.index((2, 1, 3)), G.index((2, -1, 3))
    assert G.forms[G.compose(a, b)] == (1, 1, 6)
    assert G.compose(a, a) == b
    assert G.element_order(a) == 3
    assert G.inverse(a) == b
    assert all(G.compose(0, i) == i for i in range(G.h))


def test_composition_rejects_mixed_discriminants():
    with pytest.raises(InvalidParameter):
        compose_forms((1, 0, 1), (1, 1, 6))


def test_ideal_count_examples():
    G = class_group(-4)
    assert G.ideal_count(0, 5) == 2
    assert G.ideal_count(0, 3) == 0
    H = class_group(-23)
    assert H.ideal_count(H.index((1, 1, 6)), 2) == 0
    assert H.ideal_count(H.index((2, 1, 3)), 2) == 1
    assert H.ideal_count(H.index((2, -1, 3)), 2) == 1


def test_ideal_count_errors():
    G5 = class_group(-4, 5)
    with pytest.raises(OutOfDomain):
        G5.ideal_count(0, 10)
    with pytest.raises(InvalidParameter):
        G5.ideal_count(0, 0)


def test_kronecker_examples():
    assert kronecker_omega(-4, 3) == -1
    assert kronecker_omega(-3, 2) == -1
    assert kronecker_omega(-4, 11) == -1
    assert kronecker_omega(-7, 11) == 1
    assert kronecker_omega(-4, 6) == 0


def test_field_validation():
    assert is_fundamental(-4) and is_fundamental(-23)
    assert not is_fundamental(-12) and not is_fundamental(5)
    with pytest.raises(InvalidParameter):
        QuadField(7)
    with pytest.raises(InvalidParameter):
        class_group(-4, 0)


@pytest.mark.parametrize("D, c, h", [(-4, 5, 2), (-4, 25, 10), (-3, 5, 2), (-7, 5, 6), (-23, 5, 18), (-4, 7, 4)])
def test_order_class_numbers(D, c, h):
    assert class_group(D, c).h == h == class_number_formula(D, c)


def test_projection_is_homomorphism():
    G, H = class_group(-4, 25), class_group(-4, 5)
    for i in range(G.h):
        for j in range(G.h):
            lhs = project_class(G, G.compose(i, j), H)
            rhs = H.compose(project_class(G, i, H), project_class(G, j, H))
            assert lhs == rhs


@pytest.mark.parametrize("D", IDEAL_DISCS)
def test_unit_ideal_only_in_principal_class(D):
    r = class_group(D).ideal_counts(1)
    assert r[0, 1] == 1 and all(r[A, 1] == 0 for A in range(1, r.shape[0]))


@given(st.sampled_from(IDEAL_DISCS), st.integers(1, 3000))
def test_mass_identity(D, n):
    if math.gcd(n, D) != 1:
        return
    G = class_group(D)
    total = sum(G.ideal_count(A, n) for A in range(G.h))
    assert total == divisor_omega_sums(D, n)[n]
    assert all(G.ideal_count(A, n) >= 0 for A in range(G.h))


@given(st.sampled_from(IDEAL_DISCS), st.integers(-60, 60), st.integers(-60, 60))
def test_kronecker_multiplicative(D, m, n):
    assert kronecker_omega(D, m * n) == kronecker_omega(D, m) * kronecker_omega(D, n)


@given(st.integers(1, 40), st.integers(-40, 40), st.integers(1, 40))
def test_reduction_preserves_discriminant(a, b, c):
    disc = b * b - 4 * a * c
    if disc >= 0 or math.gcd(math.gcd(a, b), c) != 1:
        return
    r = reduce_form((a, b, c))
    assert r[1] ** 2 - 4 * r[0] * r[2] == disc
    assert abs(r[1]) <= r[0] <= r[2]
