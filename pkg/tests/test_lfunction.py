import math
from fractions import Fraction

import numpy as np
import pytest

from towerlab.characters import DirichletCharacter, enumerate_ring_class, make_hecke, trivial_hecke, trivial_ring_class
from towerlab.curves import curve_table
from towerlab.errors import FormulaNotApplicable, InsufficientCoefficients, OutOfDomain
from towerlab.lfunction import (
    central_value,
    complete_root_number,
    galois_average,
    is_exceptional,
    l_series,
    orbit_verdict,
    required_coefficients,
    root_number,
    rs_coefficients,
    sigma_bound_ok,
    theta_coefficients,
)
from towerlab.quadforms import kronecker_omega

TRIV = trivial_hecke(-4, 5)


@pytest.fixture(scope="module")
def f11():
    return curve_table("11a", 4000)


def test_theta_gaussian():
    th = theta_coefficients(TRIV, 10)
    assert np.allclose(th[1:6], [1, 1, 0, 1, 2])


def test_theta_nontrivial_rho_at_one():
    rho = enumerate_ring_class(-4, 5, 2)[1]
    W = make_hecke(rho, DirichletCharacter(5, 0))
    assert np.isclose(theta_coefficients(W, 3)[1], 1)
    assert sigma_bound_ok(W, 2000)


def test_theta_multiplicative_at_split_primes():
    W = make_hecke(enumerate_ring_class(-4, 5, 1)[1], DirichletCharacter(5, 1, 1))
    th = theta_coefficients(W, 2000)
    for m, n in ((13, 17), (29, 37), (13, 41)):
        assert np.isclose(th[m * n], th[m] * th[n])


def test_rs_coefficients(f11):
    b = rs_coefficients(f11, TRIV, 30, normalized=False)
    assert np.isclose(b[1], 1)
    assert np.isclose(b[5], 2)
    W = make_hecke(trivial_ring_class(-4, 5, 0), DirichletCharacter(5, 1, 1))
    b = rs_coefficients(f11, W, 30, normalized=False)
    assert all(b[n] == 0 for n in (5, 10, 15, 20, 25))
    with pytest.raises(InsufficientCoefficients):
        rs_coefficients(curve_table("11a", 10), TRIV, 20)


def test_root_number_examples():
    assert root_number(11, TRIV).sign == 1
    eps = root_number(11, trivial_hecke(-7, 5))
    assert eps.sign == -1
    assert is_exceptional(11, trivial_hecke(-7, 5))
    assert not is_exceptional(11, TRIV)
    chi = next(DirichletCharacter(5, 2, k) for k in range(20) if DirichletCharacter(5, 2, k).label(11) == Fraction(1, 5))
    W = make_hecke(trivial_ring_class(-4, 5, 0), chi)
    eps = root_number(11, W)
    assert eps.label == Fraction(2, 5) and eps.sign is None


def test_root_number_not_applicable():
    with pytest.raises(FormulaNotApplicable):
        root_number(14, trivial_hecke(-7, 5))


def test_complete_root_number_ring_class():
    for rho in enumerate_ring_class(-4, 5, 2):
        W = make_hecke(rho, DirichletCharacter(5, 0))
        assert abs(complete_root_number(11, W) - root_number(11, W).value) < 1e-9


def _classical_l1(an, N, chi=None):
    n = np.arange(1, len(an))
    a = an[1:].astype(float)
    if chi is not None:
        a = a * np.array([chi(int(k)) for k in n])
    return 2 * np.sum(a / n * np.exp(-2 * math.pi * n / math.sqrt(N)))


def test_central_value_factors_through_base_change(f11):
    lhs = central_value(f11, TRIV).value
    l1 = _classical_l1(f11.an[:2000], 11)
    l2 = _classical_l1(f11.an[:2000], 176, lambda n: kronecker_omega(-4, n))
    assert abs(lhs.imag) < 1e-9
    assert abs(lhs.real - l1 * l2) < 1e-8
    assert abs(lhs) > 1e-2


def test_sign_forced_vanishing(f11):
    assert abs(central_value(f11, trivial_hecke(-7, 5)).value) < 1e-6


def test_fe_trivial_character(f11):
    inst = l_series(f11, TRIV)
    assert max(inst.fe_residual(t) for t in (0.0, 0.25, 0.5)) < 1e-6


def test_doubling_self_check():
    W = trivial_hecke(-4, 5)
    f = curve_table("11a", required_coefficients(11, W, doubling=True))
    cv = central_value(f, W, check_doubling=True)
    assert cv.doubling_change is not None and 0 < cv.doubling_change < 1e-8
    with pytest.raises(InsufficientCoefficients):
        central_value(curve_table("11a", required_coefficients(11, W)), W, check_doubling=True)


def test_galois_average(f11):
    avg = galois_average(f11, -4, 5, 1, 1)
    assert avg.orbit_size == 1
    assert avg.delta == central_value(f11, TRIV).value
    assert avg.verdict == "all nonzero"
    with pytest.raises(OutOfDomain):
        galois_average(f11, -4, 5, 1, 1, k=1)


def test_exceptional_average_vanishes(f11):
    avg = galois_average(f11, -7, 5, 1, 1)
    assert abs(avg.delta) < 1e-6 and avg.verdict == "all vanish"


def test_orbit_verdict():
    assert orbit_verdict([1.0, 0.5]) == "all nonzero"
    assert orbit_verdict([1e-12, 1e-10]) == "all vanish"
    assert orbit_verdict([1e-12, 1.0]) == "inconsistent"
    assert orbit_verdict([1e-6]) == "inconsistent"
