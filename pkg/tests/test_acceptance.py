"""The eleven acceptance criteria, each at its stated tolerance and size.

Every test records a one-line verdict that is printed under the
"acceptance criteria" section of the pytest terminal summary.
"""

import time


from towerlab import fixtures as fx
from towerlab.basechange import basechange_product, incomplete_product, norm_compose
from towerlab.characters import (
    DirichletCharacter,
    make_hecke,
    orbit,
    tame_parts,
    trivial_hecke,
    trivial_ring_class,
)
from towerlab.curves import curve_table
from towerlab.iwasawa import GaloisGroupSpec, synthesize_interpolating_measure
from towerlab.lfunction import central_value, l_series, orbit_verdict, required_coefficients, root_number
from towerlab.padic import make_ring
from towerlab.series import check_degree_relation, is_infinite, weierstrass_prepare
from towerlab.verify import (
    IDEAL_DISCS,
    brute_force_count,
    ideal_identity,
    measure_checks,
    random_measure,
    random_targets,
    specialization_check,
)

SEED = 20240601


def test_criterion_01_weierstrass_round_trip(acceptance):
    t0 = time.perf_counter()
    failures = []
    for p in (5, 7):
        ring = make_ring(p, 0)
        rng = fx.stream(SEED, f"acceptance/wprep/{p}")
        for k in range(100):
            ps = fx.planted_series(rng, ring, t=64, prec=20)
            w = weierstrass_prepare(ps.series)
            if not (w.mu == ps.mu and w.lam == ps.lam and w.reconstruct() == ps.series):
                failures.append((p, k))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 10
    acceptance(1, "Weierstrass round trip, 200 planted series", ok, f"{200 - len(failures)}/200 in {elapsed:.1f}s")
    assert not failures
    assert elapsed < 10


def test_criterion_02_degree_relation(acceptance):
    ring = make_ring(5, 0)
    rng = fx.stream(SEED, "acceptance/wd2")
    bad = []
    for k in range(100):
        f = fx.relation_fixture(rng, ring)
        rep = check_degree_relation(f.series)
        planted = (f.r1, f.r2, f.deg_varpi1, f.deg_varpi2)
        if not rep.holds or (rep.r1, rep.r2, rep.deg_varpi1, rep.deg_varpi2) != planted:
            bad.append(k)
    acceptance(2, "degree relation r(1) deg varpi2 = r(2) deg varpi1", not bad, f"{100 - len(bad)}/100")
    assert not bad


def test_criterion_03_specialization_invariance(acceptance):
    ring = make_ring(5, 0)
    rng = fx.stream(SEED, "acceptance/specialization")
    bad, checked = [], 0
    for k in range(100):
        f = fx.basechange_fixture(rng, ring, zero_rate=0.3)
        n, mism = specialization_check(f.series, f.r1, 2)
        checked += n
        if mism or n == 0:
            bad.append(k)
    acceptance(3, "specialized degree = r(1) at levels <= 2", not bad, f"{checked} specializations, {len(bad)} bad fixtures")
    assert not bad


def test_criterion_04_basechange_scaling(acceptance):
    ring = make_ring(5, 0)
    p = 5
    rng = fx.stream(SEED, "acceptance/basechange")
    bad, complete_checked = [], 0
    for k in range(50):
        f = fx.basechange_fixture(rng, ring, zero_rate=0.2)
        r = f.r1
        level1 = incomplete_product(f.series, 1)
        for n in (1, 2):
            el = basechange_product(f.series, n)
            if f.zero_levels:
                if not is_infinite(el.base_degree):
                    bad.append((k, n, "complete not degenerate"))
            else:
                complete_checked += 1
                if el.base_degree != p**n * r or el.lifted_degree != r:
                    bad.append((k, n, "complete", el.base_degree))
            gp = norm_compose(level1, n)
            if gp.base_degree != (p - 1) * p ** (n - 1) * r or gp.lifted_degree != (p - 1) * r:
                bad.append((k, n, "incomplete", gp.base_degree))
    acceptance(
        4,
        "basechange degrees p^n r(1) and phi(p^n) r(1)",
        not bad,
        f"50 fixtures, {complete_checked} complete products, {len(bad)} mismatches",
    )
    assert not bad


def test_criterion_05_ideal_count_identity(acceptance):
    t0 = time.perf_counter()
    bad = {}
    for D in IDEAL_DISCS:
        for c in (1, 5):
            fails = ideal_identity(D, 10**4, c)
            if fails:
                bad[(D, c)] = fails[:5]
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    acceptance(5, "sum_A r_A(n) = sum_{d|n} omega(d), n <= 10^4", ok, f"{elapsed:.1f}s")
    assert not bad
    assert elapsed < 30


def test_criterion_06_coefficient_oracle(acceptance):
    from sympy import primerange

    ainvs = (0, -1, 1, -10, -20)
    table = curve_table("11a", 100)
    bad = []
    for ell in map(int, primerange(2, 101)):
        a = int(table.an[ell])
        if a != ell + 1 - brute_force_count(ainvs, ell) or a * a > 4 * ell:
            bad.append(ell)
    acceptance(6, "a_ell of 11a vs brute-force counts, ell <= 100, Hasse", not bad)
    assert not bad


def _order5_twists():
    rho = trivial_ring_class(-4, 5)
    return [make_hecke(rho, DirichletCharacter(5, 2, k)) for k in (4, 8, 12, 16)]


def test_criterion_07_functional_equation(acceptance):
    t0 = time.perf_counter()
    chars = [trivial_hecke(-4, 5)] + _order5_twists()
    assert all(W.order == 5 for W in chars[1:])
    need = max(required_coefficients(11, W) for W in chars)
    f = curve_table("11a", need)
    worst = 0.0
    for W in chars:
        inst = l_series(f, W)
        for t in (0.0, 0.25, 0.5):
            worst = max(worst, inst.fe_residual(t))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and elapsed < 60
    acceptance(7, "functional equation residual, trivial W and 4 order-5 twists", ok, f"max {worst:.1e}, {elapsed:.1f}s")
    assert worst < 1e-6
    assert elapsed < 60


def test_criterion_08_sign_forced_vanishing(acceptance):
    W = trivial_hecke(-7, 5)
    f = curve_table("11a", required_coefficients(11, W))
    eps = root_number(f, W)
    cv = central_value(f, W)
    ok = eps.sign == -1 and abs(cv.value) < 1e-6
    acceptance(8, "D = -7: epsilon = -1 and L(1/2) = 0", ok, f"|L| = {abs(cv.value):.1e}")
    assert eps.sign == -1
    assert abs(cv.value) < 1e-6


def test_criterion_09_orbit_coherence(acceptance):
    D, p = -4, 5
    orbits = []
    for c in (1, 5, 25):
        for q in (1, 5, 25):
            for W0 in tame_parts(D, p, c, q):
                members = orbit(D, p, c, q, W0)
                if members:
                    orbits.append((c, q, members))
    need = max(required_coefficients(11, W) for _, _, m in orbits for W in m)
    f = curve_table("11a", need)
    straddle = []
    for c, q, members in orbits:
        vals = [abs(central_value(f, W).value) for W in members]
        if orbit_verdict(vals) == "inconsistent":
            straddle.append((c, q, vals))
    acceptance(9, "orbits with c, q <= 25 never straddle (1e-8, 1e-4)", not straddle, f"{len(orbits)} orbits")
    assert not straddle


def test_criterion_10_measure_series_contract(acceptance):
    p = 5
    spec = GaloisGroupSpec(p)
    ring = make_ring(p, 1)
    rng = fx.stream(SEED, "acceptance/measures")
    bad = []
    for k in range(8):
        m1 = random_measure(rng, spec, (1, 1), ring, 40)
        m2 = random_measure(rng, spec, (1, 1), ring, 40)
        hom, ser = measure_checks(m1, m2)
        if hom or ser:
            bad.append((k, hom, ser))
    acceptance(10, "W(m1 * m2) = W(m1) W(m2) and series consistency at level (1,1)", not bad)
    assert not bad


def test_criterion_11_interpolation_fixture(acceptance):
    p = 5
    spec = GaloisGroupSpec(p)
    ring = make_ring(p, 1)
    rng = fx.stream(SEED, "acceptance/interpolation")
    targets = random_targets(rng, spec, (1, 1), ring, 40)
    assert len(targets) == p * p
    m = synthesize_interpolating_measure(targets, spec, ring)
    bad = [(c.gamma1, c.gamma2) for c, v in targets if m.specialize(c) != v.with_prec(m.prec - m.shift)]
    acceptance(11, "synthesized measure reproduces all p^2 targets", not bad, f"{p * p - len(bad)}/{p * p}")
    assert not bad
