"""Invariant families run over seeded fixtures, one report row per family."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fixtures as fx
from .basechange import (
    basechange_product,
    cyclotomic_values,
    incomplete_product,
    norm_compose,
    root_number_parity,
    verify_degree_invariance,
    _level_of,
)
from .characters import enumerate_ring_class, make_hecke, DirichletCharacter
from .curves import NAMED_CURVES, curve_table
from .iwasawa import (
    GaloisGroupSpec,
    GroupMeasure,
    characters_at_level,
    synthesize_interpolating_measure,
)
from .padic import make_ring, root_of_unity
from .quadforms import class_group, omega_table
from .series import (
    check_degree_relation,
    content_factor,
    specialize_axis,
    weierstrass_degree,
    weierstrass_prepare,
)

FAMILIES = (
    "wprep",
    "wd2",
    "specialization",
    "basechange",
    "ideals",
    "coefficients",
    "measures",
    "interpolation",
    "root_numbers",
)

IDEAL_DISCS = (-3, -4, -7, -8, -11, -23, -47)


@dataclass
class FamilyResult:
    family: str
    total: int = 0
    failures: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.total > 0 and not self.failures

    def record(self, ok: bool, detail):
        self.total += 1
        if not ok:
            self.failures.append(detail)

    def to_dict(self) -> dict:
        d = {"family": self.family, "checked": self.total, "failed": len(self.failures), "pass": self.passed}
        if self.failures:
            d["failures"] = self.failures[:10]
        if self.rows:
            d["rows"] = self.rows
        return d


@dataclass
class SuiteConfig:
    seed: int = 0
    count: int = 20
    nmax: int = 2
    p: int = 5
    families: tuple = FAMILIES
    plant_violation: bool = False
    ideal_nmax: int = 2000
    data_dir: object = None


def family_wprep(cfg: SuiteConfig, count=None, primes=(5, 7), t=64, prec=20) -> FamilyResult:
    res = FamilyResult("wprep")
    count = cfg.count if count is None else count
    for p in primes:
        ring = make_ring(p, 0)
        rng = fx.stream(cfg.seed, f"wprep/{p}")
        for k in range(count):
            ps = fx.planted_series(rng, ring, t, prec)
            w = weierstrass_prepare(ps.series)
            ok = w.mu == ps.mu and w.lam == ps.lam and w.reconstruct() == ps.series
            res.record(ok, {"p": p, "index": k, "mu": [ps.mu, w.mu], "lambda": [ps.lam, w.lam]})
    return res


def family_wd2(cfg: SuiteConfig, count=None) -> FamilyResult:
    res = FamilyResult("wd2")
    count = cfg.count if count is None else count
    ring = make_ring(cfg.p, 0)
    rng = fx.stream(cfg.seed, "wd2")
    items = [fx.relation_fixture(rng, ring) for _ in range(count)]
    if cfg.plant_violation:
        items.append(fx.violation_fixture(ring))
    for k, f in enumerate(items):
        rep = check_degree_relation(f.series)
        res.record(rep.holds, {"index": k, "kind": f.kind, **rep.to_dict()})
    return res


def _bc_fixtures(cfg: SuiteConfig, name: str, count: int, zero_rate: float):
    ring = make_ring(cfg.p, 0)
    rng = fx.stream(cfg.seed, name)
    return [fx.basechange_fixture(rng, ring, zero_rate=zero_rate) for _ in range(count)]


def specialization_check(F, r, max_level: int = 2):
    """Specialized degree at every cyclotomic value of level <= max_level
    where the T2-content does not vanish.  Returns (checked, mismatches)."""
    cf = content_factor(F, 2)
    p = F.ring.p
    checked, bad = 0, []
    for n in range(max_level + 1):
        ring = make_ring(p, max(F.ring.m, n))
        w = cf.varpi.embed(ring) if ring != F.ring else cf.varpi
        for lab, z in cyclotomic_values(ring, n):
            if _level_of(p, lab) != n:
                continue
            if w.evaluate(z).is_zero():
                continue
            d = weierstrass_degree(specialize_axis(F, 2, z))
            checked += 1
            if d != r:
                bad.append({"label": str(lab), "degree": str(d), "expected": r})
    return checked, bad


def family_specialization(cfg: SuiteConfig, count=None) -> FamilyResult:
    res = FamilyResult("specialization")
    count = cfg.count if count is None else count
    for k, f in enumerate(_bc_fixtures(cfg, "specialization", count, 0.3)):
        checked, bad = specialization_check(f.series, f.r1, min(cfg.nmax, 2))
        res.record(not bad and checked > 0, {"index": k, "varpi2": f.varpi2, "mismatches": bad})
    return res


def basechange_scaling(F, r: int, n: int, complete: bool = True):
    """(complete base degree, g_p base degree) against p^n r and phi(p^n) r."""
    p = F.ring.p
    out = {}
    if complete:
        el = basechange_product(F, n)
        out["complete"] = (el.base_degree, p**n * r)
    gp = norm_compose(incomplete_product(F, 1), n)
    out["norm_composed"] = (gp.base_degree, (p - 1) * p ** (n - 1) * r)
    return out


def family_basechange(cfg: SuiteConfig, count=None) -> FamilyResult:
    res = FamilyResult("basechange")
    count = cfg.count if count is None else count
    for k, f in enumerate(_bc_fixtures(cfg, "basechange", count, 0.3)):
        rep = verify_degree_invariance(f.series, cfg.nmax)
        ok = rep.passed and rep.r1 == f.r1
        res.record(ok, {"index": k, "varpi2": f.varpi2, **rep.to_dict()})
        for row in rep.rows:
            res.rows.append({"fixture": k, **row.to_dict()})
    return res


def divisor_omega_sums(D: int, nmax: int) -> np.ndarray:
    om = omega_table(D, nmax).astype(np.int64)
    out = np.zeros(nmax + 1, dtype=np.int64)
    for d in range(1, nmax + 1):
        if om[d]:
            out[d::d] += om[d]
    return out


def ideal_identity(D: int, nmax: int, c: int = 1) -> list:
    """n <= nmax, gcd(n, cD) = 1, where sum_A r_A(n) != sum_{d | n} omega(d)."""
    counts = class_group(D, c).ideal_counts(nmax).sum(axis=0)
    rhs = divisor_omega_sums(D, nmax)
    n = np.arange(nmax + 1)
    mask = (n > 0) & (np.gcd(n, c * abs(D)) == 1)
    return [int(x) for x in np.nonzero(mask & (counts != rhs))[0]]


def family_ideals(cfg: SuiteConfig, nmax=None, discs=IDEAL_DISCS, conductors=(1, 5)) -> FamilyResult:
    res = FamilyResult("ideals")
    nmax = cfg.ideal_nmax if nmax is None else nmax
    for D in discs:
        for c in conductors:
            bad = ideal_identity(D, nmax, c)
            res.record(not bad, {"D": D, "c": c, "first_failures": bad[:5]})
    return res


def brute_force_count(ainvs, ell: int) -> int:
    """Projective points on the Weierstrass model by trying every (x, y)."""
    a1, a2, a3, a4, a6 = ainvs
    x = np.arange(ell, dtype=np.int64)[:, None]
    y = np.arange(ell, dtype=np.int64)[None, :]
    lhs = (y * y + a1 * x * y + a3 * y) % ell
    rhs = (x * x % ell * x + a2 * x * x + a4 * x + a6) % ell
    return int(np.count_nonzero(lhs == rhs)) + 1


def family_coefficients(cfg: SuiteConfig, label: str = "11a", bound: int = 100) -> FamilyResult:
    from sympy import primerange

    res = FamilyResult("coefficients")
    ainvs = NAMED_CURVES[label]["ainvs"]
    table = curve_table(label, bound, data_dir=cfg.data_dir)
    for ell in primerange(2, bound + 1):
        ell = int(ell)
        a = int(table.an[ell])
        expect = ell + 1 - brute_force_count(ainvs, ell)
        ok = a == expect and a * a <= 4 * ell
        res.record(ok, {"ell": ell, "a": a, "brute_force": expect})
    return res


def random_measure(rng, spec: GaloisGroupSpec, level, ring, prec):
    p = spec.p
    vals = {}
    for g0 in spec.torsion_elements():
        for i in range(p ** level[0]):
            for j in range(p ** level[1]):
                if rng.random() < 0.5:
                    vals[(g0, i, j)] = int(rng.integers(-(p**6), p**6))
    return GroupMeasure.from_values(spec, level, ring, vals, prec)


def measure_checks(m1: GroupMeasure, m2: GroupMeasure):
    """(homomorphism failures, series-consistency failures) over every
    character at the measures' level."""
    spec = m1.spec
    prod = m1 * m2
    S = m1.to_power_series()
    hom, ser = [], []
    ring = m1.ring
    for chi in characters_at_level(spec, m1.level):
        if prod.specialize(chi) != m1.specialize(chi) * m2.specialize(chi):
            hom.append(str((chi.gamma1, chi.gamma2)))
        z1 = root_of_unity(ring, chi.gamma1) - 1
        z2 = root_of_unity(ring, chi.gamma2) - 1
        if specialize_axis(S, 2, z2).evaluate(z1) != m1.specialize(chi):
            ser.append(str((chi.gamma1, chi.gamma2)))
    return hom, ser


def family_measures(cfg: SuiteConfig, count=None) -> FamilyResult:
    res = FamilyResult("measures")
    count = max(1, (cfg.count if count is None else count) // 4)
    p = cfg.p
    spec = GaloisGroupSpec(p)
    ring = make_ring(p, 1)
    rng = fx.stream(cfg.seed, "measures")
    for k in range(count):
        m1 = random_measure(rng, spec, (1, 1), ring, 40)
        m2 = random_measure(rng, spec, (1, 1), ring, 40)
        hom, ser = measure_checks(m1, m2)
        res.record(not hom and not ser, {"index": k, "homomorphism": hom, "series": ser})
    return res


def random_targets(rng, spec: GaloisGroupSpec, level, ring, prec):
    out = []
    for chi in characters_at_level(spec, level):
        coeffs = [int(x) for x in rng.integers(0, ring.p**4, ring.e)]
        out.append((chi, ring.element(coeffs, prec)))
    return out


def family_interpolation(cfg: SuiteConfig, count=None) -> FamilyResult:
    res = FamilyResult("interpolation")
    count = max(1, (cfg.count if count is None else count) // 4)
    p = cfg.p
    spec = GaloisGroupSpec(p)
    ring = make_ring(p, 1)
    rng = fx.stream(cfg.seed, "interpolation")
    for k in range(count):
        targets = random_targets(rng, spec, (1, 1), ring, 40)
        m = synthesize_interpolating_measure(targets, spec, ring)
        bad = [str((c.gamma1, c.gamma2)) for c, v in targets if m.specialize(c) != v.with_prec(m.prec - m.shift)]
        res.record(not bad, {"index": k, "shift": m.shift, "mismatches": bad})
    return res


def family_root_numbers(cfg: SuiteConfig, N: int = 11, D: int = -4, nmax=None) -> FamilyResult:
    res = FamilyResult("root_numbers")
    p = cfg.p
    levels = min(cfg.nmax if nmax is None else nmax, 2)
    for rho in enumerate_ring_class(D, p, 1):
        W0 = make_hecke(rho, DirichletCharacter(p, 0, 0))
        for n in range(levels + 1):
            pt = root_number_parity(N, W0, n)
            ok = pt.holds if pt.base.is_real else pt.count % 2 == 1
            res.record(ok, {"rho": [str(x) for x in rho.values], "n": n, **pt.to_dict()})
    return res


_RUNNERS = {
    "wprep": family_wprep,
    "wd2": family_wd2,
    "specialization": family_specialization,
    "basechange": family_basechange,
    "ideals": family_ideals,
    "coefficients": family_coefficients,
    "measures": family_measures,
    "interpolation": family_interpolation,
    "root_numbers": family_root_numbers,
}


@dataclass
class SuiteReport:
    seed: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "families": [r.to_dict() for r in self.results], "pass": self.passed}


def verify_suite(cfg: SuiteConfig) -> SuiteReport:
    unknown = [f for f in cfg.families if f not in _RUNNERS]
    if unknown:
        from .errors import InvalidParameter

        raise InvalidParameter(f"unknown families: {unknown}; choose from {list(FAMILIES)}")
    return SuiteReport(cfg.seed, [_RUNNERS[f](cfg) for f in cfg.families])
