"""Basechange elements built from a two-variable series L(T1, T2).

T2 is the cyclotomic variable and T1 the anticyclotomic one.  The complete
element at level n multiplies the specializations T2 = zeta - 1 over all
zeta in mu_{p^n}; the incomplete element skips zeta = 1.  Norm composition
pulls a level-1 element back along T1 -> (1 + T1)^{p^(n-1)} - 1.

Degrees are reported in two coordinates.  The base degree is the
Weierstrass degree of the element as a series in T1.  The lifted degree
divides out the index of the lifted variable: p^n for complete products, 1
for incomplete products (already read in their own variable), and
p^(n-1) for norm-composed elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import DirichletCharacter, HeckeCharacter, make_hecke
from .errors import InvalidParameter
from .lfunction import RootNumber, root_number_label
from .padic import PadicRing, make_ring, root_of_unity
from .series import (
    INFINITE,
    TruncatedSeries1,
    TruncatedSeries2,
    content_factor,
    is_infinite,
    relative_degree,
    specialize_axis,
    weierstrass_degree,
)

VARIANTS = ("complete", "incomplete", "norm_composed")


def _deg_json(d):
    return str(d) if is_infinite(d) else d


@dataclass
class BasechangeElement:
    base: TruncatedSeries2
    level: int
    variant: str
    result: TruncatedSeries1
    ring: PadicRing
    factors: int
    zero_factors: list = field(default_factory=list)

    @property
    def lift_index(self) -> int:
        p = self.ring.p
        if self.variant == "complete":
            return p**self.level
        if self.variant == "norm_composed":
            return p ** (self.level - 1)
        return 1

    @property
    def degenerate(self) -> bool:
        return bool(self.zero_factors) or self.result.is_zero()

    @property
    def base_degree(self):
        return INFINITE if self.degenerate else weierstrass_degree(self.result)

    @property
    def lifted_degree(self):
        d = self.base_degree
        if is_infinite(d):
            return d
        q, r = divmod(d, self.lift_index)
        return q if r == 0 else Fraction(d, self.lift_index)

    def to_dict(self) -> dict:
        ld = self.lifted_degree
        return {
            "variant": self.variant,
            "level": self.level,
            "factors": self.factors,
            "zero_factors": [str(z) for z in self.zero_factors],
            "base_degree": _deg_json(self.base_degree),
            "lifted_degree": str(ld) if isinstance(ld, Fraction) else _deg_json(ld),
            "result": self.result.to_dict(),
        }


def _descend(s: TruncatedSeries1, target: PadicRing) -> TruncatedSeries1:
    """Read a series with coefficients in Z_p back over Z_p."""
    if s.ring == target:
        return s
    if target.m != 0:
        return s
    e = s.ring.e
    prec = s.prec // e
    data = s.data[:, :1] % (s.ring.p**prec) if prec > 0 else np.zeros((s.t_order, 1), dtype=object)
    return TruncatedSeries1(target, data, prec)


def _raised(F: TruncatedSeries2, n: int) -> PadicRing:
    return make_ring(F.ring.p, max(F.ring.m, n))


def cyclotomic_values(ring: PadicRing, n: int, include_trivial: bool = True) -> list:
    """(label, zeta - 1) for zeta in mu_{p^n}."""
    p = ring.p
    out = []
    for j in range(p**n):
        if j == 0 and not include_trivial:
            continue
        lab = Fraction(j, p**n)
        out.append((lab, root_of_unity(ring, lab) - 1))
    return out


def _tree_product(items: list):
    while len(items) > 1:
        nxt = [items[i] * items[i + 1] for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def _product(Lp: TruncatedSeries2, n: int, include_trivial: bool, variant: str) -> BasechangeElement:
    if n < 0 or (not include_trivial and n < 1):
        raise InvalidParameter("level must be >= 1 for the incomplete element and >= 0 otherwise")
    ring = _raised(Lp, n)
    zeros = []
    factors = []
    for lab, z in cyclotomic_values(ring, n, include_trivial):
        s = specialize_axis(Lp, 2, z)
        if s.is_zero():
            zeros.append(lab)
        factors.append(s)
    prod = _tree_product(factors)
    if zeros:
        prod = TruncatedSeries1.zero(ring, prod.t_order, prod.prec)
    return BasechangeElement(Lp, n, variant, _descend(prod, Lp.ring), ring, len(factors), zeros)


def basechange_product(Lp: TruncatedSeries2, n: int) -> BasechangeElement:
    """Product over every character of Gal(K_n/K); infinite degree on a zero factor."""
    return _product(Lp, n, True, "complete")


def incomplete_product(Lp: TruncatedSeries2, n: int) -> BasechangeElement:
    """Product over the p^n - 1 nontrivial characters."""
    return _product(Lp, n, False, "incomplete")


def norm_compose(element: BasechangeElement, n: int) -> BasechangeElement:
    """Pull a level-1 element back to level n along the norm map."""
    if n < 1:
        raise InvalidParameter("level must be >= 1")
    if element.level != 1:
        raise InvalidParameter("norm composition starts from a level-1 element")
    g = element.result
    ring = g.ring
    p = ring.p
    k = p ** (n - 1)
    binom = [math.comb(k, i) for i in range(1, min(k, g.t_order - 1) + 1)]
    inner = TruncatedSeries1.from_coeffs(ring, [0] + binom, g.t_order, g.prec)
    out = g.compose(inner)
    return BasechangeElement(element.base, n, "norm_composed", out, element.ring, element.factors, list(element.zero_factors))


def root_of_unity_order(label: Fraction) -> int:
    return Fraction(label).denominator


def _level_of(p: int, label: Fraction) -> int:
    d = Fraction(label).denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return k


def content_zero_levels(Lp: TruncatedSeries2, max_level: int | None = None) -> list:
    """Cyclotomic levels k at which the T2-content vanishes at some primitive
    p^k-th root of unity minus one."""
    cf = content_factor(Lp, 2)
    deg = cf.degree
    if deg == 0:
        return []
    p = Lp.ring.p
    e0 = Lp.ring.e
    levels = []
    k = 0
    while True:
        if max_level is not None and k > max_level:
            break
        if max_level is None and k > 0 and (p - 1) * p ** (k - 1) > deg * e0:
            break
        ring = _raised(Lp, k)
        phi = cf.varpi.embed(ring) if ring != Lp.ring else cf.varpi
        for lab, z in cyclotomic_values(ring, k):
            if _level_of(p, lab) != k:
                continue
            if phi.evaluate(z).is_zero():
                levels.append(k)
                break
        k += 1
    return levels


def n_zero(Lp: TruncatedSeries2) -> int:
    """1 + the largest level carrying a zero of the T2-content (0 if none)."""
    lv = content_zero_levels(Lp)
    return 1 + max(lv) if lv else 0


def r1(Lp: TruncatedSeries2):
    """Degree in T1 of L divided by its T2-content."""
    return relative_degree(content_factor(Lp, 2).quotient, 2)


def specialized_degrees(Lp: TruncatedSeries2, n: int) -> list:
    """(label, Weierstrass degree) at every primitive p^n-th root of unity."""
    ring = _raised(Lp, n)
    p = Lp.ring.p
    out = []
    for lab, z in cyclotomic_values(ring, n):
        if _level_of(p, lab) != n:
            continue
        out.append((lab, weierstrass_degree(specialize_axis(Lp, 2, z))))
    return out


@dataclass
class InvarianceRow:
    n: int
    variant: str
    lifted_degree: object
    base_degree: object
    expected: object
    specialized_ok: bool
    specialized_checked: bool

    @property
    def passed(self) -> bool:
        if self.base_degree != self.expected:
            return False
        return self.specialized_ok or not self.specialized_checked

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "lifted_degree": _deg_json(self.lifted_degree),
            "base_degree": _deg_json(self.base_degree),
            "expected": _deg_json(self.expected),
            "specialized_ok": self.specialized_ok,
            "pass": self.passed,
        }


@dataclass
class InvarianceReport:
    r1: object
    n0: int
    zero_levels: list
    rows: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "r1": _deg_json(self.r1),
            "n0": self.n0,
            "zero_levels": self.zero_levels,
            "rows": [r.to_dict() for r in self.rows],
            "pass": self.passed,
        }


def verify_degree_invariance(Lp: TruncatedSeries2, n_max: int) -> InvarianceReport:
    """Check the degree bookkeeping level by level.

    A level uses the complete product when the content has no zero at
    levels <= n; otherwise it falls back to the norm-composed incomplete
    element, whose base degree should be phi(p^n) * r(1).
    """
    if n_max < 1:
        raise InvalidParameter("n_max must be >= 1")
    p = Lp.ring.p
    r = r1(Lp)
    zl = content_zero_levels(Lp)
    n0 = 1 + max(zl) if zl else 0
    level1 = None
    rows = []
    for n in range(1, n_max + 1):
        checked = n >= n0
        spec_ok = all(d == r for _, d in specialized_degrees(Lp, n)) if checked else False
        if not any(k <= n for k in zl):
            el = basechange_product(Lp, n)
            expected = INFINITE if is_infinite(r) else p**n * r
        else:
            if level1 is None:
                level1 = incomplete_product(Lp, 1)
            el = norm_compose(level1, n)
            expected = INFINITE if (is_infinite(r) or 1 in zl) else (p - 1) * p ** (n - 1) * r
        rows.append(InvarianceRow(n, el.variant, el.lifted_degree, el.base_degree, expected, spec_ok, checked))
    return InvarianceReport(r, n0, zl, rows)


def artin_consistency(Lp: TruncatedSeries2, n: int, z1) -> bool:
    """The complete element evaluated at T1 = z1 equals the product of the
    two-variable values at (z1, zeta - 1)."""
    el = basechange_product(Lp, n)
    ring = el.ring
    z = z1.embed(ring) if z1.ring != ring else z1
    lhs = el.result.embed(ring).evaluate(z) if el.result.ring != ring else el.result.evaluate(z)
    vals = []
    for _, w in cyclotomic_values(ring, n):
        vals.append(specialize_axis(Lp, 2, w).evaluate(z))
    rhs = vals[0]
    for v in vals[1:]:
        rhs = rhs * v
    prec = min(lhs.prec, rhs.prec)
    return (lhs - rhs).with_prec(prec).is_zero()


@dataclass
class ParityTransfer:
    base: RootNumber
    product: RootNumber
    count: int

    @property
    def holds(self) -> bool:
        return self.count % 2 == 1 and self.product.label == self.base.label

    def to_dict(self) -> dict:
        return {"count": self.count, "base": self.base.to_dict(), "product": self.product.to_dict(), "holds": self.holds}


def cyclotomic_twists(p: int, n: int) -> list:
    """Dirichlet characters of p-power order cutting out K_n."""
    if n == 0:
        return [DirichletCharacter(p, 0, 0)]
    return [DirichletCharacter(p, n + 1, k) for k in range(0, (p - 1) * p**n, p - 1)]


def root_number_parity(N: int, W0: HeckeCharacter, n: int) -> ParityTransfer:
    """Product of root-number labels over the p^n twists W0 * (psi o N)."""
    p = W0.p
    base = RootNumber(root_number_label(N, W0))
    total = Fraction(0)
    count = 0
    for psi in cyclotomic_twists(p, n):
        chi = W0.chi.lift(max(W0.chi.n, psi.n)) * psi.lift(max(W0.chi.n, psi.n))
        total += root_number_label(N, make_hecke(W0.rho, chi))
        count += 1
    return ParityTransfer(base, RootNumber(total % 1), count)
