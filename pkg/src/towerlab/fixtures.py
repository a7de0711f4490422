"""Seeded random fixtures.

Every generator takes a ``numpy.random.Generator``.  Callers derive those
from one integer seed with ``streams(seed, names)``, which spawns an
independent child ``SeedSequence`` per named family.  The same seed
therefore replays the same fixtures no matter which families run or in
what order.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .padic import PadicRing
from .series import TruncatedSeries1, TruncatedSeries2


def _family_key(name: str) -> int:
    return int.from_bytes(hashlib.sha256(name.encode()).digest()[:8], "little")


def stream(seed: int, name: str) -> np.random.Generator:
    """Generator for one fixture family, independent of all other names."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), _family_key(name)]))


def streams(seed: int, names) -> dict:
    return {n: stream(seed, n) for n in names}


def _rand_elem(rng, ring: PadicRing, prec: int, count: int) -> np.ndarray:
    """``count`` random elements of O mod pi^prec as a (count, e) array."""
    mods = ring.moduli(prec)
    cols = [np.array([int(x) for x in rng.integers(0, 2**62, count)], dtype=object) % m for m in mods]
    return np.stack(cols, axis=-1) if cols else np.zeros((count, 0), dtype=object)


def _times_pi(ring: PadicRing, arr: np.ndarray) -> np.ndarray:
    out = np.zeros(arr.shape[:-1] + (ring.e + 1,), dtype=object)
    out[..., 1:] = arr
    return ring.fold(out)


def _pi_power(ring: PadicRing, k: int, prec: int):
    return ring.pi(prec) ** k


def random_unit(rng, ring: PadicRing, t: int, prec: int, terms: int | None = None) -> TruncatedSeries1:
    terms = t if terms is None else min(terms, t)
    arr = np.zeros((t, ring.e), dtype=object)
    arr[:terms] = _rand_elem(rng, ring, prec, terms)
    arr[0, 0] = (arr[0, 0] % ring.p) or 1
    if ring.e > 1:
        arr[0, 0] += ring.p * int(rng.integers(0, ring.p**3))
    return TruncatedSeries1(ring, arr, prec)


def random_distinguished(rng, ring: PadicRing, lam: int, t: int, prec: int) -> TruncatedSeries1:
    """Monic of degree lam with lower coefficients in the maximal ideal."""
    arr = np.zeros((t, ring.e), dtype=object)
    if lam:
        arr[:lam] = _times_pi(ring, _rand_elem(rng, ring, prec, lam))
    arr[lam, 0] = 1
    return TruncatedSeries1(ring, arr, prec)


@dataclass
class PlantedSeries:
    mu: int
    lam: int
    distinguished: TruncatedSeries1
    unit: TruncatedSeries1
    series: TruncatedSeries1


def planted_series(rng, ring: PadicRing, t: int = 64, prec: int | None = None, max_lam: int = 6, max_mu: int = 3) -> PlantedSeries:
    """pi^mu * f * u with f distinguished of random degree and u a unit."""
    prec = ring.default_prec if prec is None else prec
    lam = int(rng.integers(0, max_lam + 1))
    mu = int(rng.integers(0, max_mu + 1))
    f = random_distinguished(rng, ring, lam, t, prec)
    u = random_unit(rng, ring, t, prec)
    g = f * u
    if mu:
        g = g.scale(_pi_power(ring, mu, prec))
    return PlantedSeries(mu, lam, f, u, g)


def random_unit2(rng, ring: PadicRing, orders, prec: int, terms: int = 4) -> TruncatedSeries2:
    n1, n2 = min(terms, orders[0]), min(terms, orders[1])
    data = np.zeros(tuple(orders) + (ring.e,), dtype=object)
    data[:n1, :n2] = _rand_elem(rng, ring, prec, n1 * n2).reshape(n1, n2, ring.e)
    data[0, 0, 0] = (data[0, 0, 0] % ring.p) or 1
    return TruncatedSeries2(ring, data, prec)


def _lift(f: TruncatedSeries1, axis: int, orders) -> TruncatedSeries2:
    return TruncatedSeries2.from_univariate(f, axis, orders)


@dataclass
class TwoVariableFixture:
    series: TruncatedSeries2
    mu: int
    deg_varpi1: int
    deg_varpi2: int
    r1: int | None
    r2: int | None
    kind: str


def separable_fixture(rng, ring: PadicRing, orders=(64, 64), prec: int | None = None, max_deg: int = 3) -> TwoVariableFixture:
    """pi^mu * varpi1(T1) * varpi2(T2) * u(T1, T2): contents resolve by construction."""
    prec = ring.default_prec if prec is None else prec
    d1 = int(rng.integers(0, max_deg + 1))
    d2 = int(rng.integers(0, max_deg + 1))
    mu = int(rng.integers(0, 2))
    w1 = _lift(random_distinguished(rng, ring, d1, orders[0], prec), 1, orders)
    w2 = _lift(random_distinguished(rng, ring, d2, orders[1], prec), 2, orders)
    F = w1 * w2 * random_unit2(rng, ring, orders, prec)
    if mu:
        F = F.scale(_pi_power(ring, mu, prec))
    return TwoVariableFixture(F, mu, d1, d2, d1, d2, "separable")


def content_free_fixture(rng, ring: PadicRing, orders=(64, 64), prec: int | None = None, max_deg: int = 3) -> TwoVariableFixture:
    """T1^a + T2^b + pi * (random) times a unit: both contents are trivial."""
    prec = ring.default_prec if prec is None else prec
    a = int(rng.integers(1, max_deg + 1))
    b = int(rng.integers(1, max_deg + 1))
    data = np.zeros(tuple(orders) + (ring.e,), dtype=object)
    data[a, 0, 0] = 1
    data[0, b, 0] += 1
    k1, k2 = min(a, orders[0]), min(b, orders[1])
    noise = _times_pi(ring, _rand_elem(rng, ring, prec, k1 * k2)).reshape(k1, k2, ring.e)
    data[:k1, :k2] += noise
    F = TruncatedSeries2(ring, data, prec) * random_unit2(rng, ring, orders, prec)
    return TwoVariableFixture(F, 0, 0, 0, a, b, "content_free")


def relation_fixture(rng, ring: PadicRing, orders=(64, 64), prec: int | None = None) -> TwoVariableFixture:
    if rng.random() < 0.7:
        return separable_fixture(rng, ring, orders, prec)
    return content_free_fixture(rng, ring, orders, prec)


def violation_fixture(ring: PadicRing, orders=(64, 64), prec: int | None = None) -> TwoVariableFixture:
    """T1 * (T1 + T2): the two contents do not resolve into separable factors
    and the degree relation fails (r1 = 2 while deg varpi1 = 1, deg varpi2 = 0)."""
    prec = ring.default_prec if prec is None else prec
    F = TruncatedSeries2.from_dict_terms(ring, {(2, 0): 1, (1, 1): 1}, orders, prec)
    return TwoVariableFixture(F, 0, 1, 0, 2, 1, "planted_violation")


def _zero_free_varpi2(rng, ring: PadicRing, deg: int, t: int, prec: int) -> TruncatedSeries1:
    """Distinguished polynomial in T2 whose zeros avoid zeta - 1 for zeta in mu_{p^2}.

    Every coefficient below the top is divisible by p^2, so each root has
    valuation >= 2 / deg (in p-units), beyond all of v(zeta - 1) <= 1 / (p - 1)
    when deg <= 2 (p >= 5).  deg = 0 gives the constant 1.
    """
    arr = np.zeros((t, ring.e), dtype=object)
    p = ring.p
    for i in range(deg):
        arr[i, 0] = p * p * int(rng.integers(1, p**4))
    arr[deg, 0] = 1
    return TruncatedSeries1(ring, arr, prec)


@dataclass
class BasechangeFixture:
    series: TruncatedSeries2
    r1: int
    varpi2: str
    zero_levels: tuple


def basechange_fixture(rng, ring: PadicRing, orders=(64, 64), prec: int | None = None, max_r: int = 2, zero_rate: float = 0.0) -> BasechangeFixture:
    """varpi2(T2) * Q(T1, T2) with Q(T1, 0) of Weierstrass degree r.

    With probability ``zero_rate`` varpi2 is T2 (a zero at the trivial
    character) and otherwise its zeros avoid every zeta - 1 up to level 2.
    """
    prec = ring.default_prec if prec is None else prec
    r = int(rng.integers(1, max_r + 1))
    t1, t2 = orders
    Q = np.zeros((t1, t2, ring.e), dtype=object)
    Q[r, 0, 0] = 1
    for i in range(r):
        Q[i, 0] = _times_pi(ring, _rand_elem(rng, ring, prec, 1))[0]
        Q[i, 1:4] = _rand_elem(rng, ring, prec, 3)
    Q[r + 1, 0:2] = _rand_elem(rng, ring, prec, 2)
    Qs = TruncatedSeries2(ring, Q, prec) * random_unit2(rng, ring, orders, prec, terms=2)
    if rng.random() < zero_rate:
        w = TruncatedSeries1.from_coeffs(ring, [0, 1], t2, prec)
        tag, zl = "T2", (0,)
    else:
        deg = int(rng.integers(0, 3))
        w = _zero_free_varpi2(rng, ring, deg, t2, prec)
        tag, zl = f"zero-free degree {deg}", ()
    F = _lift(w, 2, orders) * Qs
    return BasechangeFixture(F, r, tag, zl)
