"""Fourier coefficients of weight-2 newforms attached to rational elliptic
curves: point counting at primes, Hecke recursion at prime powers, and
multiplicative extension.  Coefficient files can be ingested instead.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import random
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from sympy import primerange

from .errors import InsufficientCoefficients, InvalidInput

NAMED_CURVES = {
    "11a": {"ainvs": (0, -1, 1, -10, -20), "N": 11},
    "14a": {"ainvs": (1, 0, 1, 4, -6), "N": 14},
    "37a": {"ainvs": (0, 0, 1, -1, 0), "N": 37},
    "43a": {"ainvs": (0, 1, 1, 0, 0), "N": 43},
}

_NAIVE_BELOW = 600


def default_data_dir() -> Path:
    env = os.environ.get("TOWERLAB_DATA_DIR")
    return Path(env) if env else Path.home() / ".cache" / "towerlab"


@dataclass(frozen=True)
class Curve:
    ainvs: tuple

    def __post_init__(self):
        if len(self.ainvs) != 5 or not all(isinstance(a, (int, np.integer)) for a in self.ainvs):
            raise InvalidInput("a Weierstrass model needs five integers [a1, a2, a3, a4, a6]")
        object.__setattr__(self, "ainvs", tuple(int(a) for a in self.ainvs))
        if self.discriminant == 0:
            raise InvalidInput("singular Weierstrass model")

    @property
    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def c_invariants(self):
        b2, b4, b6, _ = self.b_invariants
        return b2 * b2 - 24 * b4, -(b2**3) + 36 * b2 * b4 - 216 * b6

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def count_points(self, ell: int) -> int:
        """#E(F_ell) including the point at infinity (singular point counted too)."""
        if ell < _NAIVE_BELOW or self.discriminant % ell == 0:
            return naive_count(self.ainvs, ell)
        return ell + 1 - _ap_bsgs(self, ell)

    def ap(self, ell: int) -> int:
        return ell + 1 - self.count_points(ell)


def naive_count(ainvs, ell: int) -> int:
    """Point count by summing Legendre symbols (or brute force at 2)."""
    a1, a2, a3, a4, a6 = ainvs
    if ell == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - x**3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    n += 1
        return n
    x = np.arange(ell, dtype=np.int64)
    # (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2, b4, b6 = a1 * a1 + 4 * a2, 2 * a4 + a1 * a3, a3 * a3 + 4 * a6
    f = (4 * x + b2 % ell) % ell
    f = (f * x + (2 * b4) % ell) % ell
    f = (f * x + b6 % ell) % ell
    squares = np.zeros(ell, dtype=np.int64)
    squares[(x * x) % ell] = 1
    # each x contributes 1 + legendre(f(x)) points
    leg = np.where(f == 0, 0, np.where(squares[f] == 1, 1, -1))
    return int(ell + leg.sum()) + 1


# -- baby-step giant-step -----------------------------------------------------


def _sqrt_mod(a: int, p: int):
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _add(P, Q, A, p):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + A) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def _mul(k, P, A, p):
    R = None
    if k < 0:
        k, P = -k, (P[0], (-P[1]) % p)
    while k:
        if k & 1:
            R = _add(R, P, A, p)
        P = _add(P, P, A, p)
        k >>= 1
    return R


def _random_point(A, B, p, rng):
    while True:
        x = rng.randrange(p)
        y = _sqrt_mod(x * x * x + A * x + B, p)
        if y is not None and y != 0:
            return (x, y)


def _candidates(P, A, p, lo, hi):
    """All m in [lo, hi] with m P = O."""
    s = math.isqrt(hi - lo) + 1
    baby = {}
    R = P
    for j in range(1, s + 2):
        if R is None:
            # P has order j - 1 <= s
            o = j - 1
            return set(range(-(-lo // o) * o, hi + 1, o))
        baby.setdefault(R[0], []).append((j, R[1]))
        R = _add(R, P, A, p)
    step = _mul(2 * s + 1, P, A, p)
    c = lo + s
    G = _mul(c, P, A, p)
    out = set()
    while c - s <= hi:
        # G = c P; a hit G = +-j P means (c -+ j) P = O
        if G is None:
            hits = [c]
        else:
            hits = [c - j if y == G[1] else c + j for j, y in baby.get(G[0], [])]
        out.update(m for m in hits if lo <= m <= hi)
        c += 2 * s + 1
        G = _add(G, step, A, p)
    return out


def _ap_bsgs(curve: Curve, p: int) -> int:
    c4, c6 = curve.c_invariants
    A, B = (-27 * c4) % p, (-54 * c6) % p
    # a quadratic non-residue gives the twist y^2 = x^3 + d^2 A x + d^3 B
    d = 2
    while pow(d, (p - 1) // 2, p) != p - 1:
        d += 1
    At, Bt = A * d * d % p, B * d * d * d % p
    r = math.isqrt(4 * p)
    lo, hi = p + 1 - r - 1, p + 1 + r + 1
    rng = random.Random(p)
    cand = cand_t = None
    for _ in range(40):
        P = _random_point(A, B, p, rng)
        c = _candidates(P, A, p, lo, hi)
        cand = c if cand is None else cand & c
        if len(cand) == 1:
            return p + 1 - next(iter(cand))
        Pt = _random_point(At, Bt, p, rng)
        ct = _candidates(Pt, At, p, lo, hi)
        cand_t = ct if cand_t is None else cand_t & ct
        if len(cand_t) == 1:
            return next(iter(cand_t)) - (p + 1)
        both = {m for m in cand if (2 * p + 2 - m) in cand_t}
        if len(both) == 1:
            return p + 1 - next(iter(both))
    return p + 1 - naive_count(curve.ainvs, p)


# -- coefficient tables -------------------------------------------------------


@dataclass
class CoefficientTable:
    N: int
    label: str
    an: np.ndarray
    source: str = "curve"
    flags: dict = field(default_factory=dict)

    @property
    def nmax(self) -> int:
        return len(self.an) - 1

    def __getitem__(self, n):
        return self.an[n]

    def require(self, nmax: int) -> np.ndarray:
        if nmax > self.nmax:
            raise InsufficientCoefficients(f"need a_n up to {nmax}, table stops at {self.nmax}")
        return self.an[: nmax + 1]

    def is_ordinary(self, p: int) -> bool:
        return int(self.an[p]) % p != 0

    def check_invariants(self) -> list:
        """Names of violated invariants (empty when all hold)."""
        bad = []
        an = self.an
        if an[1] != 1:
            bad.append("a1")
        n = self.nmax
        for ell in primerange(2, n + 1):
            if an[ell] ** 2 > 4 * ell:
                bad.append(f"hasse:{ell}")
                break
        for ell in primerange(2, math.isqrt(n) + 1):
            eps = 0 if self.N % ell == 0 else 1
            q = ell
            while q * ell <= n:
                if an[q * ell] != an[ell] * an[q] - eps * ell * an[q // ell]:
                    bad.append(f"hecke:{ell}")
                    break
                q *= ell
        for m, k in ((2, 3), (3, 5), (4, 7), (5, 9)):
            if m * k <= n and an[m * k] != an[m] * an[k]:
                bad.append("multiplicative")
        return bad

    def to_dict(self) -> dict:
        return {"label": self.label, "N": self.N, "an": [int(x) for x in self.an[1:]]}


def extend_from_primes(ap: dict, N: int, nmax: int) -> np.ndarray:
    """a_n for n <= nmax from a_ell at primes via Hecke recursion and multiplicativity."""
    an = np.zeros(nmax + 1, dtype=np.int64)
    if nmax >= 1:
        an[1] = 1
    # smallest prime factor sieve
    spf = np.zeros(nmax + 1, dtype=np.int64)
    for ell in primerange(2, nmax + 1):
        if spf[ell] == 0:
            spf[ell::ell][spf[ell::ell] == 0] = ell
    for ell in primerange(2, nmax + 1):
        eps = 0 if N % ell == 0 else 1
        a = int(ap[ell])
        prev, cur, q = 1, a, ell
        an[ell] = a
        while q * ell <= nmax:
            nxt = a * cur - eps * ell * prev
            q *= ell
            an[q] = nxt
            prev, cur = cur, nxt
    for n in range(2, nmax + 1):
        ell = int(spf[n])
        q = ell
        m = n // ell
        while m % ell == 0:
            m //= ell
            q *= ell
        if m > 1:
            an[n] = an[q] * an[m]
    return an


def _cache_path(curve: Curve, data_dir: Path) -> Path:
    key = hashlib.sha1(json.dumps(curve.ainvs).encode()).hexdigest()[:12]
    return data_dir / f"ap_{key}.npz"


def prime_coefficients(curve: Curve, nmax: int, data_dir: Path | None = None) -> dict:
    """{ell: a_ell} for primes ell <= nmax, cached on disk when a data dir is usable."""
    data_dir = default_data_dir() if data_dir is None else Path(data_dir)
    path = _cache_path(curve, data_dir)
    primes = np.array(list(primerange(2, nmax + 1)), dtype=np.int64)
    have = {}
    if path.exists():
        try:
            z = np.load(path)
            have = dict(zip(z["p"].tolist(), z["a"].tolist()))
        except (OSError, ValueError, KeyError):
            have = {}
    missing = [int(q) for q in primes if int(q) not in have]
    if missing:
        for q in missing:
            have[q] = curve.ap(q)
        try:
            data_dir.mkdir(parents=True, exist_ok=True)
            ps = np.array(sorted(have), dtype=np.int64)
            tmp = path.with_suffix(".tmp.npz")
            np.savez(tmp, p=ps, a=np.array([have[int(q)] for q in ps], dtype=np.int64))
            os.replace(tmp, path)
        except OSError:
            pass
    return {int(q): have[int(q)] for q in primes}


def curve_table(curve: Curve | str, nmax: int, N: int | None = None, data_dir=None) -> CoefficientTable:
    label = "custom"
    if isinstance(curve, str):
        if curve not in NAMED_CURVES:
            raise InvalidInput(f"unknown curve label {curve!r}; known: {sorted(NAMED_CURVES)}")
        label = curve
        info = NAMED_CURVES[curve]
        curve, N = Curve(info["ainvs"]), info["N"] if N is None else N
    elif not isinstance(curve, Curve):
        curve = Curve(tuple(curve))
    if N is None:
        raise InvalidInput("the level of a custom curve must be given")
    disc = curve.discriminant
    for ell in primerange(2, 200):
        if (disc % ell == 0) != (N % ell == 0):
            raise InvalidInput(f"level {N} disagrees with the bad primes of the model at {ell}")
    ap = prime_coefficients(curve, nmax, data_dir)
    an = extend_from_primes(ap, N, nmax)
    return CoefficientTable(N, label, an, "curve", {})


def ingest_file(path, nmax: int | None = None) -> CoefficientTable:
    try:
        with open(path) as fh:
            d = json.load(fh)
        N = int(d["N"])
        an = [int(x) for x in d["an"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InvalidInput(f"cannot read coefficient file {path}: {exc}") from exc
    if not an or an[0] != 1:
        raise InvalidInput("coefficient file must start with a_1 = 1")
    arr = np.array([0] + an, dtype=np.int64)
    if nmax is not None:
        if nmax > len(an):
            raise InsufficientCoefficients(f"file has {len(an)} coefficients, need {nmax}")
        arr = arr[: nmax + 1]
    t = CoefficientTable(N, str(d.get("label", Path(path).stem)), arr, "file", {})
    bad = t.check_invariants()
    if bad:
        raise InvalidInput(f"coefficient file violates: {', '.join(bad)}")
    return t


def ingest_or_count(source, nmax: int, N: int | None = None, data_dir=None) -> CoefficientTable:
    """Load a coefficient file or count points on a curve (label or a-invariants)."""
    if isinstance(source, (str, os.PathLike)) and Path(source).suffix == ".json":
        return ingest_file(source, nmax)
    return curve_table(source, nmax, N, data_dir)


def eta_product_11a(nmax: int) -> np.ndarray:
    """q prod (1 - q^n)^2 (1 - q^{11 n})^2, coefficients 0..nmax (index = n)."""
    from scipy.signal import fftconvolve

    L = nmax  # need exponents <= nmax - 1 in the product
    eta = np.zeros(L, dtype=np.int64)
    k = 0
    while True:
        done = True
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e < L:
                eta[e] += -1 if kk % 2 else 1
                done = False
        if done and k:
            break
        k += 1
    nz = np.nonzero(eta)[0]
    eta2 = np.zeros(L, dtype=np.int64)
    for i in nz:
        top = L - i
        eta2[i:] += eta[i] * eta[:top]
    eta2_11 = np.zeros(L, dtype=np.int64)
    idx = np.arange(0, (L + 10) // 11)
    eta2_11[idx * 11] = eta2[idx]
    prod = fftconvolve(eta2.astype(float), eta2_11.astype(float))[:L]
    out = np.zeros(nmax + 1, dtype=np.int64)
    out[1:] = np.rint(prod).astype(np.int64)
    return out
