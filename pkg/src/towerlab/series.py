"""Truncated one- and two-variable power series over a cyclotomic p-adic ring.

Storage is a numpy object array whose last axis holds the pi-basis
coordinates of each coefficient: shape (t, e) for O[[T]] and (t1, t2, e)
for O[[T1, T2]].  Every coefficient shares one absolute precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernel import polymul
from .errors import (
    DivergentSubstitution,
    InsufficientPrecision,
    InsufficientTruncation,
    InvalidParameter,
)
from .padic import AtLeast, PadicElement, PadicRing, make_ring

DEFAULT_T_ORDER = 64


class _Infinite:
    """Weierstrass degree of a series that vanishes at working precision."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITE"

    __str__ = __repr__

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITE")

    def __gt__(self, other):
        return other is not self

    def __lt__(self, other):
        return False

    def __ge__(self, other):
        return True

    def __le__(self, other):
        return other is self


INFINITE = _Infinite()


def is_infinite(x) -> bool:
    return x is INFINITE


# -- coefficient-array primitives ------------------------------------------


def omul(ring: PadicRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise product in O (broadcast over leading axes), unreduced."""
    e = ring.e
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (2 * e - 1,)
    out = np.zeros(shape, dtype=object)
    for j in range(e):
        bj = b[..., j : j + 1]
        if not np.any(bj):
            continue
        out[..., j : j + e] += a * bj
    return ring.fold(out)


def div_pi_array(ring: PadicRing, arr: np.ndarray, prec: int, k: int = 1) -> np.ndarray:
    """Exact division of every entry by pi^k; entries must have valuation >= k."""
    cof = np.array(ring._pi_cofactor + [0] * (ring.e - len(ring._pi_cofactor)), dtype=object)
    unit = ring._pi_unit
    for _ in range(k):
        prod = omul(ring, arr, cof)
        if np.any(prod % unit):
            raise InsufficientPrecision("entry not divisible by the uniformizer")
        prec -= 1
        arr = ring.reduce(prod // unit, prec)
    return arr


def series_product(ring: PadicRing, a: np.ndarray, b: np.ndarray, crop: tuple, prec: int):
    """Truncated product of two coefficient arrays, reduced at ``prec``."""
    raw = polymul(a, b, crop=crop + (2 * ring.e - 1,))
    return ring.reduce(raw, prec)


@lru_cache(maxsize=None)
def _embed_matrix(src: PadicRing, dst: PadicRing, prec: int) -> np.ndarray:
    """Rows are the images of pi_src^i written in the pi_dst basis."""
    img = (dst.zeta(prec) ** (src.p ** (dst.m - src.m)) - 1) if src.m else dst.from_int(src.p, prec)
    rows = []
    cur = dst.one(prec)
    for _ in range(src.e):
        rows.append(list(cur.coeffs))
        cur = cur * img
    return np.array(rows, dtype=object)


def embed_array(arr: np.ndarray, src: PadicRing, dst: PadicRing, prec: int):
    """Map coefficient arrays O_src -> O_dst; returns (array, new precision)."""
    if src == dst:
        return arr, prec
    if src.p != dst.p or dst.m < src.m:
        raise InvalidParameter(f"no embedding {src} -> {dst}")
    new_prec = prec * (dst.e // src.e)
    mat = _embed_matrix(src, dst, new_prec)
    flat = arr.reshape(-1, src.e).dot(mat)
    return dst.reduce(flat.reshape(arr.shape[:-1] + (dst.e,)), new_prec), new_prec


def _as_coeff_array(ring: PadicRing, values, prec: int) -> np.ndarray:
    """Turn a (nested) list of ints / PadicElements / pi-vectors into an array."""

    def conv(v):
        if isinstance(v, PadicElement):
            if v.ring != ring:
                raise InvalidParameter("coefficient lives in a different ring")
            return list(v.coeffs)
        if isinstance(v, (int, np.integer)):
            return [int(v)] + [0] * (ring.e - 1)
        raise TypeError(f"unsupported coefficient {v!r}")

    def walk(v):
        if isinstance(v, (list, tuple, np.ndarray)) and not isinstance(v, PadicElement):
            return [walk(x) for x in v]
        return conv(v)

    arr = np.array(walk(values), dtype=object)
    return ring.reduce(arr, prec)


# -- series classes ----------------------------------------------------------


class _Series:
    nvars = 0

    def __init__(self, ring: PadicRing, data: np.ndarray, prec: int):
        self.ring = ring
        self.prec = int(prec)
        self.data = ring.reduce(np.asarray(data, dtype=object), self.prec)
        if self.data.ndim != self.nvars + 1:
            raise InvalidParameter("coefficient array has the wrong number of axes")

    @property
    def shape(self):
        return self.data.shape[:-1]

    def _like(self, data, prec):
        return type(self)(self.ring, data, prec)

    def _check(self, other):
        if type(other) is not type(self) or other.ring != self.ring:
            raise InvalidParameter("series live in different rings or variable counts")
        if other.shape != self.shape:
            raise InvalidParameter(f"truncation mismatch {self.shape} vs {other.shape}")

    def min_valuation(self) -> int:
        """Smallest coefficient valuation (the precision if all vanish)."""
        return int(self.ring.valuations(self.data, self.prec).min())

    def is_zero(self) -> bool:
        return not np.any(self.data)

    def __add__(self, other):
        if isinstance(other, (int, PadicElement)):
            other = self.constant(other)
        self._check(other)
        prec = min(self.prec, other.prec)
        return self._like(self.data + other.data, prec)

    __radd__ = __add__

    def __neg__(self):
        return self._like(-self.data, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "_Series":
        if isinstance(c, int):
            c = self.ring.from_int(c, self.prec)
        if c.ring != self.ring:
            raise InvalidParameter("scalar lives in a different ring")
        v = c.valuation()
        v = v.bound if isinstance(v, AtLeast) else v
        prec = min(v + self.prec, self.min_valuation() + c.prec)
        return self._like(omul(self.ring, self.data, np.array(c.coeffs, dtype=object)), prec)

    def __mul__(self, other):
        if isinstance(other, (int, PadicElement)):
            return self.scale(other)
        self._check(other)
        prec = min(self.min_valuation() + other.prec, other.min_valuation() + self.prec)
        return self._like(series_product(self.ring, self.data, other.data, self.shape, prec), prec)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidParameter("negative powers need inverse()")
        out = self.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, _Series):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def with_prec(self, prec: int):
        return self._like(self.data, min(prec, self.prec))

    def embed(self, target: PadicRing):
        arr, prec = embed_array(self.data, self.ring, target, self.prec)
        return type(self)(target, arr, prec)

    def div_pi(self, k: int = 1):
        return self._like(div_pi_array(self.ring, self.data, self.prec, k), self.prec - k)

    def to_dict(self) -> dict:
        return {
            "ring": {"p": self.ring.p, "m": self.ring.m},
            "t_orders": list(self.shape),
            "prec": self.prec,
            "coeffs": self.data.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict):
        ring = make_ring(d["ring"]["p"], d["ring"]["m"])
        data = np.array(d["coeffs"], dtype=object)
        if list(data.shape[:-1]) != list(d["t_orders"]):
            raise InvalidParameter("coefficient grid does not match t_orders")
        return cls(ring, data, d["prec"])


class TruncatedSeries1(_Series):
    """Element of O[[T]] known modulo (T^t, pi^prec)."""

    nvars = 1

    @classmethod
    def from_coeffs(cls, ring, coeffs, t_order=DEFAULT_T_ORDER, prec=None):
        prec = ring.default_prec if prec is None else prec
        coeffs = list(coeffs)
        if len(coeffs) > t_order:
            if any(coeffs[t_order:]):
                raise InsufficientTruncation(f"polynomial of length {len(coeffs)} exceeds t_order {t_order}")
            coeffs = coeffs[:t_order]
        coeffs = coeffs + [0] * (t_order - len(coeffs))
        return cls(ring, _as_coeff_array(ring, coeffs, prec), prec)

    @classmethod
    def zero(cls, ring, t_order=DEFAULT_T_ORDER, prec=None):
        return cls.from_coeffs(ring, [], t_order, prec)

    def constant(self, c):
        return TruncatedSeries1.from_coeffs(self.ring, [c], self.t_order, self.prec)

    @property
    def t_order(self) -> int:
        return self.data.shape[0]

    @property
    def coeffs(self) -> list:
        return [PadicElement(self.ring, tuple(int(x) for x in row), self.prec) for row in self.data]

    def __getitem__(self, k: int) -> PadicElement:
        return PadicElement(self.ring, tuple(int(x) for x in self.data[k]), self.prec)

    def degree(self) -> int:
        """Index of the last nonzero coefficient (-1 for zero)."""
        nz = np.nonzero(np.any(self.data != 0, axis=-1))[0]
        return int(nz[-1]) if nz.size else -1

    def truncate(self, t: int):
        if t > self.t_order:
            pad = np.zeros((t - self.t_order, self.ring.e), dtype=object)
            return TruncatedSeries1(self.ring, np.concatenate([self.data, pad]), self.prec)
        return TruncatedSeries1(self.ring, self.data[:t], self.prec)

    def shift(self, k: int):
        """Multiply by T^k (k >= 0) or drop the first -k terms (k < 0)."""
        e = self.ring.e
        if k >= 0:
            data = np.concatenate([np.zeros((k, e), dtype=object), self.data])[: self.t_order]
        else:
            data = np.concatenate([self.data[-k:], np.zeros((-k, e), dtype=object)])
        return TruncatedSeries1(self.ring, data, self.prec)

    def inverse(self):
        """Multiplicative inverse; needs a unit constant term."""
        c0 = self[0]
        if not c0.is_unit():
            raise InvalidParameter("series with non-unit constant term is not invertible")
        y = self.constant(c0.inverse())
        k = 1
        while k < self.t_order:
            k *= 2
            y = y * (2 - self * y)
        return y

    def evaluate(self, z: PadicElement) -> PadicElement:
        """Substitute z (positive valuation) for T; tail bound enters the precision."""
        v = z.valuation()
        if isinstance(v, AtLeast) and z.prec <= 0:
            raise DivergentSubstitution("substituted value has no known digits")
        if not isinstance(v, AtLeast) and v <= 0:
            raise DivergentSubstitution("substituted value must lie in the maximal ideal")
        src = self
        if z.ring != self.ring:
            src = self.embed(z.ring)
        ring = z.ring
        vz = v.bound if isinstance(v, AtLeast) else v
        prec = min(src.prec, z.prec, vz * src.t_order)
        zpows = _powers(z.with_prec(max(min(z.prec, prec), 0)) if prec < z.prec else z, src.t_order)
        acc = omul(ring, src.data, zpows).sum(axis=0)
        return ring.element(ring.reduce(acc, prec), prec)

    def compose(self, inner: "TruncatedSeries1"):
        """self(inner(T)) for inner with zero constant term."""
        if inner.ring != self.ring or inner.t_order != self.t_order:
            raise InvalidParameter("compose needs matching ring and truncation")
        if np.any(inner.data[0]):
            raise DivergentSubstitution("inner series must have zero constant term")
        acc = self.constant(self[self.t_order - 1])
        for k in range(self.t_order - 2, -1, -1):
            acc = acc * inner + self[k]
        return acc.with_prec(min(self.prec, inner.prec))

    def __repr__(self):
        terms = []
        for i, row in enumerate(self.data):
            if any(row):
                terms.append(f"{list(row)}*T^{i}")
        return f"TruncatedSeries1(p={self.ring.p}, m={self.ring.m}, {' + '.join(terms) or '0'}, t={self.t_order}, prec={self.prec})"


def _powers(z: PadicElement, n: int) -> np.ndarray:
    ring = z.ring
    out = np.zeros((n, ring.e), dtype=object)
    cur = ring.one(z.prec)
    for k in range(n):
        out[k] = cur.coeffs
        cur = cur * z
    return out


class TruncatedSeries2(_Series):
    """Element of O[[T1, T2]] known modulo (T1^t1, T2^t2, pi^prec)."""

    nvars = 2

    @classmethod
    def from_coeffs(cls, ring, grid, orders=(DEFAULT_T_ORDER, DEFAULT_T_ORDER), prec=None):
        """``grid[i][j]`` is the coefficient of T1^i T2^j."""
        prec = ring.default_prec if prec is None else prec
        t1, t2 = orders
        data = np.zeros((t1, t2, ring.e), dtype=object)
        for i, row in enumerate(grid):
            for j, c in enumerate(row):
                arr = _as_coeff_array(ring, [c], prec)[0]
                if i >= t1 or j >= t2:
                    if np.any(arr):
                        raise InsufficientTruncation("coefficient grid exceeds the truncation orders")
                    continue
                data[i, j] = arr
        return cls(ring, data, prec)

    @classmethod
    def from_dict_terms(cls, ring, terms: dict, orders=(DEFAULT_T_ORDER, DEFAULT_T_ORDER), prec=None):
        """Build from {(i, j): coefficient}."""
        prec = ring.default_prec if prec is None else prec
        data = np.zeros(tuple(orders) + (ring.e,), dtype=object)
        for (i, j), c in terms.items():
            if i < orders[0] and j < orders[1]:
                data[i, j] += _as_coeff_array(ring, [c], prec)[0]
        return cls(ring, data, prec)

    @classmethod
    def from_univariate(cls, f: TruncatedSeries1, axis: int, orders):
        data = np.zeros(tuple(orders) + (f.ring.e,), dtype=object)
        n = min(f.t_order, orders[axis - 1])
        if axis == 1:
            data[:n, 0] = f.data[:n]
        else:
            data[0, :n] = f.data[:n]
        return cls(f.ring, data, f.prec)

    def constant(self, c):
        return TruncatedSeries2.from_dict_terms(self.ring, {(0, 0): c}, self.shape, self.prec)

    @property
    def orders(self):
        return self.shape

    def coefficient_series(self, axis: int, k: int) -> TruncatedSeries1:
        """a_k(T_axis): the coefficient of T_other^k as a series in T_axis."""
        data = self.data[:, k] if axis == 1 else self.data[k, :]
        return TruncatedSeries1(self.ring, data, self.prec)

    def coefficient_list(self, axis: int) -> list:
        n = self.shape[2 - axis]
        return [self.coefficient_series(axis, k) for k in range(n)]

    @classmethod
    def from_coefficient_list(cls, series: list, axis: int, orders, prec):
        ring = series[0].ring
        data = np.zeros(tuple(orders) + (ring.e,), dtype=object)
        for k, s in enumerate(series[: orders[2 - axis]]):
            n = min(s.t_order, orders[axis - 1])
            if axis == 1:
                data[:n, k] = s.data[:n]
            else:
                data[k, :n] = s.data[:n]
        return cls(ring, data, prec)

    def transpose(self):
        return TruncatedSeries2(self.ring, self.data.transpose(1, 0, 2), self.prec)

    def __repr__(self):
        terms = []
        for i in range(self.shape[0]):
            for j in range(self.shape[1]):
                if any(self.data[i, j]):
                    terms.append(f"{list(self.data[i, j])}*T1^{i}T2^{j}")
        return f"TruncatedSeries2(p={self.ring.p}, m={self.ring.m}, {' + '.join(terms) or '0'}, t={self.shape}, prec={self.prec})"


# -- polynomial helpers over O mod pi^M --------------------------------------


def _pmul(ring, a, b, prec):
    return ring.reduce(polymul(a, b), prec)


def _pdivmod_monic(ring, a, b, prec):
    """Divide a by the monic polynomial b (arrays (deg+1, e)); returns (q, r)."""
    a = ring.reduce(a, prec)
    db = b.shape[0] - 1
    if a.shape[0] <= db:
        return np.zeros((1, ring.e), dtype=object), a
    q = np.zeros((a.shape[0] - db, ring.e), dtype=object)
    lower = b[:db]
    for k in range(a.shape[0] - 1, db - 1, -1):
        c = a[k].copy()
        if not np.any(c):
            continue
        q[k - db] = c
        a[k] = 0
        if db:
            a[k - db : k] = ring.reduce(a[k - db : k] - omul(ring, lower, c), prec)
    return q, a[: max(db, 1)] if db else np.zeros((1, ring.e), dtype=object)


def _trim(arr):
    nz = np.nonzero(np.any(arr != 0, axis=-1))[0]
    return arr[: (int(nz[-1]) + 1 if nz.size else 1)]


def _pad_to(arr, n, e):
    if arr.shape[0] >= n:
        return arr[:n]
    return np.concatenate([arr, np.zeros((n - arr.shape[0], e), dtype=object)])


def _hensel_split(ring: PadicRing, G: np.ndarray, lam: int, prec: int):
    """Factor the polynomial G = W * H mod pi^prec with W monic of degree lam
    and W = T^lam mod pi.  G mod pi must be T^lam times a unit at T = 0.
    """
    e, p = ring.e, ring.p
    G = _trim(ring.reduce(G, prec))
    # residues mod pi: the class of an element is its constant pi-coordinate mod p
    h0 = [int(c) % p for c in G[lam:, 0]]
    inv0 = pow(h0[0], -1, p)
    s = [0] * lam
    # s = h0^{-1} mod T^lam over F_p
    for k in range(lam):
        acc = (1 if k == 0 else 0) - sum(s[i] * h0[k - i] for i in range(k) if k - i < len(h0))
        s[k] = (acc * inv0) % p
    sh = np.convolve(np.array(s, dtype=object), np.array(h0, dtype=object))
    one_minus = [(-c) % p for c in sh]
    one_minus[0] = (one_minus[0] + 1) % p
    t = [c % p for c in one_minus[lam:]] or [0]

    def vec(coeffs):
        arr = np.zeros((max(len(coeffs), 1), e), dtype=object)
        for i, c in enumerate(coeffs):
            arr[i, 0] = c
        return arr

    W = vec([0] * lam + [1])
    H = vec(h0)
    S, Tt = vec(s), vec(t)
    m = 1
    while m < prec:
        m = min(2 * m, prec)
        err = ring.reduce(_pad_to(G, max(G.shape[0], 1), e) - _pad_to(_pmul(ring, W, H, m), G.shape[0], e), m)
        q, r = _pdivmod_monic(ring, _pmul(ring, S, err, m), W, m)
        H = _trim(ring.reduce(_sum(H, _pmul(ring, Tt, err, m), _pmul(ring, q, H, m)), m))
        W = ring.reduce(_sum(W, _pad_to(r, lam + 1, e)), m)
        W[lam] = 0
        W[lam, 0] = 1
        if m >= prec:
            break
        b = _sum(_pmul(ring, S, H, m), _pmul(ring, Tt, W, m))
        b[0, 0] -= 1
        b = ring.reduce(b, m)
        c, d = _pdivmod_monic(ring, _pmul(ring, S, b, m), W, m)
        S = ring.reduce(_sum(S, -_pad_to(d, max(S.shape[0], d.shape[0]), e)), m)
        Tt = ring.reduce(_sum(Tt, -_pmul(ring, Tt, b, m), -_pmul(ring, c, H, m)), m)
    # cofactor by exact monic division, then confirm the split
    H, rem = _pdivmod_monic(ring, G, W, prec)
    if np.any(ring.reduce(rem, prec)):
        raise InsufficientPrecision("Hensel lifting did not converge")
    return W, H


def _sum(*arrs):
    n = max(a.shape[0] for a in arrs)
    e = arrs[0].shape[1]
    out = np.zeros((n, e), dtype=object)
    for a in arrs:
        out[: a.shape[0]] += a
    return out


# -- Weierstrass preparation -------------------------------------------------


@dataclass
class WeierstrassFactorization:
    """g = pi^mu * distinguished * unit (modulo T^t at the series precision).

    ``determined_prec`` is how far the distinguished part is pinned down by the
    truncated input; beyond it the factor depends on unseen higher terms.
    """

    mu: int
    distinguished: TruncatedSeries1
    unit: TruncatedSeries1
    lam: int
    determined_prec: int
    content: object = None

    @property
    def degree(self) -> int:
        return self.lam

    def reconstruct(self) -> TruncatedSeries1:
        prod = self.distinguished * self.unit
        return prod.scale(self.unit.ring.pi(prod.prec) ** self.mu) if self.mu else prod

    def distinguished_coeffs(self) -> list:
        return self.distinguished.coeffs[: self.lam + 1]

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "determined_prec": self.determined_prec,
            "distinguished": self.distinguished.to_dict(),
            "unit": self.unit.to_dict(),
        }


def _scan(g: TruncatedSeries1):
    vals = g.ring.valuations(g.data, g.prec)
    mu = int(vals.min())
    if mu >= g.prec:
        return None, None
    lam = int(np.argmax(vals == mu))
    return mu, lam


def weierstrass_degree(g: TruncatedSeries1):
    """lambda-invariant by valuation scan; INFINITE for a zero series."""
    mu, lam = _scan(g)
    return INFINITE if mu is None else lam


def mu_invariant(g: TruncatedSeries1):
    mu, _ = _scan(g)
    return INFINITE if mu is None else mu


def weierstrass_prepare(g: TruncatedSeries1) -> WeierstrassFactorization:
    ring = g.ring
    mu, lam = _scan(g)
    if mu is None:
        raise InsufficientPrecision("series vanishes at working precision; raise --prec")
    if g.t_order <= lam:
        raise InsufficientTruncation(f"truncation {g.t_order} does not exceed lambda = {lam}; raise --trunc")
    gp = g.div_pi(mu) if mu else g
    prec = gp.prec
    t = g.t_order
    if lam == 0:
        one = TruncatedSeries1.from_coeffs(ring, [1], t, prec)
        return WeierstrassFactorization(mu, one, gp, 0, prec)
    W, H = _hensel_split(ring, gp.data, lam, prec)
    f = TruncatedSeries1(ring, _pad_to(W, t, ring.e), prec)
    u = TruncatedSeries1(ring, _pad_to(H, t, ring.e), prec)
    low = ring.valuations(W[:lam], prec)
    vP = int(low.min())
    det = prec if vP >= prec else min(prec, (t // lam - 1) * vP)
    return WeierstrassFactorization(mu, f, u, lam, det)


def weierstrass_divide(a: TruncatedSeries1, w: TruncatedSeries1, lam: int | None = None):
    """a = q*w + r with w distinguished of degree lam; q truncated at t - lam."""
    ring = a.ring
    if lam is None:
        lam = w.degree()
    wd = w.data[: lam + 1]
    if lam < 0 or list(wd[lam]) != [1] + [0] * (ring.e - 1):
        raise InvalidParameter("divisor must be a monic (distinguished) polynomial")
    prec = min(a.prec, w.prec)
    q, r = _pdivmod_monic(ring, a.data.copy(), wd, prec)
    if lam:
        vP = int(ring.valuations(wd[:lam], prec).min())
        honest = prec if vP >= prec else (a.t_order // lam - 1) * vP
        prec = max(0, min(prec, honest))
    tq = a.t_order - lam
    qs = TruncatedSeries1(ring, _pad_to(q, tq, ring.e), prec)
    rs = TruncatedSeries1(ring, _pad_to(r, max(lam, 1), ring.e), prec)
    return qs, rs


# -- content and the two-variable degree relation ---------------------------


@dataclass
class ContentFactor:
    mu: int
    varpi: TruncatedSeries1
    degree: int
    quotient: TruncatedSeries2
    axis: int

    def __iter__(self):
        return iter((self.mu, self.varpi, self.quotient))


def _poly_gcd_distinguished(ring, a: np.ndarray, b: np.ndarray, prec: int):
    """gcd of two monic distinguished polynomials (arrays), Euclid with re-preparation."""
    e = ring.e
    while True:
        if b.shape[0] - 1 == 0:
            return b, prec
        _, r = _pdivmod_monic(ring, a, b, prec)
        r = _trim(ring.reduce(r, prec))
        if not np.any(r):
            return b, prec
        rs = TruncatedSeries1(ring, _pad_to(r, b.shape[0], e), prec)
        mu, lam = _scan(rs)
        if mu is None:
            return b, prec
        prep = weierstrass_prepare(rs)
        prec = prep.distinguished.prec
        if prec <= 0:
            raise InsufficientTruncation("content gcd lost all precision")
        a, b = b, ring.reduce(prep.distinguished.data[: lam + 1], prec)


def content_factor(F: TruncatedSeries2, axis: int) -> ContentFactor:
    """Split F = pi^mu * varpi(T_axis) * quotient, viewing F as a series in the
    other variable with coefficients a_k(T_axis)."""
    if axis not in (1, 2):
        raise InvalidParameter("axis must be 1 or 2")
    ring = F.ring
    coeffs = F.coefficient_list(axis)
    live = [(k, c) for k, c in enumerate(coeffs) if not c.is_zero()]
    if not live:
        raise InsufficientPrecision("series vanishes at working precision")
    preps = []
    for k, c in live:
        try:
            preps.append(weierstrass_prepare(c))
        except InsufficientPrecision:
            continue
    mu = min(pp.mu for pp in preps)
    # distinguished factors are pinned down only to their determined precision
    dprec = F.prec - mu
    g = None
    for pp in preps:
        dprec = min(dprec, pp.determined_prec)
        d = ring.reduce(pp.distinguished.data[: pp.lam + 1], dprec)
        if g is None:
            g = d
        else:
            g, p2 = _poly_gcd_distinguished(ring, ring.reduce(g, dprec), d, dprec)
            dprec = min(dprec, p2)
        if g.shape[0] == 1:
            break
    deg = g.shape[0] - 1
    t_axis = F.shape[axis - 1]
    varpi = TruncatedSeries1(ring, _pad_to(g, t_axis, ring.e), max(dprec, 0))
    Fq = F.div_pi(mu) if mu else F
    qcoeffs = []
    qprec = Fq.prec
    for c in Fq.coefficient_list(axis):
        if deg:
            q, r = weierstrass_divide(c, varpi, deg)
            if np.any(ring.reduce(r.data, q.prec)):
                raise InsufficientTruncation("content does not divide every coefficient; raise --trunc")
            qprec = min(qprec, q.prec)
            qcoeffs.append(q)
        else:
            qcoeffs.append(c)
    orders = list(F.shape)
    orders[axis - 1] -= deg
    quotient = TruncatedSeries2.from_coefficient_list(qcoeffs, axis, tuple(orders), qprec)
    if quotient.is_zero() or qprec <= 0:
        raise InsufficientTruncation("quotient vanishes at working precision")
    return ContentFactor(mu, varpi, deg, quotient, axis)


def relative_degree(Q: TruncatedSeries2, axis: int):
    """First k with a_k(T_axis)(0) a unit: the degree in the other variable."""
    ring = Q.ring
    const = Q.data[0, :] if axis == 1 else Q.data[:, 0]
    vals = ring.valuations(const, Q.prec)
    hits = np.nonzero(vals == 0)[0]
    return int(hits[0]) if hits.size else INFINITE


@dataclass
class RelationReport:
    r1: object
    r2: object
    deg_varpi1: int
    deg_varpi2: int
    mu1: int
    mu2: int

    @property
    def holds(self) -> bool:
        if is_infinite(self.r1) or is_infinite(self.r2):
            return False
        return self.r1 * self.deg_varpi2 == self.r2 * self.deg_varpi1

    def to_dict(self) -> dict:
        return {
            "r1": str(self.r1) if is_infinite(self.r1) else self.r1,
            "r2": str(self.r2) if is_infinite(self.r2) else self.r2,
            "deg_varpi1": self.deg_varpi1,
            "deg_varpi2": self.deg_varpi2,
            "mu1": self.mu1,
            "mu2": self.mu2,
            "holds": self.holds,
        }


def degree_data(F: TruncatedSeries2, axis: int):
    """(content along T_axis, degree of the quotient in the other variable)."""
    cf = content_factor(F, axis)
    return cf, relative_degree(cf.quotient, axis)


def check_degree_relation(F: TruncatedSeries2) -> RelationReport:
    c1, r2 = degree_data(F, 1)
    c2, r1 = degree_data(F, 2)
    return RelationReport(r1, r2, c1.degree, c2.degree, c1.mu, c2.mu)


def specialize_axis(F: TruncatedSeries2, axis: int, zeta_minus_1: PadicElement) -> TruncatedSeries1:
    """Substitute zeta - 1 for T_axis, giving a series in the other variable."""
    z = zeta_minus_1
    v = z.valuation()
    if not isinstance(v, AtLeast) and v <= 0:
        raise DivergentSubstitution("value must have positive valuation")
    if axis not in (1, 2):
        raise InvalidParameter("axis must be 1 or 2")
    src = F.embed(z.ring) if z.ring != F.ring else F
    ring = z.ring
    data = src.data if axis == 2 else src.data.transpose(1, 0, 2)
    n = data.shape[1]
    vz = v.bound if isinstance(v, AtLeast) else v
    prec = min(src.prec, z.prec, vz * n)
    zp = _powers(z, n)
    e = ring.e
    raw = np.zeros((data.shape[0], 2 * e - 1), dtype=object)
    for a in range(e):
        sl = data[:, :, a]
        if np.any(sl):
            raw[:, a : a + e] += np.dot(sl, zp)
    return TruncatedSeries1(ring, ring.reduce(raw, prec), prec)
