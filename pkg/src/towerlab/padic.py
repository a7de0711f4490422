"""Precision-tracked arithmetic in Z_p and in O = Z_p[zeta_{p^m}].

An element of O is stored in the power basis of the uniformizer
pi = zeta - 1 (pi = p when m = 0) together with an absolute precision N:
the element is known modulo pi^N.  Because the defining polynomial
Phi_{p^m}(x + 1) is Eisenstein, the ideal (pi^N) consists exactly of the
vectors whose i-th coordinate is divisible by p^ceil((N - i)/e), so the
canonical representative reduces each coordinate by its own modulus and the
valuation of a vector is min(e * v_p(c_i) + i).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy.ntheory import isprime, primitive_root

from .errors import InvalidParameter, PrecisionError, RingTooSmall

try:
    from gmpy2 import remove as _gmp_remove
except ImportError:  # pragma: no cover
    _gmp_remove = None


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise InvalidParameter("valuation of 0 is infinite")
    if _gmp_remove is not None:
        return int(_gmp_remove(n, p)[1])
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class AtLeast:
    """Valuation of an element that is zero at its precision."""

    bound: int

    def __str__(self):
        return f"≥ {self.bound}"


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _cyclotomic_shifted(p: int, m: int) -> list[int]:
    """Coefficients (ascending) of Phi_{p^m}(x + 1)."""
    if m == 0:
        return [-p, 1]
    step = p ** (m - 1)
    # Phi_{p^m}(y) = sum_{k<p} y^(k p^(m-1)); expand (x+1)^j by binomials
    deg = step * (p - 1)
    out = [0] * (deg + 1)
    for k in range(p):
        j = k * step
        c = 1
        for i in range(j + 1):
            out[i] += c
            c = c * (j - i) // (i + 1)
    return out


class PadicRing:
    """O = Z_p[x]/(Phi_{p^m}(x+1)); m = 0 gives Z_p itself."""

    def __init__(self, p: int, m: int):
        self.p = p
        self.m = m
        self.modulus = tuple(_cyclotomic_shifted(p, m))
        self.e = len(self.modulus) - 1
        self._low = np.array(self.modulus[: self.e], dtype=object)
        # pi * q(pi) = -modulus[0], with q = (M(x) - M(0)) / x
        self._pi_cofactor = list(self.modulus[1:])
        self._pi_unit = -self.modulus[0]

    def __repr__(self):
        return f"PadicRing(p={self.p}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, PadicRing) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    @property
    def default_prec(self) -> int:
        return 20 * self.e

    # -- array level helpers, shared with the power series module --

    @lru_cache(maxsize=None)
    def moduli(self, prec: int) -> tuple:
        e, p = self.e, self.p
        return tuple(p ** max(0, -(-(prec - i) // e)) for i in range(e))

    def fold(self, arr: np.ndarray) -> np.ndarray:
        """Reduce the last axis (powers of pi) below degree e."""
        e = self.e
        k = arr.shape[-1]
        if k <= e:
            if k == e:
                return arr
            pad = np.zeros(arr.shape[:-1] + (e - k,), dtype=object)
            return np.concatenate([arr, pad], axis=-1)
        arr = arr.copy()
        low = self._low
        for j in range(k - 1, e - 1, -1):
            c = arr[..., j]
            arr[..., j - e : j] -= c[..., None] * low
        return arr[..., :e]

    def reduce(self, arr: np.ndarray, prec: int) -> np.ndarray:
        arr = self.fold(np.asarray(arr, dtype=object))
        mods = np.array(self.moduli(max(prec, 0)), dtype=object)
        return arr % mods

    def valuations(self, arr: np.ndarray, prec: int) -> np.ndarray:
        """Valuation of each element along the last axis; prec marks zero."""
        e, p = self.e, self.p
        flat = arr.reshape(-1, e)
        out = np.full(flat.shape[0], prec, dtype=np.int64)
        for r in range(flat.shape[0]):
            best = prec
            row = flat[r]
            for i in range(e):
                c = row[i]
                if c:
                    v = e * vp(int(c), p) + i
                    if v < best:
                        best = v
            out[r] = best
        return out.reshape(arr.shape[:-1])

    # -- element constructors --

    def element(self, coeffs, prec: int | None = None) -> "PadicElement":
        prec = self.default_prec if prec is None else prec
        arr = self.reduce(np.array(list(coeffs) or [0], dtype=object), prec)
        return PadicElement(self, tuple(int(c) for c in arr), prec)

    def from_int(self, n: int, prec: int | None = None) -> "PadicElement":
        return self.element([n], prec)

    def zero(self, prec=None):
        return self.from_int(0, prec)

    def one(self, prec=None):
        return self.from_int(1, prec)

    def pi(self, prec=None):
        return self.element([0, 1], prec)

    def zeta(self, prec=None):
        if self.m == 0:
            raise InvalidParameter("Z_p has no nontrivial p-power root of unity")
        return self.element([1, 1], prec)


@lru_cache(maxsize=None)
def make_ring(p: int, m: int = 0) -> PadicRing:
    if not isinstance(p, int) or p < 5 or not isprime(p):
        raise InvalidParameter(f"p must be a prime >= 5, got {p!r}")
    if m < 0:
        raise InvalidParameter("extension level must be >= 0")
    return PadicRing(p, m)


@dataclass(frozen=True, eq=False)
class PadicElement:
    ring: PadicRing
    coeffs: tuple
    prec: int

    # -- helpers --

    def _coerce(self, other) -> "PadicElement":
        if isinstance(other, PadicElement):
            if other.ring != self.ring:
                raise InvalidParameter(
                    f"mixed-ring arithmetic {self.ring} vs {other.ring}; embed explicitly"
                )
            return other
        if isinstance(other, int):
            return self.ring.from_int(other, self.prec)
        return NotImplemented

    def _array(self):
        return np.array(self.coeffs, dtype=object)

    # -- arithmetic --

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        return self.ring.element(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], prec
        )

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element([-a for a in self.coeffs], self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        va, vb = self._val_or_prec(), other._val_or_prec()
        prec = min(va + other.prec, vb + self.prec)
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        return self.ring.element(self.ring.fold(np.array(prod, dtype=object)), prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one(self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _val_or_prec(self) -> int:
        v = self.valuation()
        return v.bound if isinstance(v, AtLeast) else v

    def valuation(self):
        v = int(self.ring.valuations(self._array(), self.prec))
        return AtLeast(self.prec) if v >= self.prec else v

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def __eq__(self, other):
        if isinstance(other, (PadicElement, int)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def inverse(self) -> "PadicElement":
        if not self.is_unit():
            raise PrecisionError(f"{self} is not a unit at precision {self.prec}")
        p = self.ring.p
        y = self.ring.from_int(pow(self.coeffs[0] % p, -1, p), self.prec)
        one = self.ring.one(self.prec)
        for _ in range(self.prec.bit_length() + 2):
            y = y * (2 - self * y)
            if self * y == one:
                break
        return self.ring.element(y.coeffs, self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def div_pi(self, k: int = 1) -> "PadicElement":
        """Exact division by pi^k; needs valuation >= k."""
        x = self
        ring = self.ring
        for _ in range(k):
            v = x.valuation()
            if not isinstance(v, AtLeast) and v < 1:
                raise PrecisionError("element not divisible by the uniformizer")
            if x.prec < 1:
                raise PrecisionError("no precision left to divide by pi")
            prod = ring.fold(np.array(_poly_mul(list(x.coeffs), ring._pi_cofactor), dtype=object))
            u = ring._pi_unit
            q = []
            for c in prod:
                if c % u:
                    raise PrecisionError("element not divisible by the uniformizer")
                q.append(c // u)
            x = ring.element(q, x.prec - 1)
        return x

    def with_prec(self, prec: int) -> "PadicElement":
        if prec > self.prec:
            raise PrecisionError("cannot raise precision")
        return self.ring.element(self.coeffs, prec)

    def embed(self, target: PadicRing) -> "PadicElement":
        """Image under O_m -> O_m' (m <= m'), zeta_{p^m} -> zeta_{p^m'}^(p^(m'-m))."""
        src = self.ring
        if target == src:
            return self
        if target.p != src.p or target.m < src.m:
            raise InvalidParameter(f"no embedding {src} -> {target}")
        ratio = target.e // src.e
        prec = self.prec * ratio
        img = _pi_image(src, target, prec)
        acc = target.zero(prec)
        for c in reversed(self.coeffs):
            acc = acc * img + c
        return target.element(acc.coeffs, prec)

    def __repr__(self):
        return f"PadicElement(p={self.ring.p}, m={self.ring.m}, coeffs={list(self.coeffs)}, prec={self.prec})"

    def to_dict(self) -> dict:
        return {"p": self.ring.p, "m": self.ring.m, "coeffs": list(self.coeffs), "prec": self.prec}

    @classmethod
    def from_dict(cls, d: dict) -> "PadicElement":
        return make_ring(d["p"], d["m"]).element(d["coeffs"], d["prec"])


def _pi_image(src: PadicRing, target: PadicRing, prec: int) -> PadicElement:
    if src.m == 0:
        return target.from_int(src.p, prec)
    return target.zeta(prec) ** (src.p ** (target.m - src.m)) - 1


def valuation(x: PadicElement):
    return x.valuation()


@lru_cache(maxsize=None)
def _teichmuller_int(p: int, k: int, digits: int) -> int:
    mod = p**digits
    x = k % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


def teichmuller(ring: PadicRing, k: int, prec: int | None = None) -> PadicElement:
    """Teichmüller lift of k: the (p-1)-th root of unity congruent to k mod p."""
    if k % ring.p == 0:
        raise InvalidParameter(f"{k} is divisible by p = {ring.p}")
    prec = ring.default_prec if prec is None else prec
    digits = -(-prec // ring.e)
    return ring.from_int(_teichmuller_int(ring.p, k, digits), prec)


def root_of_unity(ring: PadicRing, label: Fraction, prec: int | None = None) -> PadicElement:
    """exp(2 pi i * label) realized in O.

    The order of the label must be d * p^a with d | p - 1 and a <= m.
    """
    label = Fraction(label) % 1
    n = label.denominator
    p = ring.p
    a = 0
    d = n
    while d % p == 0:
        d //= p
        a += 1
    if (p - 1) % d:
        raise RingTooSmall(f"order-{d} roots of unity are not in Z_{p}[zeta_(p^m)]")
    if a > ring.m:
        raise RingTooSmall(f"need level m >= {a}, ring has m = {ring.m}")
    prec = ring.default_prec if prec is None else prec
    # split label = u/d + v/p^a
    k = label.numerator
    pa = p**a
    u = (k * pow(pa, -1, d)) % d if d > 1 else 0
    v = (k * pow(d, -1, pa)) % pa if pa > 1 else 0
    val = ring.one(prec)
    if d > 1:
        g = primitive_root(p)
        val = val * teichmuller(ring, g, prec) ** (u * (p - 1) // d)
    if pa > 1:
        val = val * ring.zeta(prec) ** (v * p ** (ring.m - a))
    return val


teichmuller_and_units = teichmuller
