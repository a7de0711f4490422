"""Measures on G0 x Z_p^2 at finite level, i.e. elements of the group ring
O[G0 x Z/p^a x Z/p^b], with integration against finite-order characters.

A measure table is an integer array of shape torsion + (p^a, p^b, e); the
trailing axis holds the coordinates of an element of O.  ``shift`` records a
denominator pi^shift, which is needed when a measure is synthesized from
arbitrary character values by Fourier inversion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from ._kernel import polymul
from .characters import HeckeCharacter, decompose
from .errors import (
    InsufficientLevel,
    InsufficientTruncation,
    InvalidInput,
    InvalidParameter,
    OutOfDomain,
    PrecisionError,
    RingTooSmall,
)
from .padic import PadicElement, PadicRing, make_ring, root_of_unity
from .series import TruncatedSeries2, omul

# gamma2 acts through 1 + p under the cyclotomic character
GAMMA2_UNIT = "1+p"
# gamma1 is represented by the principal ideal class of 1 + p*omega
GAMMA1_ELEMENT = "1+p*omega"


@dataclass(frozen=True)
class GaloisGroupSpec:
    p: int
    torsion: tuple = ()

    def __post_init__(self):
        if any(int(n) < 1 for n in self.torsion):
            raise InvalidParameter("torsion invariant factors must be positive")
        object.__setattr__(self, "torsion", tuple(int(n) for n in self.torsion if int(n) > 1))

    @property
    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    def torsion_elements(self):
        return list(itertools.product(*(range(n) for n in self.torsion)))

    def torsion_characters(self):
        """Characters of G0 as tuples of labels on its cyclic generators."""
        return [tuple(Fraction(t, n) for t, n in zip(ts, self.torsion)) for ts in self.torsion_elements()]

    def to_dict(self):
        return {"p": self.p, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class GroupCharacter:
    """Character of G0 x G: labels on torsion generators, gamma1 and gamma2."""

    spec: GaloisGroupSpec
    torsion: tuple
    gamma1: Fraction
    gamma2: Fraction

    def __post_init__(self):
        if len(self.torsion) != len(self.spec.torsion):
            raise InvalidParameter("torsion labels do not match the group")
        object.__setattr__(self, "torsion", tuple(Fraction(x) % 1 for x in self.torsion))
        object.__setattr__(self, "gamma1", Fraction(self.gamma1) % 1)
        object.__setattr__(self, "gamma2", Fraction(self.gamma2) % 1)
        p = self.spec.p
        for x in (self.gamma1, self.gamma2):
            d = x.denominator
            while d % p == 0:
                d //= p
            if d != 1:
                raise InvalidParameter("gamma-values must have p-power order")

    @property
    def level(self) -> tuple:
        return tuple(_pexp(x.denominator, self.spec.p) for x in (self.gamma1, self.gamma2))

    def label(self, g0, i: int, j: int) -> Fraction:
        t = sum((a * x for a, x in zip(g0, self.torsion)), Fraction(0))
        return (t + i * self.gamma1 + j * self.gamma2) % 1

    @property
    def tame(self) -> tuple:
        return self.torsion


def _pexp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def trivial_character(spec: GaloisGroupSpec) -> GroupCharacter:
    return GroupCharacter(spec, (0,) * len(spec.torsion), 0, 0)


def characters_at_level(spec: GaloisGroupSpec, level: tuple, tame=None) -> list:
    a, b = level
    p = spec.p
    tames = spec.torsion_characters() if tame is None else [tuple(tame)]
    return [
        GroupCharacter(spec, t, Fraction(i, p**a), Fraction(j, p**b))
        for t in tames
        for i in range(p**a)
        for j in range(p**b)
    ]


def group_character_of(W: HeckeCharacter, spec: GaloisGroupSpec | None = None) -> GroupCharacter:
    """Read a Hecke character of p-power order as a character of G.

    gamma2 is evaluated as chi_w(1 + p); gamma1 as the wild ring class part on
    the class of 1 + p*omega.  Only characters with trivial tame part are
    accepted, since G0 is abstract here.
    """
    from .characters import _principal_class

    p = W.p
    spec = spec or GaloisGroupSpec(p)
    if spec.torsion:
        raise InvalidParameter("Hecke characters map only to groups with trivial torsion here")
    dec = decompose(W)
    if not dec.tame.is_trivial():
        raise InvalidParameter("character has a nontrivial tame part")
    Ww = dec.wild
    l2 = Ww.chi.label(1 + p) if Ww.chi.n else Fraction(0)
    if Ww.rho.k:
        A = _principal_class(W.D, p**Ww.rho.k, (1, p))
        l1 = Ww.rho.label(A)
    else:
        l1 = Fraction(0)
    return GroupCharacter(spec, (), l1, l2)


class GroupMeasure:
    def __init__(self, spec: GaloisGroupSpec, level: tuple, ring: PadicRing, data: np.ndarray, prec: int, shift: int = 0):
        a, b = level
        p = spec.p
        shape = spec.torsion + (p**a, p**b, ring.e)
        if tuple(data.shape) != shape:
            raise InvalidParameter(f"table shape {data.shape} does not match {shape}")
        if ring.p != p:
            raise InvalidParameter("ring and group disagree on p")
        self.spec = spec
        self.level = (int(a), int(b))
        self.ring = ring
        self.prec = int(prec)
        self.shift = int(shift)
        self.data = ring.reduce(data, self.prec)

    # -- constructors --
    @classmethod
    def zero(cls, spec, level, ring, prec=None):
        prec = ring.default_prec if prec is None else prec
        a, b = level
        shape = spec.torsion + (spec.p**a, spec.p**b, ring.e)
        return cls(spec, level, ring, np.zeros(shape, dtype=object), prec)

    @classmethod
    def from_values(cls, spec, level, ring, values: dict, prec=None):
        """values: {(g0, i, j): int | PadicElement}."""
        m = cls.zero(spec, level, ring, prec)
        data = m.data.copy()
        for (g0, i, j), v in values.items():
            idx = tuple(g0) + (i % spec.p ** level[0], j % spec.p ** level[1])
            if isinstance(v, PadicElement):
                data[idx] = data[idx] + np.array(v.embed(ring).coeffs, dtype=object)
            else:
                data[idx][0] = data[idx][0] + int(v)
        return cls(spec, level, ring, data, m.prec)

    def _like(self, data, prec=None, level=None, shift=None):
        return GroupMeasure(
            self.spec,
            self.level if level is None else level,
            self.ring,
            data,
            self.prec if prec is None else prec,
            self.shift if shift is None else shift,
        )

    def entry(self, g0, i, j) -> PadicElement:
        idx = tuple(g0) + (i, j)
        return PadicElement(self.ring, tuple(int(x) for x in self.data[idx]), self.prec)

    def entries(self):
        p = self.spec.p
        a, b = self.level
        for g0 in self.spec.torsion_elements():
            for i in range(p**a):
                for j in range(p**b):
                    yield (g0, i, j), self.entry(g0, i, j)

    # -- algebra --
    def _check(self, other):
        if self.spec != other.spec or self.ring != other.ring:
            raise InvalidParameter("measures live on different groups or rings")

    def raise_level(self, level):
        """Pullback is not defined; measures only push forward.  This raises
        the resolution of a measure that is a finite combination of Diracs
        at the coarser level by placing mass at the canonical lifts."""
        a, b = level
        a0, b0 = self.level
        if a < a0 or b < b0:
            raise InvalidParameter("use pushforward to lower the level")
        if (a, b) == (a0, b0):
            return self
        p = self.spec.p
        shape = self.spec.torsion + (p**a, p**b, self.ring.e)
        out = np.zeros(shape, dtype=object)
        out[..., : p**a0, : p**b0, :] = self.data
        return self._like(out, level=(a, b))

    def pushforward(self, level) -> "GroupMeasure":
        a, b = level
        a0, b0 = self.level
        if a > a0 or b > b0:
            raise InsufficientLevel("cannot push forward to a finer level")
        p = self.spec.p
        nt = len(self.spec.torsion)
        d = self.data
        d = d.reshape(d.shape[:nt] + (p ** (a0 - a), p**a) + d.shape[nt + 1 :]).sum(axis=nt)
        d = d.reshape(d.shape[: nt + 1] + (p ** (b0 - b), p**b, self.ring.e)).sum(axis=nt + 1)
        return self._like(d, level=(a, b))

    def __add__(self, other):
        self._check(other)
        if self.level != other.level or self.shift != other.shift:
            raise InvalidParameter("levels and denominators must agree for addition")
        return self._like(self.data + other.data, prec=min(self.prec, other.prec))

    def __neg__(self):
        return self._like(-self.data)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GroupMeasure":
        if isinstance(c, int):
            return self._like(self.data * c)
        c = c.embed(self.ring) if c.ring != self.ring else c
        prod = omul(self.ring, self.data, np.array(c.coeffs, dtype=object))
        vc = c._val_or_prec()
        prec = min(self.prec + vc, self.min_valuation() + c.prec)
        return self._like(prod, prec=prec)

    def min_valuation(self) -> int:
        v = self.ring.valuations(self.data, self.prec)
        return int(v.min()) if v.size else self.prec

    def __eq__(self, other):
        if not isinstance(other, GroupMeasure):
            return NotImplemented
        if self.spec != other.spec or self.ring != other.ring or self.level != other.level:
            return False
        if self.shift != other.shift:
            s = max(self.shift, other.shift)
            a, b = self._with_shift(s), other._with_shift(s)
            return a == b
        prec = min(self.prec, other.prec)
        return not np.any(self.ring.reduce(self.data - other.data, prec))

    def _with_shift(self, s):
        k = s - self.shift
        if k == 0:
            return self
        pik = self.ring.pi(self.prec + k) ** k
        return self._like(omul(self.ring, self.data, np.array(pik.coeffs, dtype=object)), prec=self.prec + k, shift=s)

    def convolve(self, other: "GroupMeasure") -> "GroupMeasure":
        self._check(other)
        level = (max(self.level[0], other.level[0]), max(self.level[1], other.level[1]))
        A, B = self.raise_level(level), other.raise_level(level)
        ring = self.ring
        nt = len(self.spec.torsion)
        # polynomial product in every group axis plus the ring axis, then fold
        # group axes cyclically and the ring axis modulo the Eisenstein polynomial
        prod = polymul(A.data, B.data)
        for ax in range(nt + 2):
            n = A.data.shape[ax]
            prod = _fold_axis(prod, ax, n)
        out = ring.fold(prod)
        va, vb = A.min_valuation(), B.min_valuation()
        prec = min(va + B.prec, vb + A.prec)
        return GroupMeasure(self.spec, level, ring, out, prec, A.shift + B.shift)

    __mul__ = convolve

    # -- integration --
    def specialize(self, W) -> PadicElement:
        """The finite sum of table entries weighted by W."""
        chi = _as_group_character(W, self.spec)
        la, lb = chi.level
        if la > self.level[0] or lb > self.level[1]:
            raise InsufficientLevel(f"character level {chi.level} exceeds measure level {self.level}")
        ring = self.ring
        if max(la, lb) > ring.m:
            raise RingTooSmall(f"character needs ring level {max(la, lb)}, ring has m = {ring.m}")
        p = self.spec.p
        a, b = self.level
        buckets: dict = {}
        for g0 in self.spec.torsion_elements():
            block = self.data[tuple(g0)]
            for i in range(p**a):
                for j in range(p**b):
                    row = block[i, j]
                    if not any(row):
                        continue
                    lab = chi.label(g0, i, j)
                    if lab in buckets:
                        buckets[lab] = buckets[lab] + row
                    else:
                        buckets[lab] = row.copy()
        prec = self.prec
        total = ring.zero(prec)
        for lab, row in buckets.items():
            z = root_of_unity(ring, lab, prec)
            total = total + PadicElement(ring, tuple(int(x) for x in ring.reduce(row, prec)), prec) * z
        if self.shift:
            try:
                return total.div_pi(self.shift)
            except PrecisionError as exc:
                raise OutOfDomain("specialization is not integral") from exc
        return total

    # -- conversions --
    def tame_decompose(self) -> dict:
        """{W0 labels: measure on G} with L(W0)[i, j] = sum_g0 W0(g0) L[g0, i, j]."""
        spec0 = GaloisGroupSpec(self.spec.p)
        ring = self.ring
        out = {}
        elems = self.spec.torsion_elements()
        for t in self.spec.torsion_characters():
            acc = np.zeros((self.data.shape[-3], self.data.shape[-2], ring.e), dtype=object)
            for g0 in elems:
                lab = sum((x * y for x, y in zip(g0, t)), Fraction(0)) % 1
                z = root_of_unity(ring, lab, self.prec)
                acc = acc + omul(ring, self.data[tuple(g0)], np.array(z.coeffs, dtype=object))
            out[t] = GroupMeasure(spec0, self.level, ring, ring.fold(acc), self.prec, self.shift)
        return out

    def to_power_series(self, orders=None) -> TruncatedSeries2:
        """gamma1^i gamma2^j -> (1+T1)^i (1+T2)^j, summed with the table weights."""
        if self.spec.torsion:
            raise InvalidParameter("decompose the torsion first")
        if self.shift:
            raise OutOfDomain("measure has a denominator")
        p = self.spec.p
        a, b = self.level
        orders = orders or (p**a, p**b)
        if orders[0] < p**a or orders[1] < p**b:
            raise InsufficientTruncation(f"truncation {orders} is below the level size {(p**a, p**b)}")
        B1, B2 = _binom_matrix(p**a, orders[0]), _binom_matrix(p**b, orders[1])
        d = self.data
        # contract: out[k, l] = sum_ij B1[i, k] B2[j, l] d[i, j]
        out = np.einsum("ik,ijx->kjx", B1, d)
        out = np.einsum("jl,kjx->klx", B2, out)
        return TruncatedSeries2(self.ring, self.ring.reduce(out, self.prec), self.prec)

    def to_dict(self) -> dict:
        return {
            "group": {"p": self.spec.p, "torsion": list(self.spec.torsion), "level": list(self.level)},
            "ring_level": self.ring.m,
            "prec": self.prec,
            "shift": self.shift,
            "entries": [
                {"g0": list(g0), "i": i, "j": j, "value": [int(x) for x in v.coeffs]}
                for (g0, i, j), v in self.entries()
                if not v.is_zero()
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroupMeasure":
        try:
            g = d["group"]
            spec = GaloisGroupSpec(int(g["p"]), tuple(g.get("torsion", ())))
            level = tuple(int(x) for x in g["level"])
            ring = make_ring(spec.p, int(d.get("ring_level", 0)))
            prec = int(d.get("prec", ring.default_prec))
            m = cls.zero(spec, level, ring, prec)
            data = m.data.copy()
            for ent in d["entries"]:
                idx = tuple(ent["g0"]) + (int(ent["i"]), int(ent["j"]))
                v = ent["value"]
                v = [v] if isinstance(v, int) else v
                row = np.zeros(ring.e, dtype=object)
                row[: len(v)] = [int(x) for x in v]
                data[idx] = data[idx] + ring.fold(row)
            return cls(spec, level, ring, data, prec, int(d.get("shift", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed measure: {exc}") from exc

    def __repr__(self):
        return f"GroupMeasure(level={self.level}, torsion={self.spec.torsion}, prec={self.prec})"


def _fold_axis(arr: np.ndarray, ax: int, n: int) -> np.ndarray:
    L = arr.shape[ax]
    if L <= n:
        return arr
    pad = (-L) % n
    if pad:
        widths = [(0, 0)] * arr.ndim
        widths[ax] = (0, pad)
        arr = np.pad(arr, widths, constant_values=0)
    shape = arr.shape[:ax] + (arr.shape[ax] // n, n) + arr.shape[ax + 1 :]
    return arr.reshape(shape).sum(axis=ax)


def _binom_matrix(n: int, t: int) -> np.ndarray:
    """B[i, k] = C(i, k): (1+T)^i = sum_k B[i, k] T^k."""
    return np.array([[comb(i, k) for k in range(t)] for i in range(n)], dtype=object)


def _as_group_character(W, spec) -> GroupCharacter:
    if isinstance(W, GroupCharacter):
        if W.spec != spec:
            raise InvalidParameter("character belongs to a different group")
        return W
    if isinstance(W, HeckeCharacter):
        return group_character_of(W, spec)
    raise InvalidParameter(f"cannot read {type(W).__name__} as a character")


def dirac(spec: GaloisGroupSpec, g0=(), i: int = 0, j: int = 0, level=(0, 0), ring=None, prec=None) -> GroupMeasure:
    ring = ring or make_ring(spec.p, max(level))
    g0 = tuple(g0) or (0,) * len(spec.torsion)
    return GroupMeasure.from_values(spec, level, ring, {(g0, i, j): 1}, prec)


def convolve(m1: GroupMeasure, m2: GroupMeasure) -> GroupMeasure:
    return m1.convolve(m2)


def specialize(m: GroupMeasure, W) -> PadicElement:
    return m.specialize(W)


def tame_decompose(L: GroupMeasure) -> dict:
    return L.tame_decompose()


def tame_reassemble(components: dict, spec: GaloisGroupSpec) -> GroupMeasure:
    """Inverse of tame_decompose when |G0| is prime to p."""
    n = spec.torsion_order
    if n % spec.p == 0:
        raise InvalidParameter("Fourier inversion on G0 needs |G0| prime to p")
    first = next(iter(components.values()))
    ring, level, prec = first.ring, first.level, min(c.prec for c in components.values())
    shape = spec.torsion + first.data.shape
    out = np.zeros(shape, dtype=object)
    inv_n = ring.from_int(n, prec).inverse()
    for g0 in spec.torsion_elements():
        acc = np.zeros(first.data.shape, dtype=object)
        for t, comp in components.items():
            lab = -sum((x * y for x, y in zip(g0, t)), Fraction(0)) % 1
            z = root_of_unity(ring, lab, prec) * inv_n
            acc = acc + omul(ring, comp.data, np.array(z.coeffs, dtype=object))
        out[tuple(g0)] = ring.fold(acc)
    return GroupMeasure(spec, level, ring, out, prec, first.shift)


def to_power_series(m: GroupMeasure, orders=None) -> TruncatedSeries2:
    return m.to_power_series(orders)


def from_power_series(S: TruncatedSeries2, level: tuple, spec: GaloisGroupSpec | None = None) -> GroupMeasure:
    """Inverse of to_power_series modulo ((1+T1)^{p^a} - 1, (1+T2)^{p^b} - 1).

    S must be a polynomial (no truncation tail), i.e. its truncation orders
    bound its true degree.
    """
    ring = S.ring
    p = ring.p
    spec = spec or GaloisGroupSpec(p)
    t1, t2 = S.orders
    # T^k = sum_i C(k, i) (-1)^{k-i} X^i with X = 1 + T
    inv1 = np.array([[comb(k, i) * (-1) ** ((k - i) % 2) for i in range(t1)] for k in range(t1)], dtype=object)
    inv2 = np.array([[comb(k, i) * (-1) ** ((k - i) % 2) for i in range(t2)] for k in range(t2)], dtype=object)
    d = np.einsum("ki,klx->ilx", inv1, S.data)
    d = np.einsum("lj,ilx->ijx", inv2, d)
    d = _fold_axis(d, 0, p ** level[0])
    d = _fold_axis(d, 1, p ** level[1])
    a, b = level
    if d.shape[0] < p**a or d.shape[1] < p**b:
        full = np.zeros((p**a, p**b, ring.e), dtype=object)
        full[: d.shape[0], : d.shape[1]] = d
        d = full
    return GroupMeasure(spec, level, ring, ring.reduce(d, S.prec), S.prec)


def synthesize_interpolating_measure(targets, spec: GaloisGroupSpec | None = None, ring: PadicRing | None = None, prec=None) -> GroupMeasure:
    """Measure whose specializations are the given values (finite Fourier inversion).

    ``targets`` is a list of (GroupCharacter, PadicElement).  The characters
    must be distinct, share a level, and exhaust the characters at that level
    whose tame part occurs; characters that are not listed get value 0.
    """
    if not targets:
        raise InvalidParameter("no targets")
    chars = [c for c, _ in targets]
    spec = spec or chars[0].spec
    levels = {c.level for c in chars}
    level = tuple(max(l[k] for l in levels) for k in range(2))
    seen = {}
    for c, v in targets:
        key = (c.torsion, c.gamma1, c.gamma2)
        if key in seen and not (seen[key] == v):
            raise InvalidParameter("inconsistent values for a repeated character")
        seen[key] = v
    if ring is None:
        ring = targets[0][1].ring
        if ring.m < max(level):
            raise RingTooSmall(f"ring level {ring.m} below character level {max(level)}")
    prec = min([v.prec for _, v in targets] + ([prec] if prec else []))
    p = spec.p
    a, b = level
    order = spec.torsion_order * p ** (a + b)
    vo = _pexp(order, p)
    unit = order // p**vo
    # p = pi^e * u_p with u_p a unit, so 1/order = pi^(-e*vo) / (unit * u_p^vo)
    u_p = ring.from_int(p, prec + ring.e).div_pi(ring.e)
    inv_unit = (ring.from_int(unit, prec) * u_p**vo).inverse()
    shape = spec.torsion + (p**a, p**b, ring.e)
    data = np.zeros(shape, dtype=object)
    vals = [(GroupCharacter(spec, k[0], k[1], k[2]), v.embed(ring) if v.ring != ring else v) for k, v in seen.items()]
    for g0 in spec.torsion_elements():
        for i in range(p**a):
            for j in range(p**b):
                acc = ring.zero(prec)
                for c, v in vals:
                    acc = acc + v * root_of_unity(ring, -c.label(g0, i, j), prec)
                data[tuple(g0) + (i, j)] = np.array((acc * inv_unit).coeffs, dtype=object)
    shift = vo * ring.e
    m = GroupMeasure(spec, level, ring, data, prec, shift)
    return _normalize_shift(m)


def _normalize_shift(m: GroupMeasure) -> GroupMeasure:
    """Divide out common powers of pi from the table against the denominator."""
    if m.shift == 0:
        return m
    v = m.min_valuation()
    k = min(v, m.shift)
    if k <= 0:
        return m
    from .series import div_pi_array

    data = div_pi_array(m.ring, m.data, m.prec, k)
    return GroupMeasure(m.spec, m.level, m.ring, data, m.prec - k, m.shift - k)
