"""Imaginary quadratic fields, orders Z + cO_K and their class groups as
reduced primitive binary quadratic forms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from sympy import factorint
from sympy import kronecker_symbol

from .errors import InvalidParameter, OutOfDomain

Form = tuple  # (a, b, c) with b^2 - 4ac = disc


def is_fundamental(D: int) -> bool:
    if D >= 0:
        return False
    if D % 4 == 1:
        return all(e == 1 for e in factorint(-D).values())
    if D % 4 == 0:
        m = D // 4
        if m % 4 not in (2, 3):
            return False
        return all(e == 1 for e in factorint(-m).values())
    return False


@dataclass(frozen=True)
class QuadField:
    D: int

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise InvalidParameter(f"{self.D} is not a negative fundamental discriminant")

    @property
    def w(self) -> int:
        return {-3: 6, -4: 4}.get(self.D, 2)

    @property
    def omega(self) -> tuple:
        """O_K = Z + Z*omega; omega = (D + sqrt(D))/2 written as (D/2, 1/2)."""
        return (self.D, 1)  # numerator pair over 2

    def kronecker(self, n: int) -> int:
        return kronecker_omega(self.D, n)

    def class_group(self, c: int = 1) -> "OrderClassGroup":
        return class_group(self.D, c)


def kronecker_omega(D: int, n: int) -> int:
    """omega(n) = (D | n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    sign = 1
    if n < 0:
        n = -n
        sign = -1 if D < 0 else 1
    return sign * int(kronecker_symbol(D, n))


def omega_table(D: int, nmax: int) -> np.ndarray:
    """omega(n) for 0 <= n <= nmax, built multiplicatively from primes."""
    out = np.ones(nmax + 1, dtype=np.int64)
    out[0] = 0
    sieve = np.ones(nmax + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(nmax**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    for q in np.nonzero(sieve)[0]:
        q = int(q)
        v = int(kronecker_symbol(D, q))
        qk = q
        while qk <= nmax:
            # multiply once per power of q dividing n
            out[qk::qk] *= v
            qk *= q
    return out


# -- forms --------------------------------------------------------------------


def _check_disc(disc: int):
    if disc >= 0:
        raise InvalidParameter(f"discriminant {disc} must be negative")
    if disc % 4 not in (0, 1):
        raise InvalidParameter(f"{disc} is not a discriminant (must be 0 or 1 mod 4)")


def reduce_form(f: Form) -> Form:
    a, b, c = f
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise InvalidParameter(f"{f} is not positive definite")
    while True:
        if b > a or b <= -a:
            # translate b into (-a, a]
            k = (a - b) // (2 * a)
            b2 = b + 2 * k * a
            c = (b2 * b2 - (b * b - 4 * a * c)) // (4 * a)
            b = b2
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return (a, b, c)


def reduced_forms(disc: int) -> list:
    """One reduced primitive form per class of discriminant disc."""
    _check_disc(disc)
    out = []
    amax = math.isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return out


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def compose_forms(f1: Form, f2: Form) -> Form:
    """Dirichlet composition followed by reduction."""
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    disc = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != disc:
        raise InvalidParameter("forms have different discriminants")
    s = (b1 + b2) // 2
    g1, x, y = _xgcd(a1, a2)
    g, u, z = _xgcd(g1, s)
    # g = u*(x a1 + y a2) + z s
    alpha, beta, gamma = u * x, u * y, z
    B = (alpha * a1 * b2 + beta * a2 * b1 + gamma * (b1 * b2 + disc) // 2) // g
    A = a1 * a2 // (g * g)
    B %= 2 * A
    C = (B * B - disc) // (4 * A)
    return reduce_form((A, B, C))


def form_value(f: Form, x, y):
    a, b, c = f
    return a * x * x + b * x * y + c * y * y


# -- class groups -------------------------------------------------------------


@dataclass
class OrderClassGroup:
    """Pic(O_c) for O_c = Z + c O_K."""

    D: int
    c: int
    forms: list
    table: np.ndarray = field(repr=False)

    @property
    def disc(self) -> int:
        return self.c * self.c * self.D

    @property
    def h(self) -> int:
        return len(self.forms)

    @property
    def w(self) -> int:
        return QuadField(self.D).w if self.c == 1 else 2

    def index(self, f: Form) -> int:
        return self._index[reduce_form(f)]

    def __post_init__(self):
        self._index = {f: i for i, f in enumerate(self.forms)}

    @property
    def identity(self) -> int:
        return 0

    def compose(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def inverse(self, i: int) -> int:
        a, b, c = self.forms[i]
        return self.index((a, -b, c))

    def power(self, i: int, k: int) -> int:
        k %= self.h * 1 or 1
        out, base = 0, i
        while k:
            if k & 1:
                out = self.compose(out, base)
            base = self.compose(base, base)
            k >>= 1
        return out

    def element_order(self, i: int) -> int:
        k, cur = 1, i
        while cur != 0:
            cur = self.compose(cur, i)
            k += 1
        return k

    def representation_counts(self, nmax: int) -> np.ndarray:
        """reps[A, n] = #{(x, y) in Z^2 : Q_A(x, y) = n} for 0 <= n <= nmax."""
        return representation_table(self.disc, tuple(self.forms), nmax)

    def ideal_counts(self, nmax: int) -> np.ndarray:
        """r_A(n) for all classes; entries with gcd(n, c) > 1 are zeroed."""
        r = self.representation_counts(nmax) // self.w
        r[:, 0] = 0
        if self.c > 1:
            bad = np.gcd(np.arange(nmax + 1), self.c) > 1
            r[:, bad] = 0
        return r

    def ideal_count(self, A: int, n: int) -> int:
        if n < 1:
            raise InvalidParameter("n must be positive")
        if math.gcd(n, self.c) != 1:
            raise OutOfDomain(f"gcd({n}, {self.c}) > 1")
        f = self.forms[A]
        return _count_reps(f, n) // self.w

    def to_dict(self) -> dict:
        return {"D": self.D, "c": self.c, "h": self.h, "forms": [list(f) for f in self.forms]}


def _count_reps(f: Form, n: int) -> int:
    a, b, c = f
    disc = b * b - 4 * a * c
    ymax = math.isqrt(4 * a * n // -disc) + 1
    count = 0
    for y in range(-ymax, ymax + 1):
        # a x^2 + b y x + (c y^2 - n) = 0
        rad = b * b * y * y - 4 * a * (c * y * y - n)
        if rad < 0:
            continue
        r = math.isqrt(rad)
        if r * r != rad:
            continue
        for sgn in ((1, -1) if r else (1,)):
            num = -b * y + sgn * r
            if num % (2 * a) == 0:
                count += 1
    return count


@lru_cache(maxsize=32)
def representation_table(disc: int, forms: tuple, nmax: int) -> np.ndarray:
    out = np.zeros((len(forms), nmax + 1), dtype=np.int64)
    for k, (a, b, c) in enumerate(forms):
        # 4a Q = (2ax + by)^2 + |disc| y^2
        ymax = math.isqrt(4 * a * nmax // -disc) + 1
        for y in range(-ymax, ymax + 1):
            rest = 4 * a * nmax + disc * y * y
            if rest < 0:
                continue
            r = math.isqrt(rest)
            lo = (-r - b * y) // (2 * a) - 1
            hi = (r - b * y) // (2 * a) + 1
            x = np.arange(lo, hi + 1, dtype=np.int64)
            vals = a * x * x + b * x * y + c * y * y
            vals = vals[(vals >= 0) & (vals <= nmax)]
            out[k] += np.bincount(vals, minlength=nmax + 1)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def class_group(D: int, c: int = 1) -> OrderClassGroup:
    QuadField(D)
    if c < 1:
        raise InvalidParameter("conductor must be >= 1")
    disc = c * c * D
    forms = reduced_forms(disc)
    # principal form first
    forms.sort(key=lambda f: (f[0], abs(f[1]), -f[1]))
    h = len(forms)
    index = {f: i for i, f in enumerate(forms)}
    table = np.zeros((h, h), dtype=np.int64)
    for i in range(h):
        for j in range(i, h):
            k = index[compose_forms(forms[i], forms[j])]
            table[i, j] = table[j, i] = k
    return OrderClassGroup(D, c, forms, table)


def class_number_formula(D: int, c: int) -> int:
    """h(O_c) = h(O_K) c prod_{l | c} (1 - omega(l)/l) / [O_K^x : O_c^x]."""
    h = len(reduced_forms(D))
    if c == 1:
        return h
    num, den = h * c, 1
    for ell in factorint(c):
        num *= ell - kronecker_omega(D, ell)
        den *= ell
    w = QuadField(D).w
    return num // den // (w // 2)


def project_class(G_from: OrderClassGroup, A: int, G_to: OrderClassGroup) -> int:
    """Image of a class under Pic(O_f') -> Pic(O_f) for f | f' (I -> I O_f)."""
    if G_from.D != G_to.D or G_from.c % G_to.c:
        raise InvalidParameter("projection needs the same field and f | f'")
    if G_from.c == G_to.c:
        return A
    g = G_from.c // G_to.c
    if g % 2 == 0:
        raise InvalidParameter("projection implemented for odd conductor ratios")
    a, b, _ = _coprime_representative(G_from.forms[A], 2 * G_from.c)
    # [a, (-b + g f sqrt D)/2] O_f = [a, (-B + f sqrt D)/2] with g B = b mod 2a
    B = (b * pow(g, -1, 2 * a)) % (2 * a) if a > 1 else G_to.disc % 2
    disc = G_to.disc
    return G_to.index((a, B, (B * B - disc) // (4 * a)))


def _coprime_representative(f: Form, m: int) -> Form:
    """An equivalent form whose first coefficient is prime to m."""
    a, b, c = f
    bound = 1
    while True:
        for x in range(0, bound + 1):
            for y in range(-bound, bound + 1):
                if math.gcd(x, y) != 1:
                    continue
                n = form_value(f, x, y)
                if math.gcd(n, m) != 1:
                    continue
                _, s, r0 = _xgcd(x, y)
                r = -r0  # x s - y r = 1
                B = 2 * a * x * r + b * (x * s + y * r) + 2 * c * y * s
                return (n, B, form_value(f, r, s))
        bound *= 2
        if bound > 1 << 12:  # pragma: no cover
            raise InvalidParameter("no representative prime to the conductor")


def ideal_to_form(D: int, c: int, basis) -> Form:
    """Form attached to a lattice with Z-basis (beta1, beta2) inside O_c.

    Elements are pairs (u, v) meaning u + v*omega with omega = (D + sqrt D)/2.
    """
    (u1, v1), (u2, v2) = basis
    det = u1 * v2 - u2 * v1
    if det == 0:
        raise InvalidParameter("degenerate basis")
    if det < 0:  # orientation: Im(beta2 / beta1) > 0
        (u1, v1), (u2, v2) = (u2, v2), (u1, v1)
        det = -det
    # N(x beta1 + y beta2) / N(I), N(I) = [O_c : I] = det / c
    n_ideal = det // c
    A = _norm(D, u1, v1)
    C = _norm(D, u2, v2)
    B = _norm(D, u1 + u2, v1 + v2) - A - C
    if A % n_ideal or B % n_ideal or C % n_ideal:
        raise InvalidParameter("basis does not span a proper ideal")
    return (A // n_ideal, B // n_ideal, C // n_ideal)


def _norm(D: int, u: int, v: int) -> int:
    # N(u + v omega) = u^2 + D u v + (D^2 - D)/4 v^2
    return u * u + D * u * v + (D * D - D) // 4 * v * v


def principal_class_of(D: int, c: int, alpha) -> int:
    """Class in Pic(O_c) of alpha O_K ∩ O_c for alpha in O_K prime to c."""
    u, v = alpha
    G = class_group(D, c)
    if math.gcd(_norm(D, u, v), c) != 1:
        raise OutOfDomain("alpha must be prime to the conductor")
    # alpha O_K has basis alpha, alpha*omega; omega^2 = D omega - (D^2 - D)/4
    e1 = (u, v)
    e2 = (-(D * D - D) // 4 * v, u + D * v)
    # sublattice {m e1 + n e2 : omega-coordinate = 0 mod c}
    basis = _congruence_sublattice(e1, e2, c)
    return G.index(ideal_to_form(D, c, basis))


def _congruence_sublattice(e1, e2, c):
    """Basis of {m e1 + n e2 : (m e1 + n e2)[1] = 0 mod c}."""
    a1, a2 = e1[1] % c, e2[1] % c
    # solve m a1 + n a2 = 0 mod c: lattice with basis from HNF of kernel
    vecs = [(c, 0), (0, c)]
    g, x, y = _xgcd(a1, a2) if (a1 or a2) else (0, 0, 0)
    if g == 0:
        vecs = [(1, 0), (0, 1)]
    else:
        vecs += [(a2 // g, -a1 // g)]
        # m a1 + n a2 = k g: need k g = 0 mod c
        step = c // math.gcd(c, g)
        vecs.append((x * step, y * step))
    M = _hnf2(vecs)
    (m1, n1), (m2, n2) = M
    b1 = (m1 * e1[0] + n1 * e2[0], m1 * e1[1] + n1 * e2[1])
    b2 = (m2 * e1[0] + n2 * e2[0], m2 * e1[1] + n2 * e2[1])
    return b1, b2


def _hnf2(vecs):
    """Basis of the Z-span of integer 2-vectors."""
    rows = [list(v) for v in vecs if v != (0, 0)]
    # gcd on first coordinate
    while sum(1 for r in rows if r[0] != 0) > 1:
        rows.sort(key=lambda r: (r[0] == 0, abs(r[0])))
        piv = rows[0]
        for r in rows[1:]:
            if r[0]:
                q = r[0] // piv[0]
                r[0] -= q * piv[0]
                r[1] -= q * piv[1]
    first = [r for r in rows if r[0] != 0]
    rest = [r[1] for r in rows if r[0] == 0]
    g = 0
    for v in rest:
        g = math.gcd(g, v)
    return [tuple(first[0]), (0, g)]
