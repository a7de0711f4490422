"""Rankin-Selberg L-functions L(s, f x W) for a weight-2 newform f and a
finite-order Hecke character W of an imaginary quadratic field.

Normalization is analytic: the center is s = 1/2,
    L(s, f x W) = L^(N)(2s, omega chi^2) * sum_n theta_W(n) a_n n^{-1/2} n^{-s},
the completed function is Lambda(s) = A^s G(s) L(s) with A = N * |D| * N(f_W)
and G(s) = Gamma_C(s + 1/2)^2, and Lambda(s) = eps * conj-Lambda(1 - s).
Central values come from a smoothed approximate functional equation whose
weight is the exact inverse Mellin transform of G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.special import gamma as _gamma
from scipy.special import k0
from sympy import primerange

from .characters import HeckeCharacter, orbit, realize
from .curves import CoefficientTable
from .errors import (
    FormulaNotApplicable,
    InsufficientCoefficients,
    OrbitInconsistency,
    OutOfDomain,
    PrecisionUnreachable,
    UnsupportedRamified,
)
from .quadforms import kronecker_omega, omega_table

KAPPA = 0.5
V_MAX = 32.0
THRESHOLD_BAND = (1e-8, 1e-4)


# -- theta series -------------------------------------------------------------


def _pvals(nmax: int, p: int):
    """(p-adic valuation, prime-to-p part) of 0..nmax."""
    n = np.arange(nmax + 1, dtype=np.int64)
    n[0] = 1
    v = np.zeros(nmax + 1, dtype=np.int64)
    m = n.copy()
    while True:
        hit = (m % p == 0)
        if not hit.any():
            break
        v[hit] += 1
        m[hit] //= p
    return v, m


def local_p_theta(W: HeckeCharacter, jmax: int) -> np.ndarray:
    """theta_W(p^j) for 0 <= j <= jmax: sum of W over ideals of norm p^j prime to f_W."""
    out = np.zeros(jmax + 1, dtype=complex)
    out[0] = 1
    if W.split:
        a = W.prime_above_p_label("P")
        b = W.prime_above_p_label("Pbar")
        x = realize(a) if a is not None else 0
        y = realize(b) if b is not None else 0
        for j in range(1, jmax + 1):
            if a is not None and b is not None:
                out[j] = sum(x**i * y ** (j - i) for i in range(j + 1))
            elif a is not None:
                out[j] = x**j
            elif b is not None:
                out[j] = y**j
    else:
        lab = W.principal_p_label()
        if lab is not None:
            z = realize(lab)
            for j in range(2, jmax + 1, 2):
                out[j] = z ** (j // 2)
    return out


def theta_coefficients(W: HeckeCharacter, nmax: int) -> np.ndarray:
    """theta_W(n) for 0 <= n <= nmax (index 0 is set to 0).

    For n prime to p this is sum_A rho(A) r_A(n) chi(n); the p-part is
    filled in multiplicatively from the values of W on primes above p.
    """
    if W.D % W.p == 0:
        raise UnsupportedRamified("p divides D")
    G = W.rho.group
    counts = G.ideal_counts(nmax)
    rho = np.array([realize(v) for v in W.rho.values])
    base = rho @ counts
    p = W.p
    v, m = _pvals(nmax, p)
    chi = _dirichlet_vector(W.chi, nmax)
    theta = np.where(v == 0, base * chi, 0)
    jmax = int(v.max())
    loc = local_p_theta(W, jmax)
    pos = np.nonzero(v > 0)[0]
    theta[pos] = loc[v[pos]] * theta[m[pos]]
    theta[0] = 0
    return theta


def _dirichlet_vector(chi, nmax: int) -> np.ndarray:
    if chi.n == 0:
        out = np.ones(nmax + 1, dtype=complex)
        return out
    mod = chi.modulus
    table = np.zeros(mod, dtype=complex)
    for a in range(mod):
        lab = chi.label(a)
        table[a] = 0 if lab is None else realize(lab)
    return table[np.arange(nmax + 1) % mod]


def sigma_bound_ok(W: HeckeCharacter, nmax: int) -> bool:
    """|sum_A rho(A) r_A(n)| <= d(n) h for n <= nmax."""
    G = W.rho.group
    counts = G.ideal_counts(nmax)
    rho = np.array([realize(v) for v in W.rho.values])
    s = np.abs(rho @ counts)
    d = np.zeros(nmax + 1, dtype=np.int64)
    for k in range(1, nmax + 1):
        d[k::k] += 1
    return bool(np.all(s[1:] <= d[1:] * G.h + 1e-9))


# -- Rankin-Selberg coefficients ---------------------------------------------


def _square_factor(W: HeckeCharacter, N: int, mmax: int) -> np.ndarray:
    """eps(m) for the partial L-function L^(N)(2s, omega chi^2), m <= mmax."""
    om = omega_table(W.D, mmax).astype(complex)
    chi2 = _dirichlet_vector(W.chi**2, mmax)
    eps = om * chi2
    p = W.p
    lab = W.principal_p_label()
    wp = 0 if lab is None else realize(lab)
    # p-part: omega(p)^j W((p))^j
    v, m = _pvals(mmax, p)
    pv = np.nonzero(v > 0)[0]
    eps[pv] = (kronecker_omega(W.D, p) * wp) ** v[pv] * om[m[pv]] * chi2[m[pv]]
    for ell in primerange(2, N + 1):
        if N % ell == 0:
            eps[ell::ell] = 0
    eps[0] = 0
    return eps


def rs_coefficients(f: CoefficientTable, W: HeckeCharacter, nmax: int, normalized: bool = True) -> np.ndarray:
    """Dirichlet coefficients of L(s, f x W), index 0..nmax.

    normalized=True gives lambda_n with center 1/2; otherwise b_n = sqrt(n) lambda_n,
    the coefficients of the arithmetic normalization (b_n integral combinations).
    """
    an = f.require(nmax).astype(float)
    theta = theta_coefficients(W, nmax)
    inner = an * theta
    mmax = math.isqrt(nmax)
    eps = _square_factor(W, f.N, mmax)
    out = np.zeros(nmax + 1, dtype=complex)
    for mm in range(1, mmax + 1):
        e = eps[mm]
        if e == 0:
            continue
        step = mm * mm
        k = nmax // step
        # arithmetic normalization: factor m from L(2s - 1, eps)
        out[step : step * k + 1 : step] += e * mm * inner[1 : k + 1]
    if normalized:
        n = np.arange(nmax + 1, dtype=float)
        n[0] = 1
        out = out / np.sqrt(n)
    out[0] = 0
    return out


# -- root number --------------------------------------------------------------


def prime_to_p(N: int, p: int) -> int:
    while N % p == 0:
        N //= p
    return N


def root_number_label(N: int, W: HeckeCharacter) -> Fraction:
    """Label of -omega(N') chi^2(N') (N' the prime-to-p part of the level)."""
    Np = prime_to_p(N, W.p)
    if math.gcd(Np, W.D) != 1:
        raise FormulaNotApplicable(f"gcd(N', D) = {math.gcd(Np, W.D)} > 1")
    om = kronecker_omega(W.D, Np)
    lab = Fraction(1, 2) + (Fraction(1, 2) if om == -1 else Fraction(0))
    c = W.chi.label(Np)
    if c is not None:
        lab += 2 * c
    return lab % 1


@dataclass(frozen=True)
class RootNumber:
    label: Fraction

    @property
    def value(self) -> complex:
        return realize(self.label)

    @property
    def is_real(self) -> bool:
        return self.label in (Fraction(0), Fraction(1, 2))

    @property
    def sign(self):
        if not self.is_real:
            return None
        return 1 if self.label == 0 else -1

    def to_dict(self):
        v = self.value
        return {"label": str(self.label), "re": v.real, "im": v.imag, "self_dual_sign": self.sign}


def root_number(f: CoefficientTable | int, W: HeckeCharacter) -> RootNumber:
    """The closed formula -omega(N') chi^2(N') as an exact label."""
    N = f if isinstance(f, int) else f.N
    return RootNumber(root_number_label(N, W))


def theta_epsilon_squared(W: HeckeCharacter) -> complex:
    """eps(theta_W)^2 = chi^2(|D|) eps_p(theta_W)^2.

    The places above |D| and infinity contribute chi^2(|D|) (and two signs that
    cancel); the place p contributes the square of a Gauss sum.  This is 1
    for ring class characters.
    """
    c = W.chi.label(abs(W.D))
    out = realize(2 * c) if c is not None else 1
    return out * W.local_epsilon() ** 2


def complete_root_number(f: CoefficientTable | int, W: HeckeCharacter) -> complex:
    """Root number of Lambda(s, f x W) including the local constant at p."""
    return root_number(f, W).value * theta_epsilon_squared(W)


def is_exceptional(f, W: HeckeCharacter) -> bool:
    """W ring class (fixed by conjugation) and root number -1."""
    return W.is_ring_class() and root_number(f, W).sign == -1


# -- approximate functional equation -----------------------------------------


def gamma_factor(s: complex, kappa: float = KAPPA) -> complex:
    """Gamma_C(s + kappa)^2 with Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s)."""
    gc = 2 * (2 * math.pi) ** (-(s + kappa)) * complex(_gamma(complex(s + kappa)))
    return gc * gc


_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _panel_integrals(edges: np.ndarray, expo: complex) -> np.ndarray:
    """int_{edges[k]}^{edges[k+1]} v^expo K0(v) dv for each k."""
    a, b = edges[:-1], edges[1:]
    half = (b - a) / 2
    mid = (b + a) / 2
    v = mid[:, None] + half[:, None] * _GL_X[None, :]
    vals = np.exp(expo * np.log(v)) * k0(v)
    return half * (vals @ _GL_W)


class _PhiCache:
    def __init__(self, size=64):
        self.size = size
        self.store = {}

    def get(self, key, make):
        if key in self.store:
            return self.store[key]
        val = make()
        if len(self.store) >= self.size:
            self.store.pop(next(iter(self.store)))
        self.store[key] = val
        return val


_PHI = _PhiCache()


def phi_table(w: complex, scale: float, nmax: int, kappa: float = KAPPA, v_tail: float = 60.0) -> np.ndarray:
    """Phi(w, n*scale) for n = 0..nmax (entry 0 unused), where

        Phi(w, y) = y^{-w} int_y^oo g(x) x^w dx/x,   g(x) = 8 (2 pi)^{2 kappa - 1} x^kappa K0(4 pi sqrt x).
    """
    key = (complex(w), float(scale), int(nmax), float(kappa))

    def make():
        n = np.arange(1, nmax + 1, dtype=float)
        y = n * scale
        v = 4 * math.pi * np.sqrt(y)
        expo = 2 * w + 2 * kappa - 1
        edges = v
        if v[-1] < v_tail:
            tail = np.linspace(v[-1], v_tail, 65)[1:]
            edges = np.concatenate([v, tail])
        pieces = _panel_integrals(edges, expo)
        cum = np.cumsum(pieces[::-1])[::-1]
        integral = cum[: nmax]
        const = 16 * (2 * math.pi) ** (2 * kappa - 1) * (16 * math.pi**2) ** (-(w + kappa))
        out = np.zeros(nmax + 1, dtype=complex)
        out[1:] = const * np.exp(-w * np.log(y)) * integral
        return out

    return _PHI.get(key, make)


def afe_length(A: float, tau: float, v_max: float = V_MAX) -> int:
    """Terms needed so that both sums reach v = 4 pi sqrt(y) >= v_max."""
    y_max = (v_max / (4 * math.pi)) ** 2
    return int(math.ceil(A * y_max * max(tau, 1 / tau))) + 1


def completed_value(lam: np.ndarray, eps: complex, A: float, s: complex, tau: float, kappa: float = KAPPA, v_max: float = V_MAX) -> complex:
    """Lambda(s) by the approximate functional equation with split point tau."""
    nmax = len(lam) - 1
    need = afe_length(A, tau, v_max)
    if nmax < need:
        raise InsufficientCoefficients(f"AFE at A = {A:.0f} needs {need} coefficients, have {nmax}")
    lam = lam[: need + 1]
    ph1 = phi_table(s, tau / A, need, kappa)
    ph2 = phi_table(1 - s, 1 / (A * tau), need, kappa)
    return tau**s * np.dot(lam, ph1) + eps * tau ** (s - 1) * np.dot(np.conj(lam), ph2)


@dataclass
class LSeriesInstance:
    f: CoefficientTable
    W: HeckeCharacter
    Delta: int
    conductor: int
    eps: RootNumber
    coeffs: np.ndarray = field(repr=False)
    eps_complete: complex = 1 + 0j
    v_max: float = V_MAX

    @property
    def A(self) -> int:
        return self.conductor

    def Lambda(self, s: complex, tau: float = 1.2, kappa: float = KAPPA) -> complex:
        return completed_value(self.coeffs, self.eps_complete, self.A, s, tau, kappa, self.v_max)

    def Lambda_dual(self, s: complex, tau: float = 0.8, kappa: float = KAPPA) -> complex:
        lam = np.conj(self.coeffs)
        return completed_value(lam, np.conj(self.eps_complete), self.A, s, tau, kappa, self.v_max)

    def L(self, s: complex, tau: float = 1.2, kappa: float = KAPPA) -> complex:
        return self.Lambda(s, tau, kappa) / (self.A**s * gamma_factor(s, kappa))

    def fe_residual(self, t: float, tau1: float = 1.2, tau2: float = 0.8, kappa: float = KAPPA) -> float:
        s = 0.5 + 1j * t
        return abs(self.Lambda(s, tau1, kappa) - self.eps_complete * self.Lambda_dual(1 - s, tau2, kappa))


def l_series(f: CoefficientTable, W: HeckeCharacter, nmax: int | None = None, v_max: float = V_MAX) -> LSeriesInstance:
    Delta = abs(W.D) * W.conductor_norm
    A = f.N * Delta
    if math.gcd(f.N * W.p, W.D) != 1:
        # the completed conductor N * Delta assumes coprimality
        raise FormulaNotApplicable("gcd(N p, D) > 1")
    eps = root_number(f, W)
    if nmax is None:
        nmax = afe_length(A, 1.25, v_max)
    lam = rs_coefficients(f, W, nmax)
    return LSeriesInstance(f, W, Delta, A, eps, lam, complete_root_number(f, W), v_max)


@dataclass
class CentralValue:
    value: complex
    error: float
    tau_spread: float
    doubling_change: float | None
    eps: RootNumber
    conductor: int
    W: HeckeCharacter = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "W": self.W.to_dict(),
            "epsilon": self.eps.to_dict(),
            "conductor": self.conductor,
            "L": [self.value.real, self.value.imag],
            "abs_L": abs(self.value),
            "error_bound": self.error,
        }


def central_value(f: CoefficientTable, W: HeckeCharacter, target_error: float = 1e-8, check_doubling: bool = False) -> CentralValue:
    """L(1/2, f x W) with an error estimate from two independent AFE splits."""
    inst = l_series(f, W, nmax=min(f.nmax, afe_length(f.N * abs(W.D) * W.conductor_norm, 1.25)))
    v1 = inst.L(0.5, 1.2)
    v2 = inst.L(0.5, 1 / 1.15)
    spread = abs(v1 - v2)
    change = None
    if check_doubling:
        big = afe_length(inst.A, 1.25, V_MAX * math.sqrt(2))
        if f.nmax < big:
            raise InsufficientCoefficients(f"doubling check needs {big} coefficients")
        inst2 = l_series(f, W, nmax=big, v_max=V_MAX * math.sqrt(2))
        change = abs(inst2.L(0.5, 1.2) - v1)
    err = max(spread, change or 0.0)
    if err > max(target_error, 1e-6):
        raise PrecisionUnreachable(f"central value error estimate {err:.2e} exceeds target {target_error:.1e}")
    return CentralValue(v1, err, spread, change, inst.eps, inst.A, W)


def required_coefficients(N: int, W: HeckeCharacter, doubling: bool = False) -> int:
    A = N * abs(W.D) * W.conductor_norm
    return afe_length(A, 1.25, V_MAX * (math.sqrt(2) if doubling else 1))


# -- Galois averages -----------------------------------------------------------


@dataclass
class GaloisAverage:
    c: int
    q: int
    k: int
    orbit_size: int
    delta: complex
    values: list
    verdict: str

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "q": self.q,
            "k": self.k,
            "orbit_size": self.orbit_size,
            "delta": [self.delta.real, self.delta.imag],
            "abs_values": [abs(v.value) for v in self.values],
            "verdict": self.verdict,
        }


def orbit_verdict(abs_values, band=THRESHOLD_BAND) -> str:
    lo, hi = band
    if all(a > hi for a in abs_values):
        return "all nonzero"
    if all(a < lo for a in abs_values):
        return "all vanish"
    return "inconsistent"


def galois_average(f: CoefficientTable, D: int, p: int, c: int, q: int, W0: HeckeCharacter | None = None, k: int = 0, strict: bool = False) -> GaloisAverage:
    """delta_{c,q;W0}: mean central value over the orbit P_{c,q;W0}."""
    if k != 0:
        raise OutOfDomain("only k = 0 averages are evaluated numerically")
    members = orbit(D, p, c, q, W0)
    if not members:
        raise OutOfDomain("empty orbit")
    vals = [central_value(f, W) for W in members]
    delta = sum(v.value for v in vals) / len(vals)
    verdict = orbit_verdict([abs(v.value) for v in vals])
    if strict and verdict == "inconsistent":
        raise OrbitInconsistency(f"orbit (c={c}, q={q}) straddles the threshold band")
    return GaloisAverage(c, q, k, len(members), delta, vals, verdict)
