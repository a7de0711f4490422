"""towerlab command line.

Every subcommand prints one JSON document (or writes it to --out).  Exit
codes: 0 success, 1 domain error, 2 precision or truncation error, 64 usage
error.  Each global flag can also be set through an environment variable
named TOWERLAB_<FLAG>, e.g. TOWERLAB_P=7 or TOWERLAB_DATA_DIR=/tmp/cache;
an explicit flag wins over the environment.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from sympy import isprime

from .errors import InvalidInput, InvalidParameter, MissingFixtures, OutOfDomain, TowerError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_PRECISION = 2
EXIT_USAGE = 64

ENV_PREFIX = "TOWERLAB_"

COMMANDS = (
    "wprep",
    "degrees",
    "specialize",
    "ideals",
    "chars",
    "lvalue",
    "average",
    "basechange",
    "verify",
    "conjecture-scan",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- configuration -------------------------------------------------------------


@dataclass
class RunConfig:
    p: int | None = None
    D: int | None = None
    curve: str | None = None
    coeffs: str | None = None
    prec: int | None = None
    trunc: int | None = None
    seed: int = 0
    out: str | None = None
    data_dir: str | None = None

    def validate(self, need_p: bool = False, need_D: bool = False):
        if need_p and self.p is None:
            raise UsageError("--p is required")
        if need_D and self.D is None:
            raise UsageError("--D is required")
        if self.p is not None and (self.p < 5 or not isprime(self.p)):
            raise InvalidParameter(f"p must be a prime >= 5, got {self.p}")
        if self.p is not None and self.D is not None and self.D % self.p == 0:
            raise OutOfDomain(f"p = {self.p} divides D = {self.D}")


_GLOBAL_FLAGS = {
    "p": int,
    "D": int,
    "curve": str,
    "coeffs": str,
    "prec": int,
    "trunc": int,
    "seed": int,
    "out": str,
    "data_dir": str,
}


def _env_value(name: str, conv):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None:
        return None
    try:
        return conv(raw)
    except ValueError as exc:
        raise UsageError(f"bad value {raw!r} in {ENV_PREFIX + name.upper()}") from exc


def _config(args) -> RunConfig:
    vals = {}
    for name, conv in _GLOBAL_FLAGS.items():
        v = getattr(args, name, None)
        if v is None:
            v = _env_value(name, conv)
        if v is not None:
            vals[name] = v
    return RunConfig(**vals)


def _add_globals(sp):
    sp.add_argument("--p", type=int)
    sp.add_argument("--D", type=int)
    src = sp.add_mutually_exclusive_group()
    src.add_argument("--curve", help="named curve label, e.g. 11a")
    src.add_argument("--coeffs", help="JSON file with N and an")
    sp.add_argument("--prec", type=int, help="p-adic precision (in units of p)")
    sp.add_argument("--trunc", type=int, help="power series truncation order")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", help="write the JSON report here instead of stdout")
    sp.add_argument("--data-dir", dest="data_dir")


# -- input helpers -------------------------------------------------------------


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise MissingFixtures(f"fixture file {path} not found; generate one with a --seed run") from exc
    except (OSError, ValueError) as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc


def load_series1(d: dict, cfg: RunConfig):
    """Accepts the library's to_dict layout or {"p", "coeffs": [ints], "m"?}."""
    from .padic import make_ring
    from .series import TruncatedSeries1

    if "ring" in d:
        return TruncatedSeries1.from_dict(d)
    try:
        p = int(d.get("p", cfg.p))
        ring = make_ring(p, int(d.get("m", 0)))
        coeffs = [int(c) for c in d["coeffs"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed series: {exc}") from exc
    t = int(d.get("t_order", cfg.trunc or max(64, len(coeffs))))
    prec = int(d.get("prec", cfg.prec or 20)) * ring.e
    return TruncatedSeries1.from_coeffs(ring, coeffs, t, prec)


def load_series2(d: dict, cfg: RunConfig):
    """The library's to_dict layout or {"p", "terms": [[i, j, c], ...]}."""
    from .padic import make_ring
    from .series import TruncatedSeries2

    if "ring" in d:
        return TruncatedSeries2.from_dict(d)
    try:
        p = int(d.get("p", cfg.p))
        ring = make_ring(p, int(d.get("m", 0)))
        terms = {(int(i), int(j)): int(c) for i, j, c in d["terms"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed series: {exc}") from exc
    t = cfg.trunc or 64
    orders = tuple(int(x) for x in d.get("t_orders", (t, t)))
    prec = int(d.get("prec", cfg.prec or 20)) * ring.e
    return TruncatedSeries2.from_dict_terms(ring, terms, orders, prec)


def _ring(cfg: RunConfig):
    from .padic import make_ring

    return make_ring(cfg.p or 5, 0)


def _prec(cfg: RunConfig, ring):
    return (cfg.prec or 20) * ring.e


def _coefficients(cfg: RunConfig, nmax: int):
    from .curves import curve_table, ingest_file

    data_dir = Path(cfg.data_dir) if cfg.data_dir else None
    if cfg.coeffs:
        return ingest_file(cfg.coeffs, nmax)
    if not cfg.curve:
        raise UsageError("--curve or --coeffs is required")
    return curve_table(cfg.curve, nmax, data_dir=data_dir)


def _curve_level(cfg: RunConfig) -> int:
    from .curves import NAMED_CURVES

    if cfg.coeffs:
        return int(_read_json(cfg.coeffs)["N"])
    if cfg.curve not in NAMED_CURVES:
        raise InvalidInput(f"unknown curve label {cfg.curve!r}; known: {sorted(NAMED_CURVES)}")
    return NAMED_CURVES[cfg.curve]["N"]


def _check_level_coprime(N: int, cfg: RunConfig):
    if math.gcd(N * cfg.p, cfg.D) != 1:
        raise OutOfDomain(f"need gcd(N p, D) = 1, have N = {N}, p = {cfg.p}, D = {cfg.D}")


def _table_for(cfg: RunConfig, characters, doubling=False):
    from .lfunction import required_coefficients

    N = _curve_level(cfg)
    need = max(required_coefficients(N, W, doubling) for W in characters)
    return _coefficients(cfg, need)


def _deg(d):
    from .series import is_infinite

    return str(d) if is_infinite(d) else d


def _elem(x) -> list | int:
    c = [int(v) for v in x.coeffs]
    return c[0] if len(c) == 1 else c


# -- subcommands ---------------------------------------------------------------


def cmd_wprep(args, cfg):
    from .fixtures import planted_series, stream
    from .series import weierstrass_prepare

    planted = None
    if args.series:
        g = load_series1(_read_json(args.series), cfg)
    else:
        cfg.validate(need_p=True)
        ring = _ring(cfg)
        ps = planted_series(stream(cfg.seed, "cli/wprep"), ring, cfg.trunc or 64, _prec(cfg, ring))
        g, planted = ps.series, {"mu": ps.mu, "lambda": ps.lam}
    w = weierstrass_prepare(g)
    out = {
        "p": g.ring.p,
        "mu": w.mu,
        "lambda": w.lam,
        "distinguished": [_elem(c) for c in w.distinguished_coeffs()],
        "determined_prec": w.determined_prec,
        "reconstructs": w.reconstruct() == g,
    }
    if planted:
        out["planted"] = planted
    return out


def _series2_from(args, cfg, family="cli/degrees"):
    from .fixtures import relation_fixture, stream

    if args.series:
        return load_series2(_read_json(args.series), cfg), None
    cfg.validate(need_p=True)
    ring = _ring(cfg)
    t = cfg.trunc or 64
    f = relation_fixture(stream(cfg.seed, family), ring, (t, t), _prec(cfg, ring))
    return f.series, f


def cmd_degrees(args, cfg):
    from .series import check_degree_relation

    F, f = _series2_from(args, cfg)
    rep = check_degree_relation(F)
    out = {"p": F.ring.p, **rep.to_dict()}
    if f is not None:
        out["fixture"] = {"kind": f.kind, "deg_varpi1": f.deg_varpi1, "deg_varpi2": f.deg_varpi2}
    return out


def cmd_specialize(args, cfg):
    from .padic import make_ring, root_of_unity
    from .series import mu_invariant, specialize_axis, weierstrass_degree

    F, _ = _series2_from(args, cfg, "cli/specialize")
    try:
        lab = Fraction(args.label) % 1
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --label {args.label!r}") from exc
    p = F.ring.p
    d, n = lab.denominator, 0
    while d % p == 0:
        d //= p
        n += 1
    if d != 1:
        raise InvalidParameter("label must have p-power order")
    ring = make_ring(p, max(F.ring.m, n))
    s = specialize_axis(F, args.axis, root_of_unity(ring, lab) - 1)
    return {
        "p": p,
        "axis": args.axis,
        "label": str(lab),
        "level": n,
        "weierstrass_degree": _deg(weierstrass_degree(s)),
        "mu": _deg(mu_invariant(s)),
        "leading_coefficients": [_elem(c) for c in s.coeffs[: args.show]],
    }


def cmd_ideals(args, cfg):
    from .quadforms import class_group

    cfg.validate(need_D=True)
    if args.n < 1:
        raise InvalidParameter("n must be positive")
    G = class_group(cfg.D, args.c)
    counts = G.ideal_counts(args.n)[:, args.n]
    return {
        "D": cfg.D,
        "c": args.c,
        "n": args.n,
        "classes": G.h,
        "forms": [list(f) for f in G.forms],
        "counts": [int(x) for x in counts],
    }


def cmd_chars(args, cfg):
    from .characters import enumerate_cyclotomic, enumerate_ring_class

    cfg.validate(need_p=True, need_D=True)
    return {
        "D": cfg.D,
        "p": cfg.p,
        "ring_class": [r.to_dict() for r in enumerate_ring_class(cfg.D, cfg.p, args.k)],
        "cyclotomic": [x.to_dict() for x in enumerate_cyclotomic(cfg.p, args.n)],
    }


def _select_character(cfg, args):
    from .characters import DirichletCharacter, enumerate_ring_class, make_hecke

    rhos = enumerate_ring_class(cfg.D, cfg.p, args.k)
    if not 0 <= args.rho < len(rhos):
        raise InvalidParameter(f"--rho must be in [0, {len(rhos)})")
    phi = (cfg.p - 1) * cfg.p ** (args.chi_n - 1) if args.chi_n else 1
    return make_hecke(rhos[args.rho], DirichletCharacter(cfg.p, args.chi_n, args.chi_k % phi))


def cmd_lvalue(args, cfg):
    from .lfunction import central_value, complete_root_number, l_series

    cfg.validate(need_p=True, need_D=True)
    _check_level_coprime(_curve_level(cfg), cfg)
    W = _select_character(cfg, args)
    f = _table_for(cfg, [W], args.doubling)
    cv = central_value(f, W, args.target, check_doubling=args.doubling)
    inst = l_series(f, W)
    eps = complete_root_number(f, W)
    out = cv.to_dict()
    out["curve"] = f.label
    out["epsilon_complete"] = [eps.real, eps.imag]
    out["fe_residual"] = max(inst.fe_residual(t) for t in (0.0, 0.25, 0.5))
    return out


def cmd_average(args, cfg):
    from .characters import orbit
    from .lfunction import galois_average

    cfg.validate(need_p=True, need_D=True)
    _check_level_coprime(_curve_level(cfg), cfg)
    members = orbit(cfg.D, cfg.p, args.c, args.q)
    if not members:
        raise OutOfDomain("empty orbit")
    f = _table_for(cfg, members)
    avg = galois_average(f, cfg.D, cfg.p, args.c, args.q, strict=args.strict)
    return {"curve": f.label, "D": cfg.D, "p": cfg.p, **avg.to_dict()}


def cmd_basechange(args, cfg):
    from .basechange import verify_degree_invariance
    from .fixtures import basechange_fixture, stream

    if args.series:
        F = load_series2(_read_json(args.series), cfg)
        planted = None
    else:
        cfg.validate(need_p=True)
        ring = _ring(cfg)
        t = cfg.trunc or 64
        fx = basechange_fixture(stream(cfg.seed, "cli/basechange"), ring, (t, t), _prec(cfg, ring), zero_rate=0.3)
        F, planted = fx.series, {"r1": fx.r1, "varpi2": fx.varpi2}
    rep = verify_degree_invariance(F, args.nmax)
    out = {"p": F.ring.p, **rep.to_dict()}
    if planted:
        out["planted"] = planted
    return out


def cmd_verify(args, cfg):
    from .verify import FAMILIES, SuiteConfig, verify_suite

    fams = tuple(args.family) if args.family else FAMILIES
    sc = SuiteConfig(
        seed=cfg.seed,
        count=args.count,
        nmax=args.nmax,
        p=cfg.p or 5,
        families=fams,
        plant_violation=args.plant_violation,
        ideal_nmax=args.ideal_nmax,
        data_dir=Path(cfg.data_dir) if cfg.data_dir else None,
    )
    cfg.validate()
    rep = verify_suite(sc)
    out = rep.to_dict()
    return out, (EXIT_OK if rep.passed else EXIT_DOMAIN)


def cmd_conjecture_scan(args, cfg):
    from .characters import enumerate_cyclotomic, enumerate_ring_class, make_hecke
    from .lfunction import central_value

    cfg.validate(need_p=True, need_D=True)
    _check_level_coprime(_curve_level(cfg), cfg)
    rows = []
    chis = enumerate_cyclotomic(cfg.p, args.n)
    rhos = enumerate_ring_class(cfg.D, cfg.p, args.k)
    candidates = [[make_hecke(r, x) for x in chis] for r in rhos]
    f = _table_for(cfg, [W for row in candidates for W in row])
    for r, row in zip(rhos, candidates):
        hit = None
        tried = 0
        for W in row:
            tried += 1
            cv = central_value(f, W)
            if abs(cv.value) > args.threshold:
                hit = {"chi": W.chi.to_dict(), "abs_L": abs(cv.value)}
                break
        rows.append({"rho": r.to_dict(), "tried": tried, "found": hit is not None, "witness": hit})
    return {"D": cfg.D, "p": cfg.p, "curve": f.label, "threshold": args.threshold, "rows": rows}


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="towerlab", description="p-adic towers workbench")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("wprep", help="Weierstrass preparation of a one-variable series")
    _add_globals(sp)
    sp.add_argument("--series", help="JSON series file (default: planted fixture from --seed)")

    sp = sub.add_parser("degrees", help="two-variable degree relation")
    _add_globals(sp)
    sp.add_argument("--series")

    sp = sub.add_parser("specialize", help="substitute zeta - 1 into one variable")
    _add_globals(sp)
    sp.add_argument("--series")
    sp.add_argument("--axis", type=int, choices=(1, 2), default=2)
    sp.add_argument("--label", default="1/5", help="zeta as a fraction j/p^n")
    sp.add_argument("--show", type=int, default=4)

    sp = sub.add_parser("ideals", help="class group and ideal counts")
    _add_globals(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=int, default=1)

    sp = sub.add_parser("chars", help="enumerate ring class and cyclotomic characters")
    _add_globals(sp)
    sp.add_argument("--k", type=int, default=1, help="ring class level (conductor p^k)")
    sp.add_argument("--n", type=int, default=1, help="Dirichlet modulus p^n")

    sp = sub.add_parser("lvalue", help="central value of L(s, f x W)")
    _add_globals(sp)
    sp.add_argument("--k", type=int, default=0)
    sp.add_argument("--rho", type=int, default=0, help="index among ring class characters of level k")
    sp.add_argument("--chi-n", dest="chi_n", type=int, default=0)
    sp.add_argument("--chi-k", dest="chi_k", type=int, default=0)
    sp.add_argument("--target", type=float, default=1e-8)
    sp.add_argument("--doubling", action="store_true")

    sp = sub.add_parser("average", help="Galois average over an orbit")
    _add_globals(sp)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--strict", action="store_true")

    sp = sub.add_parser("basechange", help="degree invariance of basechange elements")
    _add_globals(sp)
    sp.add_argument("--series")
    sp.add_argument("--nmax", type=int, default=2)

    sp = sub.add_parser("verify", help="run invariant families")
    _add_globals(sp)
    sp.add_argument("--family", action="append", help="restrict to a family (repeatable)")
    sp.add_argument("--nmax", type=int, default=2)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--ideal-nmax", dest="ideal_nmax", type=int, default=2000)
    sp.add_argument("--plant-violation", dest="plant_violation", action="store_true")

    sp = sub.add_parser("conjecture-scan", help="search for a nonvanishing cyclotomic twist")
    _add_globals(sp)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--threshold", type=float, default=1e-4)

    return parser


_HANDLERS = {
    "wprep": cmd_wprep,
    "degrees": cmd_degrees,
    "specialize": cmd_specialize,
    "ideals": cmd_ideals,
    "chars": cmd_chars,
    "lvalue": cmd_lvalue,
    "average": cmd_average,
    "basechange": cmd_basechange,
    "verify": cmd_verify,
    "conjecture-scan": cmd_conjecture_scan,
}


def _emit(report: dict, cfg: RunConfig | None):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if cfg is not None and cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    cfg = None
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError(f"choose a subcommand: {', '.join(COMMANDS)}")
        cfg = _config(args)
        result = _HANDLERS[args.command](args, cfg)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
        _emit(result, cfg)
        return code
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n{parser.format_usage()}")
        return EXIT_USAGE
    except TowerError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return exc.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
