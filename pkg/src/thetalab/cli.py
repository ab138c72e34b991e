"""Command-line entry point: ``theta-code-lab <command> <subcommand> [options]``.

Exit codes: 0 success (or the expected verdict), 1 verdict failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import SparsePolynomial
from .codes import (
    NAMED_CODES,
    CodeError,
    is_doubly_even_self_dual,
    named_code,
    read_code_file,
    weight_enumerator,
)
from .hgroup import group_closure, invariance_report, molien_dimension, projection_rank
from .lattice import LatticeError
from .symplectic import (
    SiegelPoint,
    SiegelPointError,
    SymplecticMatrix,
    act,
    in_gamma,
    in_gamma_star_24,
    j_matrix,
    random_siegel_point,
)
from .tangent import embedding_report, minimal_generators, monomial_name
from .theta import (
    DEFAULT_TOL,
    Characteristic,
    ThetaError,
    addition_formula_residual,
    construction_a,
    fourth_order_residual,
    j_transform,
    lattice_theta,
    shell_counts,
    theta,
    transform_residual_tS,
)
from .thetamap import schottky_polynomial, th2_evaluate, vanishing_experiment
from .verify import SCHEMA, _round, verify_all

__all__ = ["RunConfig", "build_parser", "main", "run"]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    subcommand: str | None
    seed: int = 0
    tol: float = DEFAULT_TOL
    fmt: str = "json"
    output: str | None = None
    threads: int = 1
    options: dict = field(default_factory=dict)


# -- input helpers ---------------------------------------------------------------


def _load_json(arg: str):
    text = arg if arg.lstrip().startswith(("{", "[")) else Path(arg).read_text()
    return json.loads(text)


def _tau(cfg: RunConfig, genus_key: str = "genus") -> SiegelPoint:
    o = cfg.options
    if o.get("tau"):
        return SiegelPoint.from_json(o["tau"])
    g = o.get(genus_key)
    if not g:
        raise UsageError("either --tau or --genus is required")
    return random_siegel_point(g, cfg.seed, height=o.get("height", 1.0))


def _code(o: dict):
    if o.get("file"):
        return read_code_file(o["file"])
    return named_code(o.get("code") or "e8")


def _poly(arg: str, genus: int | None) -> SparsePolynomial:
    text = arg if not Path(arg).exists() else Path(arg).read_text()
    if text.lstrip().startswith("{"):
        return SparsePolynomial.from_json(text)
    if genus is None:
        raise UsageError("text polynomials need --genus")
    return SparsePolynomial.from_text(text.strip(), genus)


def _vector(text: str | None, g: int, kind=Fraction) -> list:
    if text is None:
        return [kind(0)] * g
    vals = [kind(x) for x in text.split(",") if x.strip()]
    if len(vals) != g:
        raise UsageError(f"expected {g} comma-separated entries, got {len(vals)}")
    return vals


def _symplectic(arg: str) -> SymplecticMatrix:
    if arg.startswith("J:"):
        return j_matrix(int(arg[2:]))
    data = _load_json(arg)
    M = data["matrix"] if isinstance(data, dict) else data
    return SymplecticMatrix.from_full(M)


# -- commands --------------------------------------------------------------------


def cmd_codes(cfg: RunConfig):
    o = cfg.options
    code = _code(o)
    if cfg.subcommand == "info":
        return {
            "name": code.name,
            "length": code.length,
            "dimension": code.dimension,
            "weight_distribution": {str(k): v for k, v in sorted(code.weight_distribution().items())},
            "doubly_even_self_dual": code.length > 0 and is_doubly_even_self_dual(code),
            "weight4_components": len(code.weight4_components()),
        }, True
    p = weight_enumerator(code, o["genus"], workers=cfg.threads)
    out = {"name": code.name, "genus": o["genus"], "terms": len(p), "degree": p.degree}
    if o.get("emit_poly"):
        out["polynomial"] = p.to_text()
    return out, True


def cmd_hgroup(cfg: RunConfig):
    o = cfg.options
    if cfg.subcommand == "order":
        return {"genus": o["genus"], "order": group_closure(o["genus"]).order}, True
    if cfg.subcommand == "invariant-dim":
        closure = group_closure(o["genus"])
        out = {"genus": o["genus"], "degree": o["degree"], "dimension": molien_dimension(closure, o["degree"])}
        if o.get("reynolds"):
            out["reynolds_rank"] = projection_rank(closure, o["degree"])
            return out, out["reynolds_rank"] == out["dimension"]
        return out, True
    p = _poly(o["poly"], o.get("genus"))
    inv, failing = invariance_report(p)
    out = {"invariant": inv}
    if failing:
        out["failing_generator"] = failing
    return out, inv


def cmd_symplectic(cfg: RunConfig):
    o = cfg.options
    if cfg.subcommand == "random":
        tau = random_siegel_point(o["genus"], cfg.seed, o["spread"], height=o["height"], diagonal=o["diagonal"])
        return tau.to_json(), True
    m = _symplectic(o["matrix"])
    if cfg.subcommand == "member":
        return {
            "genus": m.genus,
            "gamma_2": in_gamma(m, 2),
            "gamma_2_4": in_gamma(m, 2, strict2r=True),
            "gamma_star_2_4": in_gamma_star_24(m),
        }, True
    tau = _tau(cfg)
    return act(m, tau).to_json(), True


def _value(v) -> dict:
    return {"value": [v.value.real, v.value.imag], "tail_bound": v.tail_bound}


def cmd_theta(cfg: RunConfig):
    o = cfg.options
    if cfg.subcommand == "eval":
        tau = _tau(cfg)
        g = tau.genus
        a = [float(x) for x in _vector(o.get("a"), g)]
        b = [float(x) for x in _vector(o.get("b"), g)]
        z = _vector(o.get("z"), g, complex) if o.get("z") else None
        return _value(theta(a, b, tau, z, cfg.tol)), True
    if cfg.subcommand == "lattice":
        tau = _tau(cfg)
        lat = construction_a(_code(o))
        out = _value(lattice_theta(lat, tau, cfg.tol))
        out["shells"] = {str(k): v for k, v in shell_counts(lat, 4).items()}
        return out, True
    tau = _tau(cfg)
    g = tau.genus
    which = o["which"]
    limit = o.get("residual_tol") or (1e-9 if which == "tS" else 1e-8)
    if which == "addition":
        res = {
            f"{''.join(map(str, m.mprime))}/{''.join(map(str, m.mdprime))}": addition_formula_residual(m, tau, cfg.tol)
            for m in Characteristic.all(g)
            if m.is_even
        }
        worst = max(res.values())
    elif which == "fourth":
        res = {
            "".join(map(str, mp)): fourth_order_residual(mp, tau, cfg.tol)
            for mp in itertools.product(range(4), repeat=g)
        }
        worst = max(res.values())
    elif which == "tS":
        S = np.array(_load_json(o["S"]), dtype=int) if o.get("S") else np.eye(g, dtype=int)
        worst = transform_residual_tS(S, tau, cfg.tol)
        res = {"S": S.tolist()}
    else:
        jt = j_transform(tau, cfg.tol)
        worst = jt.residual
        res = {
            "scalar": [jt.scalar.real, jt.scalar.imag],
            "scalar_spread": jt.scalar_spread,
            "modulus_error": float(jt.modulus_error),
        }
        # the fitted scalar must be a unit for the identity to hold
        if jt.modulus_error > 1e-6:
            worst = max(worst, float(jt.modulus_error))
    return {"which": which, "tau": tau.to_json(), "residual": worst, "details": res}, worst < limit


def cmd_thetamap(cfg: RunConfig):
    o = cfg.options
    if cfg.subcommand == "eval":
        p = _poly(o["poly"], o.get("genus"))
        tau = SiegelPoint.from_json(o["tau"])
        return th2_evaluate(p, tau, cfg.tol, poly_id=Path(o["poly"]).name).to_json(), True
    if cfg.subcommand == "schottky":
        J = schottky_polynomial(o["genus"])
        out = {"genus": o["genus"], "terms": len(J), "zero": J.is_zero()}
        if o.get("emit_poly"):
            out["polynomial"] = J.to_text()
        return out, True
    rep = vanishing_experiment(
        o["genus"],
        o["points"],
        cfg.seed,
        cfg.tol,
        n_diagonal=o.get("diagonal_points"),
        vanish=o["vanish_threshold"],
        nonvanish=o["nonvanish_threshold"],
        height=o["height"],
        stream_check=o["stream_check"],
        workers=cfg.threads,
    )
    return rep.to_json(), rep.passed


def cmd_tangent(cfg: RunConfig):
    o = cfg.options
    g = o["genus"]
    r = embedding_report(g, brute_force=o["brute_force"] or o["list"])
    out = r.to_json()
    if o["list"]:
        out["generators"] = [monomial_name(m) for m in minimal_generators(g)]
    ok = r.t_bruteforce is None or r.t_bruteforce == r.t_formula
    return out, ok


def cmd_verify(cfg: RunConfig):
    o = cfg.options
    echo = (lambda line: print(line, file=sys.stderr)) if cfg.fmt != "text" else None
    kwargs = {"glue": o["d16_glue"]} if o.get("d16_glue") else {}
    results, text = verify_all(o["profile"], cfg.seed, workers=cfg.threads, echo=echo, **kwargs)
    doc = json.loads(text)
    doc["lines"] = [r.line() for r in results] if cfg.fmt == "text" else None
    return doc, doc["passed"]


COMMANDS = {
    "codes": cmd_codes,
    "hgroup": cmd_hgroup,
    "symplectic": cmd_symplectic,
    "theta": cmd_theta,
    "thetamap": cmd_thetamap,
    "tangent": cmd_tangent,
    "verify": cmd_verify,
}


# -- output ----------------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}." if prefix or k else "")
    elif isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def render(cfg: RunConfig, result: dict, ok: bool) -> str:
    if cfg.fmt == "json":
        doc = {"schema": SCHEMA, "command": cfg.command, "subcommand": cfg.subcommand, "ok": ok, "result": result}
        return json.dumps(_round(doc), indent=2, sort_keys=True) + "\n"
    if cfg.fmt == "text" and cfg.command == "verify":
        return "\n".join(result["lines"]) + "\n"
    rows = [(k, json.dumps(_round(v)) if isinstance(v, (list, dict)) else _round(v)) for k, v in _flatten(result)]
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(rows)
        return buf.getvalue()
    return "".join(f"{k}: {v}\n" for k, v in rows)


def run(cfg: RunConfig) -> tuple[int, str]:
    result, ok = COMMANDS[cfg.command](cfg)
    return (0 if ok else 1), render(cfg, result, ok)


# -- argument parsing ------------------------------------------------------------


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=argparse.SUPPRESS, help="seed for sampled points (default 0)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="theta truncation tolerance")
    common.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS, dest="fmt")
    common.add_argument("--output", default=argparse.SUPPRESS, help="write the report to this file")
    common.add_argument("--threads", type=_positive_int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="theta-code-lab", parents=[common], description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def group(name, help_):
        p = sub.add_parser(name, help=help_)
        return p.add_subparsers(dest="subcommand", required=True)

    def leaf(parent, name, help_):
        return parent.add_parser(name, help=help_, parents=[common])

    def code_args(p):
        src = p.add_mutually_exclusive_group()
        src.add_argument("--code", choices=NAMED_CODES)
        src.add_argument("--file", help="generator rows as 0/1 strings, one per line")

    def tau_args(p):
        p.add_argument("--tau", help="SiegelPoint JSON (inline or file)")
        p.add_argument("--genus", type=_positive_int, help="sample a seeded point of this genus instead")
        p.add_argument("--height", type=float, default=1.0, help="scale of Im(tau) for sampled points")

    codes = group("codes", "binary codes and their weight enumerators")
    p = leaf(codes, "info", "length, dimension, weight distribution")
    code_args(p)
    p = leaf(codes, "enumerator", "genus-g weight enumerator")
    code_args(p)
    p.add_argument("--genus", type=_positive_int, required=True)
    p.add_argument("--emit-poly", action="store_true")

    hg = group("hgroup", "the finite group H_g")
    p = leaf(hg, "order", "order of H_g (g <= 2)")
    p.add_argument("--genus", type=int, choices=(1, 2), required=True)
    p = leaf(hg, "invariant-dim", "dimension of degree-d invariants from the Molien series")
    p.add_argument("--genus", type=int, choices=(1, 2), required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--reynolds", action="store_true", help="compare with the Reynolds projection rank")
    p = leaf(hg, "check", "test invariance of a polynomial under the generators")
    p.add_argument("--poly", required=True, help="polynomial file (JSON or text form)")
    p.add_argument("--genus", type=_positive_int, help="genus for text polynomials")

    sp = group("symplectic", "symplectic matrices and points of H_g")
    p = leaf(sp, "member", "congruence subgroup membership")
    p.add_argument("--matrix", required=True, help="JSON 2g x 2g matrix (inline or file), or J:g")
    p = leaf(sp, "act", "apply a symplectic matrix to tau")
    p.add_argument("--matrix", required=True)
    tau_args(p)
    p = leaf(sp, "random", "sample a seeded point")
    p.add_argument("--genus", type=_positive_int, required=True)
    p.add_argument("--spread", type=float, default=1.0)
    p.add_argument("--height", type=float, default=1.0)
    p.add_argument("--diagonal", action="store_true")

    th = group("theta", "theta functions")
    p = leaf(th, "eval", "theta[a; b](tau, z)")
    tau_args(p)
    p.add_argument("--a", help="comma-separated rationals, e.g. 1/2,0")
    p.add_argument("--b")
    p.add_argument("--z", help="comma-separated complex numbers")
    p = leaf(th, "identity", "residual of a classical identity")
    tau_args(p)
    p.add_argument("--which", choices=("addition", "fourth", "tS", "J"), required=True)
    p.add_argument("--S", help="symmetric integer matrix as JSON, for --which tS")
    p.add_argument("--residual-tol", type=float)
    p = leaf(th, "lattice", "theta series of the Construction-A lattice (g <= 2)")
    code_args(p)
    tau_args(p)

    tm = group("thetamap", "the theta map and the Schottky difference")
    p = leaf(tm, "eval", "Th_2 of a polynomial at tau")
    p.add_argument("--poly", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--genus", type=_positive_int, help="genus for text polynomials")
    p = leaf(tm, "schottky", "J^(g) = W(e8+e8) - W(d16+)")
    p.add_argument("--genus", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--emit-poly", action="store_true")
    p = leaf(tm, "vanish", "vanishing experiment for Th_2(J^(g))")
    p.add_argument("--genus", type=int, choices=(3, 4), required=True)
    p.add_argument("--points", type=_positive_int, default=5)
    p.add_argument("--diagonal-points", type=int)
    p.add_argument("--vanish-threshold", type=float, default=1e-6)
    p.add_argument("--nonvanish-threshold", type=float, default=1e-4)
    p.add_argument("--height", type=float, default=1.0)
    p.add_argument("--stream-check", action="store_true", help="also stream all codeword tuples (slow at g = 4)")

    tg = group("tangent", "tangent dimensions at completely reducible points")
    p = leaf(tg, "report", "t_g against 2^g - 1")
    p.add_argument("--genus", type=_positive_int, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--list", action="store_true", help="list the minimal generators")

    p = sub.add_parser("verify", help="run the acceptance suite", parents=[common])
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--d16-glue", help="override the d16+ glue vector (fault injection)")
    return parser


GLOBAL_DEFAULTS = {"seed": 0, "tol": DEFAULT_TOL, "fmt": "json", "output": None, "threads": 1}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = vars(ns).copy()
    g = {k: opts.pop(k, v) for k, v in GLOBAL_DEFAULTS.items()}
    command = opts.pop("command")
    subcommand = opts.pop("subcommand", None)
    return RunConfig(command, subcommand, g["seed"], g["tol"], g["fmt"], g["output"], g["threads"], opts)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = config_from_args(ns)
    try:
        code, text = run(cfg)
    except (UsageError, CodeError, SiegelPointError, ThetaError, LatticeError, ValueError, OSError, KeyError) as exc:
        print(f"theta-code-lab: error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
