"""The acceptance suite as named checks, and the runner behind ``verify``.

Each check returns a ``CheckResult``.  Seeded points come from one
``SeedSequence``: check k always uses child k, so a check's points do not
depend on which other checks run.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .codes import D16_GLUE, CodeError, build_d16_plus, named_code, weight_enumerator
from .hgroup import (
    elementary_symmetric,
    group_closure,
    invariance_report,
    molien_dimension,
    projection_rank,
)
from .symplectic import random_siegel_point
from .tangent import embedding_report, t_formula
from .theta import (
    Characteristic,
    addition_formula_residual,
    construction_a,
    fourth_order_residual,
    j_transform,
    lattice_theta,
    shell_counts,
    transform_residual_tS,
)
from .thetamap import schottky_polynomial, th2_evaluate, vanishing_experiment

__all__ = ["CHECKS", "CheckResult", "report_json", "run_check", "verify_all"]

SCHEMA = "theta-code-lab/1"


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return f"[{verdict}] {self.number}. {self.name} ({self.elapsed:.1f} s)"

    def to_json(self) -> dict:
        # elapsed time is left out so that reports are reproducible
        return {"number": self.number, "name": self.name, "passed": self.passed, "details": self.details}


def _round(x, digits: int = 15):
    if isinstance(x, float):
        return float(f"{x:.{digits}g}") if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {k: _round(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v, digits) for v in x]
    if isinstance(x, (np.floating,)):
        return _round(float(x), digits)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _rng(seed: int, k: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(k + 1)[k])


# -- individual checks -----------------------------------------------------------


def check_tangent(seed: int = 0, **_) -> CheckResult:
    rows = {}
    ok = True
    for g in range(1, 7):
        r = embedding_report(g)
        rows[str(g)] = {"t_formula": r.t_formula, "t_bruteforce": r.t_bruteforce, "ambient": r.ambient}
        ok &= r.t_formula == r.t_bruteforce and bool(r.classified)
        ok &= r.obstructed == (g >= 4)
    ok &= t_formula(3) == 7 == 2 ** 3 - 1
    ok &= t_formula(4) == 17 > 2 ** 4 - 1
    return CheckResult(1, "tangent dimensions t_g = brute-force generator count, g = 1..6", ok, {"genus": rows})


def _codes(glue: str):
    return {"e8": named_code("e8"), "e8_plus_e8": named_code("e8_plus_e8"), "d16_plus": build_d16_plus(glue)}


def check_invariance(seed: int = 0, glue: str = D16_GLUE, **_) -> CheckResult:
    name = "code polynomials of e8, e8+e8, d16+ are H_g-invariant, g = 1..3"
    try:
        codes = _codes(glue)
    except CodeError as exc:
        return CheckResult(2, name, False, {"construction_error": str(exc)})
    rows = {}
    ok = True
    for cname, code in codes.items():
        for g in (1, 2, 3):
            inv, failing = invariance_report(weight_enumerator(code, g))
            rows[f"{cname}/g{g}"] = True if inv else failing
            ok &= inv
    return CheckResult(2, name, ok, {"invariant": rows})


def check_low_genus_kernel(seed: int = 0, **_) -> CheckResult:
    sizes = {f"g{g}": len(schottky_polynomial(g)) for g in (1, 2)}
    ok = all(v == 0 for v in sizes.values())
    return CheckResult(3, "J^(1) and J^(2) are the zero polynomial", ok, {"terms": sizes})


def check_genus3_kernel(seed: int = 0, **_) -> CheckResult:
    rng = _rng(seed, 4)
    J = schottky_polynomial(3)
    ratios = []
    for _ in range(5):
        tau = random_siegel_point(3, rng)
        ratios.append(th2_evaluate(J, tau).ratio)
    ok = len(J) > 0 and max(ratios) < 1e-6
    return CheckResult(
        4, "J^(3) != 0 but Th_2(J^(3)) vanishes at 5 random points", ok, {"terms": len(J), "ratios": ratios}
    )


def check_genus4_obstruction(seed: int = 0, full: bool = False, workers: int = 1, **_) -> CheckResult:
    rng = _rng(seed, 5)
    s = int(rng.integers(2 ** 63))
    rep = vanishing_experiment(4, 3, s, n_diagonal=2, stream_check=full, workers=workers)
    ok = rep.passed
    details = {
        "generic_ratios": [p["ratio"] for p in rep.points if p["kind"] == "generic"],
        "diagonal_ratios": [p["ratio"] for p in rep.points if p["kind"] == "diagonal"],
        "stream_check": full,
    }
    if full:
        diffs = [p["stream_difference"] for p in rep.points]
        details["stream_differences"] = diffs
        ok &= max(diffs) < 1e-8
    return CheckResult(5, "Th_2(J^(4)) vanishes on diagonal points, not on generic ones", ok, details)


def check_theta_identities(seed: int = 0, **_) -> CheckResult:
    rng = _rng(seed, 6)
    worst = {"addition": 0.0, "fourth": 0.0, "tS": 0.0, "J": 0.0, "J_scalar_spread": 0.0, "J_modulus": 0.0}
    for g, count in ((1, 20), (2, 20), (3, 5)):
        even = [m for m in Characteristic.all(g) if m.is_even]
        mprimes = list(itertools.product(range(4), repeat=g))
        shifts = [S for _, S in elementary_symmetric(g)]
        for _ in range(count):
            tau = random_siegel_point(g, rng)
            S = rng.integers(-2, 3, (g, g))
            S = np.triu(S) + np.triu(S, 1).T
            worst["addition"] = max(worst["addition"], *(addition_formula_residual(m, tau) for m in even))
            worst["fourth"] = max(worst["fourth"], *(fourth_order_residual(mp, tau) for mp in mprimes))
            worst["tS"] = max(worst["tS"], *(transform_residual_tS(s, tau) for s in shifts + [S]))
            jt = j_transform(tau)
            worst["J"] = max(worst["J"], jt.residual)
            worst["J_scalar_spread"] = max(worst["J_scalar_spread"], jt.scalar_spread)
            worst["J_modulus"] = max(worst["J_modulus"], float(jt.modulus_error))
    ok = (
        worst["addition"] < 1e-8
        and worst["fourth"] < 1e-8
        and worst["tS"] < 1e-9
        and worst["J"] < 1e-8
        and worst["J_scalar_spread"] < 1e-8
        and worst["J_modulus"] < 1e-8
    )
    return CheckResult(6, "theta identities (addition, fourth order, t(S), J) at g = 1, 2, 3", ok, {"max_residual": worst})


# genus-2 lattice sums need a larger Im(tau) to keep the norm cutoff small
LATTICE_HEIGHT = {1: 1.0, 2: 3.0}


def check_construction_a(seed: int = 0, **_) -> CheckResult:
    rng = _rng(seed, 7)
    e8 = named_code("e8")
    lat = construction_a(e8)
    shells = shell_counts(lat, 4)
    worst = 0.0
    for g, count in ((1, 10), (2, 3)):
        W = weight_enumerator(e8, g)
        for _ in range(count):
            tau = random_siegel_point(g, rng, height=LATTICE_HEIGHT[g])
            a = th2_evaluate(W, tau).value
            b = lattice_theta(lat, tau).value
            worst = max(worst, abs(a - b) / abs(b))
    ok = worst < 1e-8 and shells[2] == 240
    return CheckResult(
        7, "Th_2(W_e8) equals the E8 lattice theta series", ok, {"max_relative_error": worst, "norm2_vectors": shells[2]}
    )


def check_molien(seed: int = 0, **_) -> CheckResult:
    closure = group_closure(1)
    rows = {}
    ok = True
    for d in (2, 4, 6, 8, 10, 12):
        m = molien_dimension(closure, d)
        r = projection_rank(closure, d)
        rows[str(d)] = [m, r]
        ok &= m == r
    return CheckResult(8, "Molien series matches Reynolds projection rank, g = 1", ok, {"order": closure.order, "dims": rows})


CHECKS: list[tuple[int, Callable[..., CheckResult]]] = [
    (1, check_tangent),
    (2, check_invariance),
    (3, check_low_genus_kernel),
    (4, check_genus3_kernel),
    (5, check_genus4_obstruction),
    (6, check_theta_identities),
    (7, check_construction_a),
    (8, check_molien),
]


def run_check(number: int, **kwargs) -> CheckResult:
    fn = dict(CHECKS)[number]
    t0 = time.perf_counter()
    res = fn(**kwargs)
    res.elapsed = time.perf_counter() - t0
    res.details = _round(res.details)
    return res


def report_json(results: list[CheckResult], profile: str, seed: int) -> str:
    doc = {
        "schema": SCHEMA,
        "profile": profile,
        "seed": seed,
        "checks": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def verify_all(
    profile: str = "quick",
    seed: int = 0,
    glue: str = D16_GLUE,
    workers: int = 1,
    echo: Callable[[str], None] | None = None,
) -> tuple[list[CheckResult], str]:
    """Run checks 1-8, then the determinism check 9 (a second run of 1-8 compared byte for byte).

    ``quick`` evaluates the genus-4 experiment through the exact polynomial only;
    ``full`` adds the tuple-streaming cross-check.
    """
    if profile not in ("quick", "full"):
        raise ValueError("profile must be 'quick' or 'full'")
    kwargs = {"seed": seed, "glue": glue, "full": profile == "full", "workers": workers}
    results = []
    for number, _ in CHECKS:
        res = run_check(number, **kwargs)
        results.append(res)
        if echo:
            echo(res.line())
    t0 = time.perf_counter()
    first = report_json(results, profile, seed)
    # the streaming cross-check is not repeated
    again = [
        results[n - 1] if n == 5 and profile == "full" else run_check(n, **kwargs) for n, _ in CHECKS
    ]
    second = report_json(again, profile, seed)
    det = CheckResult(9, "verify_all is deterministic for a fixed seed", first == second,
                      {"report_bytes": len(first.encode())})
    det.elapsed = time.perf_counter() - t0
    results.append(det)
    if echo:
        echo(det.line())
    return results, report_json(results, profile, seed)
