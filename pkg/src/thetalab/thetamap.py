"""The theta map Th_2 (F_a -> theta_2[a]) and the Schottky difference J^(g)."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import SparsePolynomial
from .codes import BinaryCode, named_code, weight_enumerator
from .symplectic import SiegelPoint, random_siegel_point
from .theta import DEFAULT_TOL, _as_tau, theta2_values

__all__ = [
    "EvaluationReport",
    "VanishingReport",
    "schottky_polynomial",
    "stream_th2",
    "th2_evaluate",
    "vanishing_experiment",
]

VANISH_THRESHOLD = 1e-6
NONVANISH_THRESHOLD = 1e-4
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class EvaluationReport:
    poly_id: str
    tau: SiegelPoint
    value: complex
    tail_bound: float
    normalization: float

    @property
    def ratio(self) -> float:
        if self.normalization == 0:
            return 0.0
        return abs(self.value) / self.normalization

    def to_json(self) -> dict:
        return {
            "poly": self.poly_id,
            "tau": self.tau.to_json(),
            "value": [self.value.real, self.value.imag],
            "tail_bound": self.tail_bound,
            "normalization": self.normalization,
            "ratio": self.ratio,
        }


def th2_evaluate(p: SparsePolynomial, tau, tol: float = DEFAULT_TOL, poly_id: str = "") -> EvaluationReport:
    """Substitute theta_2[a](tau) for F_a.

    The tail bound combines the truncation bounds of the theta constants (through
    prod(|t| + b)^e - prod |t|^e per monomial) with a rounding estimate.
    """
    T = _as_tau(tau)
    g = T.shape[0]
    if p.genus != g:
        raise ValueError(f"polynomial has genus {p.genus}, tau has genus {g}")
    if any(d % 2 for d in p.degrees()):
        raise ValueError("Th_2 is applied to polynomials of even degree")
    vals, bounds = theta2_values(T, tol)
    contrib = p.contributions(vals)
    if not len(contrib):
        return EvaluationReport(poly_id, SiegelPoint(T), 0j, 0.0, 0.0)
    mags = np.abs(contrib)
    upper = np.abs(p.contributions(np.abs(vals) + bounds))
    deg = max(p.degrees())
    rounding = _EPS * float(mags.sum()) * (2 * deg + math.log2(len(mags)) + 2)
    bound = float((upper - mags).sum()) + rounding
    return EvaluationReport(poly_id, SiegelPoint(T), complex(contrib.sum()), bound, float(mags.max()))


def schottky_polynomial(g: int) -> SparsePolynomial:
    """J^(g) = W^(g)(e8 + e8) - W^(g)(d16+), computed exactly for g <= 4."""
    if not 1 <= g <= 4:
        raise ValueError("genus must be between 1 and 4")
    a = weight_enumerator(named_code("e8_plus_e8"), g)
    b = weight_enumerator(named_code("d16_plus"), g)
    return a - b


# -- streaming evaluation --------------------------------------------------------


def stream_th2(code: BinaryCode, g: int, values, workers: int = 1) -> complex:
    """sum over g-tuples of codewords of prod_j values[column index j], without forming W_C.

    The tuple is split into two halves of sizes gl = g // 2 and g - gl with
    column index a_j = p_j + 2^gl q_j.  Then prod_j values[a_j] = exp(A_P . B_Q),
    where A_P one-hot encodes (j, p_j) and B_Q[j, p] = log values[p + 2^gl q_j],
    so every block of tuples is a single matrix product followed by exp.
    """
    values = np.asarray(values, dtype=complex)
    if values.shape != (1 << g,):
        raise ValueError("need 2^g values")
    if not np.all(values):
        raise ValueError("streaming needs nonzero theta values")
    n = code.length
    words = np.array(code.codewords, dtype=np.int64)
    bits = (words[:, None] >> np.arange(n)[None, :]) & 1
    gl = g // 2
    gr = g - gl

    def partial(k: int) -> np.ndarray:
        # all k-tuples, column indices in 0 .. 2^k - 1
        idx = np.zeros((1, n), dtype=np.int64)
        for i in range(k):
            idx = (idx[:, None, :] + (bits[None, :, :] << i)).reshape(-1, n)
        return idx

    P = partial(gl)
    Q = partial(gr)
    logv = np.log(values).reshape(1 << gr, 1 << gl)  # rows q, columns p
    npl = 1 << gl
    A = np.zeros((len(P), n * npl))
    A[np.repeat(np.arange(len(P)), n), (np.arange(n)[None, :] * npl + P).ravel()] = 1.0
    B = logv[Q].reshape(len(Q), n * npl)  # B[Q, j * npl + p] = logv[q_j, p]

    block = max(1, 2_000_000 // len(Q))

    def run(start: int) -> complex:
        stop = min(start + block, len(P))
        return complex(np.exp(A[start:stop] @ B.T).sum())

    starts = range(0, len(P), block)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    return complex(math.fsum(z.real for z in parts) + 1j * math.fsum(z.imag for z in parts))


# -- vanishing experiment --------------------------------------------------------


@dataclass
class VanishingReport:
    genus: int
    seed: int
    vanish_threshold: float
    nonvanish_threshold: float
    points: list[dict] = field(default_factory=list)

    @property
    def expected(self) -> dict[str, str]:
        """Expected behaviour per point kind: 'vanish' or 'nonvanish'."""
        return {"diagonal": "vanish", "generic": "vanish" if self.genus <= 3 else "nonvanish"}

    @property
    def passed(self) -> bool:
        for pt in self.points:
            if self.expected[pt["kind"]] == "vanish":
                if not pt["ratio"] < self.vanish_threshold:
                    return False
            elif not pt["ratio"] >= self.nonvanish_threshold:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "seed": self.seed,
            "thresholds": {"vanish": self.vanish_threshold, "nonvanish": self.nonvanish_threshold},
            "expected": self.expected,
            "points": self.points,
            "verdict": "pass" if self.passed else "fail",
        }


def vanishing_experiment(
    g: int,
    n_points: int = 5,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    *,
    n_diagonal: int | None = None,
    vanish: float = VANISH_THRESHOLD,
    nonvanish: float = NONVANISH_THRESHOLD,
    height: float = 1.0,
    stream_check: bool = False,
    workers: int = 1,
) -> VanishingReport:
    """Evaluate Th_2(J^(g)) at seeded generic and diagonal points of H_g.

    With ``stream_check`` every point is also evaluated by streaming all codeword
    tuples of both codes (``stream_th2``) and the difference is recorded.
    """
    if g not in (3, 4):
        raise ValueError("the experiment is defined for genus 3 and 4")
    J = schottky_polynomial(g)
    n_diagonal = n_points if n_diagonal is None else n_diagonal
    rng = np.random.default_rng(seed)
    generic_rng, diag_rng = rng.spawn(2)
    taus = [("generic", random_siegel_point(g, generic_rng, height=height)) for _ in range(n_points)]
    taus += [
        ("diagonal", random_siegel_point(g, diag_rng, height=height, diagonal=True))
        for _ in range(n_diagonal)
    ]
    report = VanishingReport(g, seed, vanish, nonvanish)
    for kind, tau in taus:
        ev = th2_evaluate(J, tau, tol, poly_id=f"J^({g})")
        entry = {
            "kind": kind,
            "tau": tau.to_json(),
            "value": [ev.value.real, ev.value.imag],
            "normalization": ev.normalization,
            "tail_bound": ev.tail_bound,
            "ratio": ev.ratio,
        }
        if stream_check:
            vals, _ = theta2_values(tau, tol)
            s = stream_th2(named_code("e8_plus_e8"), g, vals, workers) - stream_th2(
                named_code("d16_plus"), g, vals, workers
            )
            entry["stream_difference"] = abs(s - ev.value) / ev.normalization
        report.points.append(entry)
    return report
