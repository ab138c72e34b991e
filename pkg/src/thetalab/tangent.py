"""Minimal generators of the K-invariant monomials in the entries of a symmetric matrix.

K is the group of diagonal sign matrices acting on symmetric g x g matrices by
X -> eps X eps, so X_ij picks up eps_i eps_j.  A monomial is invariant when every
index i has even total degree in the off-diagonal variables X_ij, j != i.  The
number of minimal invariant monomials is the tangent dimension

    t_g = g + C(g, 2) + 1/2 sum_{h=3}^{g} C(g, h) (h - 1)!,

with the last sum empty for g <= 2.  X_ii, X_ij^2 and the squarefree cycles
X_{i1 i2} X_{i2 i3} ... X_{ih i1} are the minimal ones; a support of h >= 3
indices carries (h - 1)!/2 distinct cycles.  Keeping only cycles whose indices
increase along the cycle would give g + sum_{h>=2} C(g, h) = 2^g - 1 generators
for every g, so the count really depends on taking all cyclic orders.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial

__all__ = [
    "TangentReport",
    "classify",
    "embedding_report",
    "increasing_cycle_count",
    "minimal_generators",
    "monomial_name",
    "t_formula",
]

BRUTE_FORCE_LIMIT = 6

Monomial = tuple[tuple[tuple[int, int], int], ...]  # ((i, j), exponent) with i <= j, 1-based


def t_formula(g: int) -> int:
    if g < 1:
        raise ValueError("genus must be positive")
    cycles = sum(comb(g, h) * factorial(h - 1) for h in range(3, g + 1))
    return g + comb(g, 2) + cycles // 2


def increasing_cycle_count(g: int) -> int:
    """Generators if each support contributed a single cycle: equals 2^g - 1."""
    return g + sum(comb(g, h) for h in range(2, g + 1))


def _variables(g: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, g + 1) for j in range(i, g + 1)]


def _is_invariant(exps: tuple[int, ...], variables, g: int) -> bool:
    deg = [0] * (g + 1)
    for (i, j), e in zip(variables, exps):
        if e and i != j:
            deg[i] += e
            deg[j] += e
    return all(d % 2 == 0 for d in deg)


def _compositions(total: int, parts: int):
    """Exponent vectors with the given number of parts summing to ``total``."""
    for bars in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def minimal_generators(g: int) -> list[Monomial]:
    """Brute force over all monomials of degree <= g.

    A closed walk decomposition shows every invariant monomial is a product of
    invariant monomials of degree <= g, so minimal generators have degree <= g
    and minimality only needs divisibility by lower-degree invariants.
    """
    if not 1 <= g <= BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to 1 <= g <= {BRUTE_FORCE_LIMIT}")
    variables = _variables(g)
    nv = len(variables)
    invariant: set[tuple[int, ...]] = set()
    minimal = []
    for d in range(1, g + 1):
        for exps in _compositions(d, nv):
            if not _is_invariant(exps, variables, g):
                continue
            invariant.add(exps)
            # proper nonconstant divisors
            ranges = [range(e + 1) for e in exps]
            reducible = False
            for div in itertools.product(*ranges):
                s = sum(div)
                if 0 < s < d and div in invariant:
                    reducible = True
                    break
            if not reducible:
                minimal.append(tuple((v, e) for v, e in zip(variables, exps) if e))
    minimal.sort(key=lambda m: (sum(e for _, e in m), _cycle_order(m) or [], m))
    return minimal


def _cycle_order(m: Monomial) -> list[int] | None:
    """Vertex sequence of a squarefree cycle, smallest index first, smaller neighbour second."""
    if any(e != 1 or i == j for (i, j), e in m) or len(m) < 3:
        return None
    adj: dict[int, list[int]] = {}
    for (i, j), _ in m:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    if any(len(v) != 2 for v in adj.values()):
        return None
    start = min(adj)
    walk = [start, min(adj[start])]
    while len(walk) < len(adj):
        a, b = adj[walk[-1]]
        nxt = a if a != walk[-2] else b
        if nxt == start:
            return None
        walk.append(nxt)
    # a single cycle must close up through every vertex
    if start not in adj[walk[-1]]:
        return None
    return walk


def classify(m: Monomial) -> str:
    """'diagonal', 'square', 'cycle' or 'other'."""
    if len(m) == 1:
        (i, j), e = m[0]
        if i == j and e == 1:
            return "diagonal"
        if i != j and e == 2:
            return "square"
    if _cycle_order(m) is not None:
        return "cycle"
    return "other"


def monomial_name(m: Monomial) -> str:
    walk = _cycle_order(m)
    if walk is not None:
        edges = zip(walk, walk[1:] + walk[:1])
        return "*".join(f"X{min(a, b)}{max(a, b)}" for a, b in edges)
    return "*".join(f"X{i}{j}" + (f"^{e}" if e > 1 else "") for (i, j), e in m)


@dataclass(frozen=True)
class TangentReport:
    genus: int
    t_formula: int
    t_bruteforce: int | None
    ambient: int
    obstructed: bool
    classified: bool | None = None

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "t_formula": self.t_formula,
            "t_bruteforce": self.t_bruteforce,
            "ambient": self.ambient,
            "obstructed": self.obstructed,
            "classified": self.classified,
        }


def embedding_report(g: int, brute_force: bool = True) -> TangentReport:
    """Compare t_g with 2^g - 1; the brute-force count runs for g <= 6."""
    t = t_formula(g)
    ambient = (1 << g) - 1
    bf = classified = None
    if brute_force and g <= BRUTE_FORCE_LIMIT:
        gens = minimal_generators(g)
        bf = len(gens)
        classified = all(classify(m) != "other" for m in gens)
    return TangentReport(g, t, bf, ambient, t > ambient, classified)
