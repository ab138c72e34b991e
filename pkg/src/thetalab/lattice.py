"""Even unimodular lattices from codes (Construction A) and their theta series.

Vectors are stored through integer coordinates x with v = x / sqrt(2), so the
norm (v, v) = |x|^2 / 2 and all inner products are exact integers.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .codes import BinaryCode, CodeError, is_doubly_even_self_dual

__all__ = [
    "EvenLattice",
    "LatticeError",
    "construction_a",
    "lattice_theta",
    "shell_counts",
]

MAX_VECTORS_G1 = 5_000_000
MAX_VECTORS_G2 = 60_000
MAX_NORM = 64


class LatticeError(ArithmeticError):
    pass


def integer_determinant(M) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss elimination)."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1


@dataclass(frozen=True, eq=False)
class EvenLattice:
    """Lattice spanned by the rows of ``basis``; ``coords`` are the rows times sqrt(2)."""

    coords: np.ndarray
    code: BinaryCode | None = None
    basis: np.ndarray = field(init=False)
    gram: np.ndarray = field(init=False)

    def __post_init__(self):
        X = np.array(self.coords, dtype=np.int64)
        if X.ndim != 2 or X.shape[0] != X.shape[1]:
            raise LatticeError("a full-rank square basis is required")
        G2 = X @ X.T
        if np.any(G2 % 2):
            raise LatticeError("inner products are not integral")
        G = G2 // 2
        basis = X / math.sqrt(2)
        if np.abs(basis @ basis.T - G).max() > 1e-10:
            raise LatticeError("gram matrix does not match the basis")
        if np.any(np.diag(G) % 2):
            raise LatticeError("lattice is not even")
        if integer_determinant(G) != 1:
            raise LatticeError("lattice is not unimodular")
        for name, val in (("coords", X), ("basis", basis), ("gram", G)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def vectors(self, max_norm: int) -> tuple[np.ndarray, np.ndarray]:
        """All lattice vectors of norm <= max_norm as (integer coords, norms)."""
        if self.code is None:
            raise LatticeError("vector enumeration needs the underlying code")
        return _coset_vectors(self.code, int(max_norm))


def construction_a(code: BinaryCode) -> EvenLattice:
    """{x / sqrt(2) : x in Z^n, x mod 2 in C} for a doubly-even self-dual C."""
    if not is_doubly_even_self_dual(code):
        raise CodeError(f"{code.name or 'code'} is not doubly-even self-dual")
    n = code.length
    rows = []
    pivots = set()
    for r in code.rows:
        rows.append([(r >> j) & 1 for j in range(n)])
        pivots.add((r & -r).bit_length() - 1)
    for j in range(n):
        if j not in pivots:
            e = [0] * n
            e[j] = 2
            rows.append(e)
    return EvenLattice(np.array(rows, dtype=np.int64), code)


# -- enumeration ---------------------------------------------------------------


def _half_vectors(parity: tuple[int, ...], bound: int) -> dict[int, np.ndarray]:
    """Integer vectors with prescribed parities and |x|^2 <= bound, grouped by |x|^2."""
    r = math.isqrt(bound)
    cols = []
    for p in parity:
        vals = np.arange(-r, r + 1)
        cols.append(vals[(vals - p) % 2 == 0])
    if not cols:
        return {0: np.zeros((1, 0), dtype=np.int64)}
    pts = np.zeros((1, 0), dtype=np.int64)
    sq = np.zeros(1, dtype=np.int64)
    for vals in cols:
        # extend one coordinate at a time, pruning by the running norm
        new_sq = (sq[:, None] + vals[None, :] ** 2).ravel()
        keep = new_sq <= bound
        idx = np.nonzero(keep)[0]
        pts = np.concatenate(
            [pts[idx // len(vals)], vals[idx % len(vals)][:, None]], axis=1
        )
        sq = new_sq[keep]
    return {int(s): pts[sq == s] for s in np.unique(sq)}


def _coset_vectors(code: BinaryCode, max_norm: int) -> tuple[np.ndarray, np.ndarray]:
    if max_norm > MAX_NORM:
        raise LatticeError(f"norm cutoff {max_norm} exceeds {MAX_NORM}")
    n = code.length
    bound = 2 * max_norm
    h = n // 2
    cache: dict[tuple, dict] = {}

    def half(par):
        if par not in cache:
            cache[par] = _half_vectors(par, bound)
        return cache[par]

    out = []
    for c in code.codewords:
        bits = tuple((c >> j) & 1 for j in range(n))
        L, R = half(bits[:h]), half(bits[h:])
        for sl, xl in L.items():
            for sr, xr in R.items():
                if sl + sr > bound:
                    continue
                a = np.repeat(xl, len(xr), axis=0)
                b = np.tile(xr, (len(xl), 1))
                out.append(np.concatenate([a, b], axis=1))
    X = np.concatenate(out, axis=0)
    norms = (X * X).sum(axis=1) // 2
    order = np.lexsort(X.T[::-1])
    order = order[np.argsort(norms[order], kind="stable")]
    return X[order], norms[order]


def shell_counts(lattice: EvenLattice, max_norm: int) -> dict[int, int]:
    """Number of lattice vectors of each norm 0, 2, ..., max_norm."""
    _, norms = lattice.vectors(max_norm)
    vals, counts = np.unique(norms, return_counts=True)
    out = {k: 0 for k in range(0, max_norm + 1, 2)}
    out.update({int(v): int(c) for v, c in zip(vals, counts)})
    return out


# -- theta series --------------------------------------------------------------


def _z_majorant(t: float, rank: int) -> float:
    """Upper bound for sum_{x in Z^rank} exp(-pi t |x|^2 / 2), which majorizes theta_L(it)."""
    K = 1 + int(math.ceil(math.sqrt(80 / (math.pi * t))))
    s = 1 + 2 * sum(math.exp(-math.pi * t * k * k / 2) for k in range(1, K + 1))
    # remaining terms are below a geometric series
    r = math.exp(-math.pi * t * (K + 1))
    s += 2 * math.exp(-math.pi * t * (K + 1) ** 2 / 2) / (1 - r)
    return s ** rank


def _shell_tail(lam: float, cutoff: int, rank: int) -> float:
    """Bound for the sum over vectors of norm > cutoff of exp(-pi lam norm).

    For 0 < s < lam: exp(-pi lam n) <= exp(-pi (lam - s)(cutoff + 2)) exp(-pi s n) when
    n >= cutoff + 2, and the remaining sum is at most the majorant at s.
    """
    best = math.inf
    for i in range(1, 100):
        s = lam * i / 100
        best = min(best, math.exp(-math.pi * (lam - s) * (cutoff + 2)) * _z_majorant(s, rank))
    return best


def _cutoff(lam: float, g: int, rank: int, tol: float) -> tuple[int, float]:
    full = _z_majorant(lam, rank)
    for N in range(0, MAX_NORM + 1, 2):
        tail = _shell_tail(lam, N, rank)
        bound = tail if g == 1 else 2 * tail * full
        if bound < tol:
            return N, bound
    raise LatticeError("norm cutoff infeasible: Im(tau) too small for the tolerance")


def _estimated_count(rank: int, N: int) -> float:
    # volume of the ball |v|^2 <= N, a rough proxy for the vector count
    return math.pi ** (rank / 2) / math.gamma(rank / 2 + 1) * (N + 1) ** (rank / 2)


_PAIR_CACHE: dict[tuple, dict] = {}


def _pair_histogram(lattice: EvenLattice, N: int) -> dict[tuple[int, int, int], int]:
    """Counts of (norm v1, norm v2, (v1, v2)) over pairs of vectors of norm <= N."""
    key = (lattice.code.rows, lattice.code.length, N)
    if key in _PAIR_CACHE:
        return _PAIR_CACHE[key]
    X, norms = lattice.vectors(N)
    n_levels = N // 2 + 1
    span = 2 * N + 1
    # v1 and -v1 give the same distribution, so only nonzero v1 with a positive
    # leading coordinate are visited (weight 2), plus v1 = 0
    nz = X[norms > 0]
    lead = nz[np.arange(len(nz)), (nz != 0).argmax(axis=1)]
    half = nz[lead > 0]
    Xf = X.astype(np.float64)
    n2 = norms // 2
    hist = np.zeros(n_levels * n_levels * span, dtype=np.int64)
    chunk = max(1, 4_000_000 // max(1, len(X)))
    for start in range(0, len(half), chunk):
        blk = half[start:start + chunk]
        ip = (blk.astype(np.float64) @ Xf.T).astype(np.int64) // 2
        n1 = (blk * blk).sum(axis=1) // 4
        k = (n1[:, None] * n_levels + n2[None, :]) * span + (ip + N)
        hist += 2 * np.bincount(k.ravel(), minlength=hist.size)
    # v1 = 0
    k0 = n2 * span + N
    hist += np.bincount(k0, minlength=hist.size)
    out = {}
    for idx in np.nonzero(hist)[0]:
        a, rest = divmod(int(idx), n_levels * span)
        b, c = divmod(rest, span)
        out[(2 * a, 2 * b, c - N)] = int(hist[idx])
    _PAIR_CACHE[key] = out
    return out


def lattice_theta(lattice: EvenLattice, tau, tol: float = 1e-10):
    """theta_L(tau) = sum over g-tuples of lattice vectors of e(sum_ij (v_i, v_j) tau_ij / 2), g <= 2."""
    from .theta import ThetaValue, _as_tau

    T = _as_tau(tau)
    g = T.shape[0]
    if g > 2:
        raise LatticeError("lattice theta series are implemented for genus 1 and 2")
    lam = float(np.linalg.eigvalsh(T.imag).min())
    N, bound = _cutoff(lam, g, lattice.rank, tol)
    limit = MAX_VECTORS_G1 if g == 1 else MAX_VECTORS_G2
    if _estimated_count(lattice.rank, N) > 4 * limit:
        raise LatticeError(f"norm cutoff {N} needs too many vectors; increase Im(tau)")
    if g == 1:
        shells = shell_counts(lattice, N)
        t = complex(T[0, 0])
        value = sum(c * cmath.exp(1j * math.pi * n * t) for n, c in shells.items())
        return ThetaValue(complex(value), bound)
    hist = _pair_histogram(lattice, N)
    keys = np.array(list(hist.keys()), dtype=float)
    counts = np.array(list(hist.values()), dtype=float)
    expo = keys[:, 0] * T[0, 0] + keys[:, 1] * T[1, 1] + 2 * keys[:, 2] * T[0, 1]
    value = complex((counts * np.exp(1j * math.pi * expo)).sum())
    return ThetaValue(value, bound)
