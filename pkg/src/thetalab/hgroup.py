"""The finite unitary group H_g = <T_g, D_S> acting on polynomials in F_a.

T_g = ((1+i)/2)^g ((-1)^(a.b)) and D_S = diag(i^(a'Sa)), rows and columns in
the little-endian index order of :mod:`thetalab.algebra`.  Invariance is checked
on generators only; the full closure is built for g <= 2.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algebra import GaussianRational, I, SparsePolynomial, apply_matrix_substitution, bits_of

__all__ = [
    "GroupClosure",
    "UnitaryAction",
    "apply_t_g",
    "check_invariance",
    "d_s_matrix",
    "group_closure",
    "invariance_report",
    "molien_dimension",
    "projection_rank",
    "reynolds_project",
    "t_g_matrix",
]

_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)
_OMEGA = GaussianRational(Fraction(1, 2), Fraction(1, 2))  # (1+i)/2
_I_POWERS = (GaussianRational(1), I, GaussianRational(-1), -I)


@dataclass(frozen=True)
class UnitaryAction:
    """A 2^g x 2^g matrix over the Gaussian rationals."""

    genus: int
    entries: tuple[tuple[GaussianRational, ...], ...]

    def __post_init__(self):
        n = 1 << self.genus
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError(f"UnitaryAction of genus {self.genus} must be {n}x{n}")

    @classmethod
    def from_rows(cls, genus: int, rows) -> "UnitaryAction":
        return cls(genus, tuple(tuple(GaussianRational.coerce(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, genus: int) -> "UnitaryAction":
        n = 1 << genus
        return cls.from_rows(genus, [[int(a == b) for b in range(n)] for a in range(n)])

    @property
    def size(self) -> int:
        return 1 << self.genus

    def __matmul__(self, other: "UnitaryAction") -> "UnitaryAction":
        if self.genus != other.genus:
            raise ValueError("genus mismatch")
        n = self.size
        cols = list(zip(*other.entries))
        rows = []
        for r in self.entries:
            row = []
            for c in cols:
                s = _ZERO
                for x, y in zip(r, c):
                    if x and y:
                        s = s + x * y
                row.append(s)
            rows.append(tuple(row))
        return UnitaryAction(self.genus, tuple(rows))

    def scale(self, c) -> "UnitaryAction":
        c = GaussianRational.coerce(c)
        return UnitaryAction(self.genus, tuple(tuple(x * c for x in r) for r in self.entries))

    def conj_transpose(self) -> "UnitaryAction":
        return UnitaryAction(
            self.genus, tuple(tuple(x.conjugate() for x in col) for col in zip(*self.entries))
        )

    def is_unitary(self) -> bool:
        return self @ self.conj_transpose() == UnitaryAction.identity(self.genus)

    def is_diagonal(self) -> bool:
        return all(not x for a, r in enumerate(self.entries) for b, x in enumerate(r) if a != b)

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in r] for r in self.entries], dtype=complex)

    def canonical(self) -> "UnitaryAction":
        """Representative of {M, -M}: first nonzero entry has re > 0, or re = 0 < im."""
        for r in self.entries:
            for x in r:
                if x:
                    if x.re < 0 or (x.re == 0 and x.im < 0):
                        return self.scale(-1)
                    return self
        return self


def _as_int_matrix(S) -> list[list[int]]:
    S = [[int(x) for x in row] for row in np.asarray(S, dtype=object).tolist()]
    g = len(S)
    if any(len(r) != g for r in S):
        raise ValueError("S must be square")
    if any(S[i][j] != S[j][i] for i in range(g) for j in range(g)):
        raise ValueError("S must be symmetric")
    return S


def _quadratic_exponent(S: list[list[int]], a: Sequence[int]) -> int:
    g = len(S)
    return sum(S[i][j] * a[i] * a[j] for i in range(g) for j in range(g))


def d_s_matrix(S) -> UnitaryAction:
    """diag(i^(a'Sa)) for an integral symmetric S."""
    S = _as_int_matrix(S)
    g = len(S)
    n = 1 << g
    diag = [_I_POWERS[_quadratic_exponent(S, bits_of(a, g)) % 4] for a in range(n)]
    rows = [[diag[a] if a == b else _ZERO for b in range(n)] for a in range(n)]
    return UnitaryAction.from_rows(g, rows)


def _hadamard_sign(a: int, b: int) -> int:
    return -1 if bin(a & b).count("1") % 2 else 1


def t_g_matrix(g: int) -> UnitaryAction:
    if g < 1:
        raise ValueError("genus must be positive")
    c = _OMEGA ** g
    n = 1 << g
    return UnitaryAction.from_rows(
        g, [[c if _hadamard_sign(a, b) > 0 else -c for b in range(n)] for a in range(n)]
    )


def elementary_symmetric(g: int) -> list[tuple[str, list[list[int]]]]:
    """The generating set E_ii and E_ij + E_ji, with labels."""
    out = []
    for i in range(g):
        S = [[0] * g for _ in range(g)]
        S[i][i] = 1
        out.append((f"D_E{i + 1}{i + 1}", S))
    for i, j in itertools.combinations(range(g), 2):
        S = [[0] * g for _ in range(g)]
        S[i][j] = S[j][i] = 1
        out.append((f"D_E{i + 1}{j + 1}+E{j + 1}{i + 1}", S))
    return out


def generators(g: int) -> list[tuple[str, UnitaryAction]]:
    return [(f"T_{g}", t_g_matrix(g))] + [(name, d_s_matrix(S)) for name, S in elementary_symmetric(g)]


# -- fast exact T_g substitution ---------------------------------------------


@lru_cache(maxsize=None)
def _pair_expansion(e: int, f: int) -> tuple[tuple[int, int], ...]:
    """Coefficients of x^(e+f-j) y^j in (x+y)^e (x-y)^f."""
    out = [0] * (e + f + 1)
    for i in range(e + 1):
        ci = math.comb(e, i)
        for j in range(f + 1):
            out[i + j] += ci * math.comb(f, j) * (-1) ** j
    return tuple((j, c) for j, c in enumerate(out) if c)


def _hadamard_stage(terms: dict, nv: int, bit: int) -> dict:
    pairs = [(a, a | (1 << bit)) for a in range(nv) if not (a >> bit) & 1]
    out: dict = {}
    for exps, (cr, ci) in terms.items():
        lists = [_pair_expansion(exps[a], exps[b]) for a, b in pairs]
        for combo in itertools.product(*lists):
            e = list(exps)
            mult = 1
            for (a, b), (j, c) in zip(pairs, combo):
                e[a] = exps[a] + exps[b] - j
                e[b] = j
                mult *= c
            key = tuple(e)
            pr, pi = out.get(key, (0, 0))
            out[key] = (pr + mult * cr, pi + mult * ci)
    return {k: v for k, v in out.items() if v != (0, 0)}


def apply_t_g(p: SparsePolynomial) -> SparsePolynomial:
    """``apply_matrix_substitution(t_g_matrix(g), p)`` via g exact Hadamard stages.

    T_g is ((1+i)/2)^g times a tensor power of the 2x2 Hadamard matrix, so the
    substitution factors into one butterfly per bit of the variable index.
    """
    g, nv = p.genus, p.nvars
    if p.is_zero():
        return p
    denom = math.lcm(*(d for _, c in p.items() for d in (c.re.denominator, c.im.denominator)))
    terms = {e: (int(c.re * denom), int(c.im * denom)) for e, c in p.items()}
    for bit in range(g):
        terms = _hadamard_stage(terms, nv, bit)
    scales: dict[int, GaussianRational] = {}
    out = {}
    for e, (cr, ci) in terms.items():
        d = sum(e)
        if d not in scales:
            scales[d] = (_OMEGA ** (g * d)) * GaussianRational(Fraction(1, denom))
        out[e] = GaussianRational(cr, ci) * scales[d]
    return SparsePolynomial(g, out)


def apply_action(M: UnitaryAction, p: SparsePolynomial) -> SparsePolynomial:
    if M.genus != p.genus:
        raise ValueError("genus mismatch")
    return apply_matrix_substitution(M, p)


def _require_even(p: SparsePolynomial):
    if p.is_zero():
        return
    if not p.is_homogeneous():
        raise ValueError("polynomial must be homogeneous")
    if p.degree % 2:
        raise ValueError("odd-degree polynomials are only defined up to sign under H_g")


def invariance_report(p: SparsePolynomial) -> tuple[bool, str | None]:
    """(invariant?, name of the first generator that moves p)."""
    _require_even(p)
    if p.is_zero():
        return True, None
    g = p.genus
    for name, S in elementary_symmetric(g):
        if apply_matrix_substitution(d_s_matrix(S), p) != p:
            return False, name
    if apply_t_g(p) != p:
        return False, f"T_{g}"
    return True, None


def check_invariance(p: SparsePolynomial) -> bool:
    return invariance_report(p)[0]


# -- closure for small genus --------------------------------------------------


class GroupClosure:
    """Elements of H_g / {+-1} for g <= 2.

    Elements are stored as Gaussian-integer numerator arrays over the common
    denominator 2^g; :attr:`elements` materializes exact ``UnitaryAction``s.
    """

    def __init__(self, genus: int, numerators: np.ndarray):
        self.genus = genus
        self._num = numerators  # shape (order, n, n), complex with integral parts
        self.scale = 1 << genus

    @property
    def order(self) -> int:
        return len(self._num)

    def __len__(self):
        return self.order

    def _to_action(self, num: np.ndarray) -> UnitaryAction:
        d = self.scale
        rows = [
            [GaussianRational(Fraction(int(z.real), d), Fraction(int(z.imag), d)) for z in r]
            for r in num
        ]
        return UnitaryAction.from_rows(self.genus, rows)

    @property
    def elements(self) -> list[UnitaryAction]:
        if not hasattr(self, "_elements"):
            self._elements = [self._to_action(m) for m in self._num]
        return self._elements

    def numeric(self) -> np.ndarray:
        return self._num / self.scale

    def contains(self, M: UnitaryAction) -> bool:
        key = _canonical_key(np.rint(M.to_numpy() * self.scale))
        return key in {_canonical_key(m) for m in self._num}


_CLOSURE_GUARD = 2


def _canonical_key(num: np.ndarray) -> bytes:
    flat = num.ravel()
    nz = np.flatnonzero(flat)
    first = flat[nz[0]]
    if first.real < 0 or (first.real == 0 and first.imag < 0):
        num = -num
    # adding 0.0 clears negative zeros so equal matrices hash equally
    return np.ascontiguousarray(num + 0.0).tobytes()


def _exact_numerators(M: UnitaryAction, scale: int) -> np.ndarray:
    out = np.zeros((M.size, M.size), dtype=complex)
    for a, r in enumerate(M.entries):
        for b, x in enumerate(r):
            re, im = x.re * scale, x.im * scale
            if re.denominator != 1 or im.denominator != 1:
                raise ArithmeticError("generator entries are not in 2^-g Z[i]")
            out[a, b] = complex(int(re), int(im))
    return out


@lru_cache(maxsize=None)
def group_closure(g: int) -> GroupClosure:
    """Breadth-first closure of the generators, identified up to sign."""
    if g < 1 or g > _CLOSURE_GUARD:
        raise ValueError(f"group closure is only built for 1 <= g <= {_CLOSURE_GUARD}")
    scale = 1 << g
    gens = [_exact_numerators(M, scale) for _, M in generators(g)]
    n = 1 << g
    ident = np.eye(n, dtype=complex) * scale
    seen = {_canonical_key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for X in frontier:
            for G in gens:
                Y = X @ G
                if np.any(np.mod(Y.real, scale)) or np.any(np.mod(Y.imag, scale)):
                    raise ArithmeticError("closure left 2^-g Z[i]")
                Y = Y / scale
                key = _canonical_key(Y)
                if key not in seen:
                    seen[key] = Y
                    nxt.append(Y)
        frontier = nxt
    # float64 holds these small Gaussian integers exactly
    num = np.array(list(seen.values()))
    return GroupClosure(g, num)


def reynolds_project(p: SparsePolynomial, closure: GroupClosure) -> SparsePolynomial:
    """Average of p over the closure (exact)."""
    if p.genus != closure.genus:
        raise ValueError("genus mismatch")
    _require_even(p)
    total = SparsePolynomial.zero(p.genus)
    for M in closure.elements:
        total = total + apply_matrix_substitution(M, p)
    return total.scale(GaussianRational(Fraction(1, closure.order)))


def _exact_rank(rows: list[list[GaussianRational]]) -> int:
    rows = [list(r) for r in rows if any(r)]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        inv = GaussianRational(1) / pr[col]
        pr = [x * inv for x in pr]
        rows[rank] = pr
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        rank += 1
    return rank


def monomials(nvars: int, degree: int):
    if nvars == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            yield (first,) + rest


def projection_rank(closure: GroupClosure, d: int) -> int:
    """Rank of the Reynolds projection on all degree-d monomials."""
    if d % 2:
        raise ValueError("degree must be even")
    g = closure.genus
    monos = list(monomials(1 << g, d))
    images = [reynolds_project(SparsePolynomial(g, {m: 1}), closure) for m in monos]
    return _exact_rank([[img.coefficient(m) for m in monos] for img in images])


def _charpoly_batch(num: np.ndarray) -> np.ndarray:
    """Faddeev-LeVerrier on a batch of Gaussian-integer matrices.

    Returns c with det(xI - N) = sum_k c[:, k] x^(n-k), c[:, 0] = 1, exact in
    complex128 because all intermediate values are small Gaussian integers.
    """
    E, n, _ = num.shape
    c = np.zeros((E, n + 1), dtype=complex)
    c[:, 0] = 1
    Mk = np.zeros_like(num)
    eye = np.eye(n)[None, :, :]
    for k in range(1, n + 1):
        Mk = num @ Mk + c[:, k - 1, None, None] * eye
        tr = np.trace(num @ Mk, axis1=1, axis2=2)
        c[:, k] = -tr / k
    return np.rint(c.real) + 1j * np.rint(c.imag)


def _series_inverse(coeffs: list[GaussianRational], order: int) -> list[GaussianRational]:
    inv = [GaussianRational(1) / coeffs[0]]
    for m in range(1, order + 1):
        s = _ZERO
        for k in range(1, min(m, len(coeffs) - 1) + 1):
            s = s + coeffs[k] * inv[m - k]
        inv.append(-s / coeffs[0])
    return inv


def molien_dimension(closure: GroupClosure, d: int) -> int:
    """dim R_g^d from the Molien series, exactly."""
    if d < 0 or d % 2:
        raise ValueError("degree must be a non-negative even integer")
    n = 1 << closure.genus
    scale = closure.scale
    cp = _charpoly_batch(closure._num)
    # det(I - tM) = sum_k c_k t^k / scale^k with N = scale * M
    counts = Counter(tuple((int(z.real), int(z.imag)) for z in row) for row in cp)
    total = _ZERO
    for row, mult in counts.items():
        coeffs = [
            GaussianRational(Fraction(re, scale ** k), Fraction(im, scale ** k))
            for k, (re, im) in enumerate(row)
        ]
        total = total + _series_inverse(coeffs, d)[d] * mult
    total = total / closure.order
    if total.im != 0 or total.re.denominator != 1:
        raise ArithmeticError(f"Molien coefficient {total} is not an integer")
    return int(total.re)
