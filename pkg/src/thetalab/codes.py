"""Binary linear codes and their genus-g weight enumerators.

Codewords are bit-packed into Python ints, coordinate i at bit i.  The genus-g
weight enumerator is

    W_C^(g) = sum over (c_1, ..., c_g) in C^g of prod_i F_{(c_1[i], ..., c_g[i])}

with the column (c_1[i], ..., c_g[i]) read little-endian as a variable index.
"""

from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import GaussianRational, SparsePolynomial

log = logging.getLogger(__name__)

__all__ = [
    "BinaryCode",
    "CodeError",
    "direct_sum",
    "is_doubly_even_self_dual",
    "iter_tuple_indices",
    "make_code",
    "named_code",
    "read_code_file",
    "weight_enumerator",
]

MAX_LENGTH = 32
MAX_CACHED_DIMENSION = 24
TUPLE_GUARD_LOG2 = 36


class CodeError(ValueError):
    pass


def _parse_row(row) -> tuple[int, int]:
    """Return (length, packed int) for a 0/1 string or sequence."""
    if isinstance(row, str):
        row = row.strip()
        if set(row) - {"0", "1"}:
            raise CodeError(f"row {row!r} is not a 0/1 string")
        bits = [int(ch) for ch in row]
    else:
        bits = [int(b) for b in row]
        if set(bits) - {0, 1}:
            raise CodeError(f"row {row!r} has entries outside {{0, 1}}")
    return len(bits), sum(b << i for i, b in enumerate(bits))


def _echelon(rows: Iterable[int]) -> list[int]:
    """Reduced basis of the F_2 span of ``rows`` (pivot = lowest set bit)."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r & (b & -b):
                r ^= b
        if r:
            low = r & -r
            basis = [b ^ r if b & low else b for b in basis]
            basis.append(r)
    return sorted(basis, key=lambda b: b & -b)


def _span(basis: Sequence[int]) -> list[int]:
    words = [0]
    for b in basis:
        words += [w ^ b for w in words]
    return words


@dataclass(frozen=True)
class BinaryCode:
    """A binary linear [n, k] code given by an echelon generator basis."""

    length: int
    rows: tuple[int, ...]
    name: str = field(default="", compare=False)

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def codewords(self) -> tuple[int, ...]:
        return _codewords(self)

    def generator_matrix(self) -> np.ndarray:
        return np.array(
            [[(r >> i) & 1 for i in range(self.length)] for r in self.rows], dtype=np.uint8
        ).reshape(len(self.rows), self.length)

    def codeword_matrix(self) -> np.ndarray:
        words = np.array(self.codewords, dtype=np.int64)
        return ((words[:, None] >> np.arange(self.length)) & 1).astype(np.uint8)

    def weight_distribution(self) -> dict[int, int]:
        dist: dict[int, int] = {}
        for w in self.codewords:
            k = w.bit_count() if hasattr(w, "bit_count") else bin(w).count("1")
            dist[k] = dist.get(k, 0) + 1
        return dict(sorted(dist.items()))

    def permuted(self, perm: Sequence[int]) -> "BinaryCode":
        """Code with coordinate i moved to position perm[i]."""
        if sorted(perm) != list(range(self.length)):
            raise CodeError("not a permutation of the coordinates")
        rows = []
        for r in self.rows:
            rows.append(sum(((r >> i) & 1) << perm[i] for i in range(self.length)))
        return BinaryCode(self.length, tuple(_echelon(rows)), self.name)

    def weight4_components(self) -> list[set[int]]:
        """Connected components of the coordinate graph joined by weight-4 supports.

        Coordinates covered by no weight-4 word are singleton components.
        """
        parent = list(range(self.length))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for w in self.codewords:
            if bin(w).count("1") == 4:
                support = [i for i in range(self.length) if (w >> i) & 1]
                for j in support[1:]:
                    parent[find(j)] = find(support[0])
        comps: dict[int, set[int]] = {}
        for i in range(self.length):
            comps.setdefault(find(i), set()).add(i)
        return sorted(comps.values(), key=min)

    def __str__(self):
        label = f"{self.name} " if self.name else ""
        return f"{label}[{self.length},{self.dimension}] code"


@lru_cache(maxsize=32)
def _codewords(code: BinaryCode) -> tuple[int, ...]:
    if code.dimension > MAX_CACHED_DIMENSION:
        raise CodeError(f"refusing to list 2^{code.dimension} codewords")
    return tuple(sorted(_span(code.rows)))


def make_code(rows: Sequence, length: int | None = None, name: str = "") -> BinaryCode:
    """Build a code from generator rows; dependent rows are reduced away.

    ``length`` is required only when ``rows`` is empty.
    """
    parsed = [_parse_row(r) for r in rows]
    lengths = {n for n, _ in parsed}
    if length is not None:
        lengths.add(length)
    if len(lengths) != 1:
        raise CodeError(f"inconsistent or missing row lengths: {sorted(lengths)}")
    (n,) = lengths
    if n > MAX_LENGTH:
        raise CodeError(f"code length {n} exceeds {MAX_LENGTH}")
    return BinaryCode(n, tuple(_echelon(v for _, v in parsed)), name)


def zero_code(length: int) -> BinaryCode:
    return BinaryCode(length, (), "zero")


def direct_sum(c1: BinaryCode, c2: BinaryCode) -> BinaryCode:
    shifted = [r << c1.length for r in c2.rows]
    name = f"{c1.name}+{c2.name}" if c1.name and c2.name else ""
    return BinaryCode(c1.length + c2.length, tuple(_echelon(list(c1.rows) + shifted)), name)


def is_doubly_even_self_dual(code: BinaryCode) -> bool:
    if 2 * code.dimension != code.length:
        return False
    if any(bin(r).count("1") % 4 for r in code.rows):
        return False
    # doubly-even generators that are pairwise orthogonal span a doubly-even code
    return all(bin(a & b).count("1") % 2 == 0 for a, b in itertools.combinations(code.rows, 2))


E8_ROWS = ("11111111", "01010101", "00110011", "00001111")
D16_GLUE = "1010101010101010"


def d16_plus_rows(glue: str = D16_GLUE) -> list[str]:
    rows = []
    for start in range(0, 14, 2):
        v = ["0"] * 16
        v[start:start + 4] = "1111"
        rows.append("".join(v))
    return rows + [glue]


def _build_e8() -> BinaryCode:
    code = make_code(E8_ROWS, name="e8")
    if code.weight_distribution() != {0: 1, 4: 14, 8: 1}:
        raise CodeError("e8 construction failed its weight distribution check")
    return code


def build_d16_plus(glue: str = D16_GLUE) -> BinaryCode:
    """d16+ from seven sliding weight-4 windows and a glue vector, self-verified."""
    code = make_code(d16_plus_rows(glue), name="d16_plus")
    if not is_doubly_even_self_dual(code):
        raise CodeError("d16_plus construction is not doubly-even self-dual")
    if code.weight_distribution() != {0: 1, 4: 28, 8: 198, 12: 28, 16: 1}:
        raise CodeError("d16_plus construction has the wrong weight distribution")
    if len(code.weight4_components()) != 1:
        raise CodeError("d16_plus construction is decomposable")
    return code


NAMED_CODES = ("e8", "e8_plus_e8", "d16_plus")


@lru_cache(maxsize=None)
def named_code(name: str) -> BinaryCode:
    if name == "e8":
        return _build_e8()
    if name == "e8_plus_e8":
        e8 = _build_e8()
        code = direct_sum(e8, e8)
        return BinaryCode(code.length, code.rows, "e8_plus_e8")
    if name == "d16_plus":
        return build_d16_plus()
    raise CodeError(f"unknown code {name!r}; expected one of {', '.join(NAMED_CODES)}")


def read_code_file(path: str | Path, name: str = "") -> BinaryCode:
    """One 0/1 generator row per line; ``#`` starts a comment."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise CodeError(f"{path}: no generator rows")
    return make_code(rows, name=name or Path(path).stem)


# -- weight enumerators -------------------------------------------------------


def _bit_matrix(words: Sequence[int], coords: Sequence[int]) -> np.ndarray:
    w = np.asarray(words, dtype=np.int64).reshape(-1, 1)
    return ((w >> np.asarray(coords, dtype=np.int64)[None, :]) & 1).astype(np.int64)


def iter_tuple_indices(
    words: np.ndarray, g: int, offsets: Sequence[np.ndarray] | None = None, chunk: int = 1 << 17
) -> Iterator[np.ndarray]:
    """Yield variable-index arrays (tuples x coordinates) for all of (words + offsets)^g.

    ``words`` is a 0/1 matrix (codewords x coordinates); tuple entry j is shifted
    by ``offsets[j]`` (a coset representative) before its column bits are read.
    The trailing tuple slots are vectorized; leading slots are looped over.
    """
    S, m = words.shape
    if offsets is None:
        offsets = [np.zeros(m, dtype=np.int64)] * g
    layers = [((words ^ off[None, :]) << j) for j, off in enumerate(offsets)]
    t = 1
    while t < g and S ** (t + 1) <= chunk:
        t += 1
    tail = np.zeros((1, m), dtype=np.int64)
    for layer in layers[g - t:]:
        tail = (tail[:, None, :] + layer[None, :, :]).reshape(-1, m)
    for prefix in itertools.product(range(S), repeat=g - t):
        if prefix:
            base = sum(layers[j][i] for j, i in enumerate(prefix))
            yield tail + base
        else:
            yield tail


class _KeyCodec:
    """Packs exponent vectors of fixed total degree into int64 keys.

    The last variable's exponent is implied by the degree, so keys for two
    polynomials of degrees d1 and d2 add to the key of their product term.
    """

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.base = degree + 1
        if self.base ** (nvars - 1) >= 2 ** 62:
            raise OverflowError("exponent vectors do not fit a 64-bit key")
        w = [self.base ** a for a in range(nvars - 1)] + [0]
        self.weights = np.array(w, dtype=np.int64)

    @classmethod
    def fits(cls, nvars: int, degree: int) -> bool:
        return (degree + 1) ** (nvars - 1) < 2 ** 62

    def keys(self, idx: np.ndarray) -> np.ndarray:
        return self.weights[idx].sum(axis=1)

    def decode(self, key: int, degree: int | None = None) -> tuple[int, ...]:
        degree = self.degree if degree is None else degree
        exps = []
        for _ in range(self.nvars - 1):
            key, e = divmod(key, self.base)
            exps.append(e)
        return tuple(exps) + (degree - sum(exps),)


def _reduce(keys: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inv = np.unique(keys, return_inverse=True)
    out = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(out, inv, counts)
    return uniq, out


class _Accumulator:
    def __init__(self):
        self._keys: list[np.ndarray] = []
        self._counts: list[np.ndarray] = []
        self._pending = 0

    def add(self, keys: np.ndarray, counts: np.ndarray | None = None):
        if counts is None:
            keys, counts = np.unique(keys, return_counts=True)
            counts = counts.astype(np.int64)
        self._keys.append(keys)
        self._counts.append(counts)
        self._pending += len(keys)
        if self._pending > 1 << 22:
            self._compact()

    def merge(self, other: "_Accumulator"):
        k, c = other.result()
        self.add(k, c)

    def _compact(self):
        if len(self._keys) > 1:
            k, c = _reduce(np.concatenate(self._keys), np.concatenate(self._counts))
            self._keys, self._counts = [k], [c]
        self._pending = sum(len(k) for k in self._keys)

    def result(self) -> tuple[np.ndarray, np.ndarray]:
        if not self._keys:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        self._compact()
        if len(self._keys) == 1 and self._pending == len(np.unique(self._keys[0])):
            return self._keys[0], self._counts[0]
        return _reduce(self._keys[0], self._counts[0])


def _coset_keys(words, g, offsets, codec) -> tuple[np.ndarray, np.ndarray]:
    acc = _Accumulator()
    for idx in iter_tuple_indices(words, g, offsets):
        acc.add(codec.keys(idx))
    return acc.result()


def _direct_keys(code: BinaryCode, g: int, codec: _KeyCodec, workers: int = 1):
    words = code.codeword_matrix().astype(np.int64)
    S = len(words)
    if workers <= 1 or g < 2:
        return _coset_keys(words, g, None, codec)

    # partition on the first tuple slot; the remaining slots shift up by one bit
    def part(lo, hi):
        acc = _Accumulator()
        for first in words[lo:hi]:
            for idx in iter_tuple_indices(words, g - 1):
                acc.add(codec.keys((idx << 1) + first[None, :]))
        return acc

    bounds = np.linspace(0, S, workers + 1).astype(int)
    total = _Accumulator()
    with ThreadPoolExecutor(workers) as pool:
        for acc in pool.map(lambda b: part(*b), zip(bounds[:-1], bounds[1:])):
            total.merge(acc)
    return total.result()


def _split_plan(code: BinaryCode):
    """Decompose C = C_L + C_R + glue for the coordinate split at n // 2."""
    n = code.length
    half = n // 2
    low_mask = (1 << half) - 1
    high_mask = ((1 << n) - 1) ^ low_mask

    def subcode_vanishing_on(mask):
        # rows whose restriction to ``mask`` is zero after elimination on mask bits
        basis: list[int] = []
        kernel: list[int] = []
        for r in code.rows:
            for b in basis:
                if r & mask & (b & mask & -(b & mask)):
                    r ^= b
            if r & mask:
                basis.append(r)
            else:
                kernel.append(r)
        return _echelon(kernel)

    left = subcode_vanishing_on(high_mask)
    right = subcode_vanishing_on(low_mask)
    base = _echelon(left + right)
    glue: list[int] = []
    for r in code.rows:
        trial = _echelon(base + glue + [r])
        if len(trial) > len(base) + len(glue):
            glue.append(r)
    return half, left, right, glue


def _split_cost(code: BinaryCode, g: int) -> tuple[float, tuple]:
    plan = _split_plan(code)
    _, left, right, glue = plan
    kg = len(glue)
    cost = 2.0 ** (kg * g) * (2.0 ** (len(left) * g) + 2.0 ** (len(right) * g))
    return cost, plan


def _split_keys(code: BinaryCode, g: int, codec: _KeyCodec, plan):
    half, left, right, glue = plan
    n = code.length
    lcoords, rcoords = list(range(half)), list(range(half, n))
    lwords = _bit_matrix(_span(left), lcoords)
    rwords = _bit_matrix(_span(right), rcoords)
    codec_l = _KeyCodec(codec.nvars, codec.degree)
    glue_words = _span(glue)
    gl = {w: _bit_matrix([w], lcoords)[0] for w in glue_words}
    gr = {w: _bit_matrix([w], rcoords)[0] for w in glue_words}
    cache_l: dict = {}
    cache_r: dict = {}
    acc = _Accumulator()
    for gamma in itertools.product(glue_words, repeat=g):
        if gamma not in cache_l:
            cache_l[gamma] = _coset_keys(lwords, g, [gl[w] for w in gamma], codec_l)
            cache_r[gamma] = _coset_keys(rwords, g, [gr[w] for w in gamma], codec_l)
        ka, ca = cache_l.pop(gamma)
        kb, cb = cache_r.pop(gamma)
        step = max(1, (1 << 22) // max(1, len(kb)))
        for lo in range(0, len(ka), step):
            keys = (ka[lo:lo + step, None] + kb[None, :]).ravel()
            counts = (ca[lo:lo + step, None] * cb[None, :]).ravel()
            acc.add(*_reduce(keys, counts))
    return acc.result()


def _keys_to_poly(g: int, codec: _KeyCodec, keys, counts) -> SparsePolynomial:
    terms = {}
    for k, c in zip(keys.tolist(), counts.tolist()):
        terms[codec.decode(k)] = GaussianRational(c)
    return SparsePolynomial._raw(g, terms)


def weight_enumerator(
    code: BinaryCode,
    g: int,
    method: str = "auto",
    allow_large: bool = False,
    workers: int = 1,
) -> SparsePolynomial:
    """Genus-g code polynomial of ``code``, computed exactly.

    ``method`` is ``"direct"`` (stream all 2^(kg) codeword tuples), ``"split"``
    (factor through the glue decomposition C = C_L + C_R + glue at the middle
    coordinate) or ``"auto"`` (cheaper of the two).
    """
    if g < 1:
        raise ValueError("genus must be positive")
    if code.dimension * g > TUPLE_GUARD_LOG2 and not allow_large:
        raise CodeError(
            f"2^{code.dimension * g} codeword tuples exceeds the 2^{TUPLE_GUARD_LOG2} guard"
        )
    return _weight_enumerator(code, g, method, workers)


@lru_cache(maxsize=64)
def _weight_enumerator(code: BinaryCode, g: int, method: str, workers: int) -> SparsePolynomial:
    nv = 1 << g
    n = code.length
    if n == 0:
        return SparsePolynomial.constant(g, 1 << (code.dimension * g))
    if not _KeyCodec.fits(nv, n):
        return _weight_enumerator_dict(code, g)
    codec = _KeyCodec(nv, n)
    if method == "auto":
        cost, plan = _split_cost(code, g)
        method = "split" if n > 1 and cost * 4 < 2.0 ** (code.dimension * g) else "direct"
    if method == "split":
        plan = _split_plan(code)
        keys, counts = _split_keys(code, g, codec, plan)
    elif method == "direct":
        keys, counts = _direct_keys(code, g, codec, workers)
    else:
        raise ValueError(f"unknown method {method!r}")
    log.debug("W^(%d) of %s via %s: %d terms", g, code, method, len(keys))
    return _keys_to_poly(g, codec, keys, counts)


def _weight_enumerator_dict(code: BinaryCode, g: int) -> SparsePolynomial:
    # fallback for exponent vectors too wide for int64 keys
    nv = 1 << g
    words = code.codeword_matrix().astype(np.int64)
    terms: dict = {}
    for idx in iter_tuple_indices(words, g):
        exps = np.stack([(idx == a).sum(axis=1) for a in range(nv)], axis=1)
        uniq, cnt = np.unique(exps, axis=0, return_counts=True)
        for e, c in zip(map(tuple, uniq.tolist()), cnt.tolist()):
            terms[e] = terms.get(e, 0) + c
    return SparsePolynomial(g, terms)
