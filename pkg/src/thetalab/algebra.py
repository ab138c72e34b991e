"""Exact Gaussian-rational scalars and sparse polynomials in the variables F_a.

Variables are indexed by a = (a_1, ..., a_g) in F_2^g through the little-endian
integer ``sum(a_k << (k - 1))``; every module in the package uses this order.
A polynomial of genus g therefore lives in ``2**g`` variables and each term is a
dense exponent tuple of that length.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GaussianRational",
    "I",
    "SparsePolynomial",
    "apply_matrix_substitution",
    "bits_of",
    "index_of",
    "poly_add",
    "poly_mul",
]


def index_of(bits: Sequence[int]) -> int:
    """Little-endian index of a vector in F_2^g."""
    return sum((b & 1) << k for k, b in enumerate(bits))


def bits_of(index: int, g: int) -> tuple[int, ...]:
    return tuple((index >> k) & 1 for k in range(g))


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("_re", "_im")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0):
        self._re = Fraction(re)
        self._im = Fraction(im)

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact")
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self._re, self._im, o._re, o._im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * o.conjugate() * GaussianRational(1 / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self._re, -self._im)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (GaussianRational(1) / self) ** (-k)
        result, base = GaussianRational(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self._re, -self._im)

    def norm(self) -> Fraction:
        """Squared modulus."""
        return self._re * self._re + self._im * self._im

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        if self._im == 0:
            return hash(self._re)
        return hash((self._re, self._im))

    def __bool__(self):
        return bool(self._re) or bool(self._im)

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    def __repr__(self):
        return f"GaussianRational({str(self._re)!r}, {str(self._im)!r})"

    def __str__(self):
        if self._im == 0:
            return str(self._re)
        if self._re == 0:
            return f"({self._im}i)"
        sign = "+" if self._im > 0 else "-"
        return f"({self._re}{sign}{abs(self._im)}i)"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: accepts ``3``, ``-1/2``, ``(1/2-3i)``, ``(i)``."""
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1].strip()
        try:
            if not s.endswith("i"):
                return cls(Fraction(s))
            body = s[:-1]
            cut = max(body.rfind("+"), body.rfind("-"))
            re_txt, im_txt = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
            if im_txt in ("", "+", "-"):
                im_txt += "1"
            return cls(Fraction(re_txt), Fraction(im_txt))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a Gaussian rational: {text!r}") from None


I = GaussianRational(0, 1)
_ZERO = GaussianRational(0)
_ONE = GaussianRational(1)


class SparsePolynomial:
    """Polynomial in ``2**genus`` variables with Gaussian-rational coefficients.

    Instances are treated as immutable; arithmetic returns new objects.
    """

    def __init__(self, genus: int, terms: Mapping[Sequence[int], object] | None = None):
        if genus < 0:
            raise ValueError("genus must be non-negative")
        self.genus = genus
        nv = 1 << genus
        clean: dict[tuple[int, ...], GaussianRational] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise ValueError(f"exponent vector {exps} has length != {nv}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = GaussianRational.coerce(c)
            if exps in clean:
                c = clean[exps] + c
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self._terms = clean

    @classmethod
    def _raw(cls, genus: int, terms: dict) -> "SparsePolynomial":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.genus = genus
        p._terms = terms
        return p

    @classmethod
    def zero(cls, genus: int) -> "SparsePolynomial":
        return cls._raw(genus, {})

    @classmethod
    def constant(cls, genus: int, c=1) -> "SparsePolynomial":
        return cls(genus, {(0,) * (1 << genus): c})

    @classmethod
    def variable(cls, genus: int, a: int | Sequence[int]) -> "SparsePolynomial":
        idx = a if isinstance(a, int) else index_of(a)
        exps = [0] * (1 << genus)
        exps[idx] = 1
        return cls(genus, {tuple(exps): 1})

    @property
    def nvars(self) -> int:
        return 1 << self.genus

    @property
    def terms(self) -> Mapping[tuple[int, ...], GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max(self.degrees(), default=-1)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(exps), _ZERO)

    # -- arithmetic -----------------------------------------------------------

    def _check(self, other: "SparsePolynomial"):
        if self.genus != other.genus:
            raise ValueError(f"genus mismatch: {self.genus} vs {other.genus}")

    def __add__(self, other):
        if not isinstance(other, SparsePolynomial):
            other = SparsePolynomial.constant(self.genus, other)
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return SparsePolynomial._raw(self.genus, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial._raw(self.genus, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SparsePolynomial":
        c = GaussianRational.coerce(c)
        if not c:
            return SparsePolynomial.zero(self.genus)
        return SparsePolynomial._raw(self.genus, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SparsePolynomial):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, _ZERO) + c1 * c2
        return SparsePolynomial._raw(self.genus, {e: c for e, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        result = SparsePolynomial.constant(self.genus, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, SparsePolynomial):
            return self.genus == other.genus and self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self == SparsePolynomial.constant(self.genus, other)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"SparsePolynomial(genus={self.genus}, terms={len(self._terms)})"

    # -- numerics -------------------------------------------------------------

    @cached_property
    def _arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        keys = sorted(self._terms)
        exps = np.array(keys, dtype=np.int64).reshape(len(keys), self.nvars)
        coef = np.array([complex(self._terms[k]) for k in keys], dtype=complex)
        absc = np.abs(coef)
        return exps, coef, absc

    def contributions(self, values: Sequence[complex]) -> np.ndarray:
        """Per-term complex values ``c * prod(values[a]**e_a)`` in sorted term order."""
        values = np.asarray(values, dtype=complex)
        if values.shape != (self.nvars,):
            raise ValueError(f"expected {self.nvars} values")
        exps, coef, _ = self._arrays
        if not len(coef):
            return np.zeros(0, dtype=complex)
        maxe = int(exps.max())
        powers = values[:, None] ** np.arange(maxe + 1)[None, :]
        mono = np.prod(powers[np.arange(self.nvars)[None, :], exps], axis=1)
        return coef * mono

    def evaluate(self, values: Sequence[complex]) -> complex:
        return complex(self.contributions(values).sum())

    # -- serialization --------------------------------------------------------

    def sorted_terms(self):
        return sorted(self._terms.items())

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            mono = " ".join(f"{a}^{e}" for a, e in enumerate(exps) if e)
            parts.append(f"{c} * F[{mono}]")
        return " + ".join(parts)

    _TERM = re.compile(r"(\([^)]*\)|[+-]?\d+(?:/\d+)?)\s*\*\s*F\[([^\]]*)\]")

    @classmethod
    def from_text(cls, text: str, genus: int) -> "SparsePolynomial":
        text = text.strip()
        if text == "0":
            return cls.zero(genus)
        terms: dict = {}
        nv = 1 << genus
        consumed = 0
        for m in cls._TERM.finditer(text):
            gap = text[consumed:m.start()].strip()
            if gap not in ("", "+"):
                raise ValueError(f"unparseable polynomial text near {gap!r}")
            consumed = m.end()
            exps = [0] * nv
            for tok in m.group(2).split():
                a, e = tok.split("^")
                exps[int(a)] += int(e)
            key = tuple(exps)
            terms[key] = terms.get(key, _ZERO) + GaussianRational.parse(m.group(1))
        if text[consumed:].strip():
            raise ValueError(f"trailing text {text[consumed:]!r}")
        return cls(genus, terms)

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "terms": [
                {"exps": list(e), "re": str(c.re), "im": str(c.im)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> "SparsePolynomial":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(
            int(data["genus"]),
            {tuple(t["exps"]): GaussianRational(t["re"], t["im"]) for t in data["terms"]},
        )


def poly_add(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p + q


def poly_mul(p: SparsePolynomial, q: SparsePolynomial) -> SparsePolynomial:
    return p * q


def _matrix_rows(M) -> list[list[GaussianRational]]:
    rows = getattr(M, "entries", M)
    return [[GaussianRational.coerce(x) for x in row] for row in rows]


def _linear_form(genus: int, row: Iterable[GaussianRational]) -> SparsePolynomial:
    nv = 1 << genus
    terms = {}
    for b, c in enumerate(row):
        if c:
            e = [0] * nv
            e[b] = 1
            terms[tuple(e)] = c
    return SparsePolynomial._raw(genus, terms)


def apply_matrix_substitution(M, p: SparsePolynomial) -> SparsePolynomial:
    """Replace every F_a by ``sum_b M[a][b] F_b`` and expand exactly.

    Composition: ``apply(M1, apply(M2, p)) == apply(M2 @ M1, p)``.
    """
    rows = _matrix_rows(M)
    nv = p.nvars
    if len(rows) != nv or any(len(r) != nv for r in rows):
        raise ValueError(f"matrix must be {nv}x{nv} for genus {p.genus}")

    diagonal = all(not rows[a][b] for a in range(nv) for b in range(nv) if a != b)
    if diagonal:
        diag = [rows[a][a] for a in range(nv)]
        out = {}
        for exps, c in p.items():
            for a, e in enumerate(exps):
                if e:
                    c = c * diag[a] ** e
            if c:
                out[exps] = c
        return SparsePolynomial._raw(p.genus, out)

    forms = [_linear_form(p.genus, r) for r in rows]
    cache: dict[tuple[int, int], SparsePolynomial] = {}

    def power(a: int, e: int) -> SparsePolynomial:
        if (a, e) not in cache:
            cache[a, e] = forms[a] if e == 1 else power(a, e - 1) * forms[a]
        return cache[a, e]

    total = SparsePolynomial.zero(p.genus)
    for exps, c in p.items():
        term = SparsePolynomial.constant(p.genus, c)
        for a, e in enumerate(exps):
            if e:
                term = term * power(a, e)
        total = total + term
    return total
