"""Integral symplectic matrices, congruence subgroups and the action on H_g."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "SiegelPoint",
    "SymplecticMatrix",
    "act",
    "in_gamma",
    "in_gamma_star_24",
    "j_matrix",
    "random_siegel_point",
    "translation",
]

PD_TOL = 1e-12
SYM_TOL = 1e-12
COND_LIMIT = 1e12


class SiegelPointError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    """sigma = [[A, B], [C, D]] with integer g x g blocks, validated on construction."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        blocks = [np.array(x, dtype=object) for x in (self.A, self.B, self.C, self.D)]
        g = blocks[0].shape[0]
        for blk in blocks:
            if blk.shape != (g, g):
                raise ValueError("blocks must all be g x g")
        for name, blk in zip("ABCD", blocks):
            object.__setattr__(self, name, blk)
        if not self._is_symplectic():
            raise ValueError("matrix is not symplectic")

    @classmethod
    def from_full(cls, M) -> "SymplecticMatrix":
        M = np.array(M, dtype=object)
        g = M.shape[0] // 2
        return cls(M[:g, :g], M[:g, g:], M[g:, :g], M[g:, g:])

    @property
    def genus(self) -> int:
        return self.A.shape[0]

    def full(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    def _is_symplectic(self) -> bool:
        M = self.full()
        g = self.genus
        J = _block_j(g)
        return bool(np.array_equal(M.T.dot(J).dot(M), J))

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix.from_full(self.full().dot(other.full()))

    def __eq__(self, other):
        return isinstance(other, SymplecticMatrix) and np.array_equal(self.full(), other.full())

    __hash__ = None

    def to_json(self) -> dict:
        return {"genus": self.genus, "matrix": [[int(x) for x in r] for r in self.full()]}


def _block_j(g: int) -> np.ndarray:
    z = np.zeros((g, g), dtype=int)
    e = np.eye(g, dtype=int)
    return np.block([[z, -e], [e, z]]).astype(object)


def j_matrix(g: int) -> SymplecticMatrix:
    return SymplecticMatrix.from_full(_block_j(g))


def translation(S) -> SymplecticMatrix:
    """t(S) = [[1, S], [0, 1]] for integral symmetric S."""
    S = np.array(S, dtype=object)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("S must be square")
    if not np.array_equal(S, S.T):
        raise ValueError("S must be symmetric")
    g = S.shape[0]
    e = np.eye(g, dtype=int).astype(object)
    return SymplecticMatrix(e, S, np.zeros((g, g), dtype=int).astype(object), e)


def diagonal_sign(signs) -> SymplecticMatrix:
    """A = D = diag(signs), B = C = 0."""
    A = np.diag([int(s) for s in signs]).astype(object)
    z = np.zeros_like(A)
    return SymplecticMatrix(A, z, z, A)


def in_gamma(m: SymplecticMatrix, r: int, strict2r: bool = False) -> bool:
    """Membership in Gamma_g(r), or in Gamma_g(r, 2r) when ``strict2r``."""
    if r <= 0:
        raise ValueError("level must be positive")
    M = m.full()
    if np.any((M - np.eye(2 * m.genus, dtype=int)) % r):
        return False
    if strict2r:
        if any(int(x) % (2 * r) for x in np.diag(m.B)) or any(int(x) % (2 * r) for x in np.diag(m.C)):
            return False
    return True


def in_gamma_star_24(m: SymplecticMatrix) -> bool:
    """Gamma*_g(2,4): Gamma_g(2,4) with tr(A - 1) = 0 mod 4."""
    if not in_gamma(m, 2, strict2r=True):
        return False
    return int(np.trace(m.A) - m.genus) % 4 == 0


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """tau in the Siegel upper half space (double precision)."""

    tau: np.ndarray

    def __post_init__(self):
        tau = np.array(self.tau, dtype=complex)
        if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
            raise SiegelPointError("tau must be a square matrix")
        scale = max(1.0, float(np.abs(tau).max()))
        if np.abs(tau - tau.T).max() > SYM_TOL * scale:
            raise SiegelPointError("tau is not symmetric")
        tau = (tau + tau.T) / 2
        lam = np.linalg.eigvalsh(tau.imag).min()
        if lam <= PD_TOL:
            raise SiegelPointError(f"Im(tau) is not positive definite (min eigenvalue {lam:.3g})")
        tau.setflags(write=False)
        object.__setattr__(self, "tau", tau)

    @property
    def genus(self) -> int:
        return self.tau.shape[0]

    @property
    def imag_min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.tau.imag).min())

    def scaled(self, r: float) -> "SiegelPoint":
        return SiegelPoint(r * self.tau)

    def __add__(self, S) -> "SiegelPoint":
        return SiegelPoint(self.tau + np.asarray(S, dtype=float))

    def to_json(self) -> dict:
        return {"genus": self.genus, "re": self.tau.real.tolist(), "im": self.tau.imag.tolist()}

    @classmethod
    def from_json(cls, data) -> "SiegelPoint":
        if isinstance(data, (str, Path)):
            text = str(data)
            if not text.lstrip().startswith("{"):
                text = Path(text).read_text()
            data = json.loads(text)
        if "re" not in data and isinstance(data.get("result"), dict):
            # a saved CLI report
            data = data["result"]
        tau = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
        if "genus" in data and tau.shape != (data["genus"], data["genus"]):
            raise SiegelPointError("genus does not match matrix size")
        return cls(tau)

    @classmethod
    def diagonal(cls, lambdas) -> "SiegelPoint":
        return cls(np.diag(np.asarray(lambdas, dtype=complex)))


def act(m: SymplecticMatrix, tau: SiegelPoint) -> SiegelPoint:
    """(A tau + B)(C tau + D)^-1."""
    if m.genus != tau.genus:
        raise ValueError("genus mismatch")
    A, B, C, D = (np.array(x, dtype=float) for x in (m.A, m.B, m.C, m.D))
    den = C @ tau.tau + D
    if np.linalg.cond(den) > COND_LIMIT:
        raise SiegelPointError("C tau + D is numerically singular")
    num = A @ tau.tau + B
    return SiegelPoint(np.linalg.solve(den.T, num.T).T)


def random_siegel_point(
    g: int,
    seed: int | np.random.Generator = 0,
    spread: float = 1.0,
    *,
    height: float = 1.0,
    perturb: float = 0.3,
    diagonal: bool = False,
) -> SiegelPoint:
    """Seeded point X + iY with X uniform in [-spread/2, spread/2] and Y near height * I.

    ``diagonal`` returns diag(lambda_1, ..., lambda_g) with distinct entries, a
    completely reducible period matrix.  ``spread = perturb = 0`` gives height * i * I.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if diagonal:
        re = rng.uniform(-0.5, 0.5, g) * spread
        im = height * (1.0 + perturb * rng.uniform(0.0, 1.0, g))
        lam = re + 1j * im
        # distinctness, in the rare case of a collision
        lam = lam + 1e-3j * np.arange(g) * (len(set(np.round(lam, 12))) < g)
        return SiegelPoint.diagonal(lam)
    X = rng.uniform(-0.5, 0.5, (g, g)) * spread
    X = np.triu(X) + np.triu(X, 1).T
    P = rng.uniform(-0.5, 0.5, (g, g)) * perturb
    P = (P + P.T) / 2
    Y = np.eye(g) + P
    lam = np.linalg.eigvalsh(Y).min()
    if lam < 0.5:
        Y = Y + (0.5 - lam) * np.eye(g)
    return SiegelPoint(X + 1j * height * Y)
