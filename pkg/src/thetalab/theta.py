"""Theta functions with rational characteristics and the classical identities.

    theta[a; b](tau, z) = sum_{m in Z^g} e( (m+a)' tau (m+a) / 2 + (m+a)'(z+b) ),
    e(w) = exp(2 pi i w).

Sums are truncated to an integer box around the dominant term.  With Y = Im tau,
lambda its smallest eigenvalue and s = a + Y^-1 Im z, every term is bounded by
exp(pi Im(z)'Y^-1 Im(z)) * exp(-pi lambda |m + s|^2), which is a product of
one-dimensional Gaussians; the tail outside the box is bounded coordinate-wise
in closed form.  ``ThetaValue.tail_bound`` is that truncation bound plus a
first-order estimate of the floating-point error of the finite sum.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algebra import bits_of
from .hgroup import d_s_matrix, t_g_matrix
from .lattice import EvenLattice, construction_a, lattice_theta, shell_counts
from .symplectic import SiegelPoint

__all__ = [
    "Characteristic",
    "EvenLattice",
    "ThetaError",
    "ThetaValue",
    "addition_formula_residual",
    "construction_a",
    "fourth_order_residual",
    "JTransform",
    "fourth_order_theta",
    "j_transform",
    "lattice_theta",
    "shell_counts",
    "theta2_values",
    "theta_many",
    "theta",
    "theta2_vector",
    "transform_residual_J",
    "transform_residual_tS",
    "vartheta",
]

DEFAULT_TOL = 1e-10
MAX_RADIUS = 64
_EPS = float(np.finfo(float).eps)


class ThetaError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    tail_bound: float

    def __complex__(self):
        return complex(self.value)

    def __abs__(self):
        return abs(self.value)


@dataclass(frozen=True)
class Characteristic:
    """Integral characteristic m = (m', m''); the theta is theta[m'/2; m''/2]."""

    mprime: tuple[int, ...]
    mdprime: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "mprime", tuple(int(x) for x in self.mprime))
        object.__setattr__(self, "mdprime", tuple(int(x) for x in self.mdprime))
        if len(self.mprime) != len(self.mdprime):
            raise ValueError("m' and m'' must have the same length")

    @property
    def genus(self) -> int:
        return len(self.mprime)

    @property
    def parity(self) -> int:
        """e(m) = (-1)^(m', m'')."""
        return -1 if sum(a * b for a, b in zip(self.mprime, self.mdprime)) % 2 else 1

    @property
    def is_even(self) -> bool:
        return self.parity == 1

    @classmethod
    def all(cls, g: int) -> list["Characteristic"]:
        """The 4^g characteristics with entries in {0, 1}."""
        return [
            cls(bits_of(a, g), bits_of(b, g)) for a in range(1 << g) for b in range(1 << g)
        ]


# -- truncation ----------------------------------------------------------------


def _tail_bound(lam: float, g: int, R: int, envelope: float = 1.0) -> float:
    """Bound on the terms outside the box |u|_inf <= R (see module docstring)."""
    q = math.exp(-2 * math.pi * lam)
    one_side = math.exp(-math.pi * lam / 4) / (1 - q)
    full = 1 + 2 * one_side
    tail = 2 * math.exp(-math.pi * lam * (R + 0.5) ** 2) / (1 - q ** (R + 1))
    return envelope * g * tail * full ** (g - 1)


def truncation_radius(lam: float, g: int, tol: float, envelope: float = 1.0) -> tuple[int, float]:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if lam <= 0:
        raise ThetaError("Im(tau) is not positive definite")
    for R in range(0, MAX_RADIUS + 1):
        bound = _tail_bound(lam, g, R, envelope)
        if bound < tol:
            return R, bound
    raise ThetaError(
        f"truncation radius exceeds {MAX_RADIUS}; smallest eigenvalue of Im(tau) is {lam:.3g}"
    )


@lru_cache(maxsize=64)
def _box(g: int, R: int) -> np.ndarray:
    pts = np.array(list(itertools.product(range(-R, R + 1), repeat=g)), dtype=float)
    pts.setflags(write=False)
    return pts


def _as_tau(tau) -> np.ndarray:
    return tau.tau if isinstance(tau, SiegelPoint) else SiegelPoint(np.asarray(tau)).tau


def theta_many(chars: Sequence[tuple[Sequence[float], Sequence[float]]], tau, z=None, tol=DEFAULT_TOL):
    """Evaluate theta[a; b](tau, z) for several characteristics sharing tau and z."""
    T = _as_tau(tau)
    g = T.shape[0]
    Y = T.imag
    lam = float(np.linalg.eigvalsh(Y).min())
    z = np.zeros(g, dtype=complex) if z is None else np.asarray(z, dtype=complex).reshape(g)
    yz = z.imag
    Yinv_y = np.linalg.solve(Y, yz)
    envelope = math.exp(math.pi * float(yz @ Yinv_y))
    R, bound = truncation_radius(lam, g, tol, envelope)
    box = _box(g, R)
    out = []
    for a, b in chars:
        a = np.asarray(a, dtype=float).reshape(g)
        b = np.asarray(b, dtype=float).reshape(g)
        center = np.round(-(a + Yinv_y))
        v = box + center + a
        phase = 0.5 * np.einsum("ni,ij,nj->n", v, T, v) + v @ (z + b)
        terms = np.exp(2j * np.pi * phase)
        # floating-point error of exp (grows with the phase) and of the summation
        rounding = _EPS * float(
            (np.abs(terms) * (2 * np.pi * np.abs(phase) + 4 + math.log2(len(terms)))).sum()
        )
        out.append(ThetaValue(complex(terms.sum()), bound + rounding))
    return out


def theta(a, b, tau, z=None, tol: float = DEFAULT_TOL) -> ThetaValue:
    return theta_many([(a, b)], tau, z, tol)[0]


def theta2_vector(tau, tol: float = DEFAULT_TOL) -> list[ThetaValue]:
    """Second-order theta constants theta[a/2; 0](2 tau, 0), a in F_2^g (index order)."""
    T = _as_tau(tau)
    g = T.shape[0]
    zero = np.zeros(g)
    chars = [(np.array(bits_of(a, g)) / 2, zero) for a in range(1 << g)]
    return theta_many(chars, 2 * T, None, tol)


def theta2_values(tau, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    vals = theta2_vector(tau, tol)
    return np.array([v.value for v in vals]), np.array([v.tail_bound for v in vals])


def vartheta(m: Characteristic, tau, z=None, tol: float = DEFAULT_TOL) -> ThetaValue:
    a = np.array(m.mprime, dtype=float) / 2
    b = np.array(m.mdprime, dtype=float) / 2
    return theta(a, b, tau, z, tol)


def fourth_order_theta(mprime: Sequence[int], tau, tol: float = DEFAULT_TOL) -> ThetaValue:
    """theta[m'/4; 0](4 tau, 0)."""
    T = _as_tau(tau)
    g = T.shape[0]
    return theta(np.array(mprime, dtype=float) / 4, np.zeros(g), 4 * T, None, tol)


# -- identities ---------------------------------------------------------------


def addition_formula_residual(m: Characteristic, tau, tol: float = DEFAULT_TOL) -> float:
    """|vartheta_m^2 - sum_a (-1)^(a, m'') theta_2[a + m'] theta_2[a]|."""
    g = m.genus
    if set(m.mprime + m.mdprime) - {0, 1}:
        raise ValueError("characteristic entries must be 0 or 1")
    lhs = vartheta(m, tau, tol=tol).value ** 2
    th2 = [t.value for t in theta2_vector(tau, tol)]
    mp = sum(x << k for k, x in enumerate(m.mprime))
    mpp = sum(x << k for k, x in enumerate(m.mdprime))
    rhs = 0j
    for a in range(1 << g):
        sign = -1 if bin(a & mpp).count("1") % 2 else 1
        rhs += sign * th2[a ^ mp] * th2[a]
    return abs(lhs - rhs)


def fourth_order_residual(
    mprime: Sequence[int], tau, tol: float = DEFAULT_TOL, phase: str = "quarter"
) -> float:
    """|theta[m'/4; 0](4 tau) - 2^-g sum_{m''} w(m', m'') vartheta_(m', m'')(tau)|.

    ``phase="quarter"`` uses w = e(-(m', m'')/4), which holds for every m' mod 4.
    ``phase="sign"`` uses w = (-1)^(m', m''); that variant fails as soon as some
    entry of m' is 2 mod 4 and is kept only to demonstrate the difference.
    """
    T = _as_tau(tau)
    g = T.shape[0]
    mprime = tuple(int(x) % 4 for x in mprime)
    if len(mprime) != g:
        raise ValueError("m' has the wrong length")
    lhs = fourth_order_theta(mprime, T, tol).value
    rhs = 0j
    for b in range(1 << g):
        mpp = bits_of(b, g)
        dot = sum(x * y for x, y in zip(mprime, mpp))
        if phase == "quarter":
            w = cmath.exp(-2j * math.pi * dot / 4)
        elif phase == "sign":
            w = -1 if dot % 2 else 1
        else:
            raise ValueError(f"unknown phase convention {phase!r}")
        rhs += w * vartheta(Characteristic(mprime, mpp), T, tol=tol).value
    return abs(lhs - rhs / 2 ** g)


def transform_residual_tS(S, tau, tol: float = DEFAULT_TOL) -> float:
    """max_a |theta_2[a](tau + S) - i^(a'Sa) theta_2[a](tau)|."""
    T = _as_tau(tau)
    S = np.asarray(S, dtype=int)
    D = d_s_matrix(S).to_numpy()
    lhs, _ = theta2_values(T + S, tol)
    rhs, _ = theta2_values(T, tol)
    return float(np.abs(lhs - D @ rhs).max())


@dataclass(frozen=True)
class JTransform:
    residual: float
    scalar: complex
    scalar_spread: float
    modulus_error: float


def j_transform(tau, tol: float = DEFAULT_TOL, noise_floor: float = 1e-6) -> JTransform:
    """Compare theta_2(-tau^-1) with c det(tau/i)^(1/2) T_g theta_2(tau), fitting one scalar c."""
    T = _as_tau(tau)
    g = T.shape[0]
    u, _ = theta2_values(-np.linalg.inv(T), tol)
    v = t_g_matrix(g).to_numpy() @ theta2_values(T, tol)[0]
    root = cmath.sqrt(np.linalg.det(T / 1j))
    w = root * v
    good = np.abs(v) > noise_floor
    if not good.any():
        raise ThetaError("T_g theta_2(tau) is below the noise floor")
    k = int(np.argmax(np.abs(v)))
    c = u[k] / w[k]
    spread = float(np.abs(u[good] / w[good] - c).max())
    return JTransform(
        residual=float(np.abs(u - c * w).max()),
        scalar=complex(c),
        scalar_spread=spread,
        modulus_error=abs(abs(c) - 1),
    )


def transform_residual_J(tau, tol: float = DEFAULT_TOL, unit_tol: float = 1e-6) -> float:
    res = j_transform(tau, tol)
    if res.modulus_error > unit_tol:
        raise ThetaError(f"fitted scalar {res.scalar} is not a unit")
    return res.residual
