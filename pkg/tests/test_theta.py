import itertools
import math

import numpy as np
import pytest

from thetalab.codes import CodeError, make_code, named_code
from thetalab.symplectic import SiegelPoint, random_siegel_point
from thetalab.theta import (
    Characteristic,
    ThetaError,
    addition_formula_residual,
    fourth_order_residual,
    j_transform,
    theta,
    theta2_vector,
    transform_residual_J,
    transform_residual_tS,
    vartheta,
)
from thetalab.lattice import (
    EvenLattice,
    LatticeError,
    construction_a,
    integer_determinant,
    lattice_theta,
    shell_counts,
)


def test_theta_examples():
    v = theta([0], [0], [[2j]])
    direct = 1 + 2 * math.exp(-2 * math.pi) + 2 * math.exp(-8 * math.pi) + 2 * math.exp(-18 * math.pi)
    assert abs(v.value - direct) < 1e-15
    assert v.tail_bound < 1e-10
    for s in range(5):
        tau = random_siegel_point(1, s)
        odd = theta([0.5], [0.5], tau)
        assert abs(odd.value) <= odd.tail_bound
    two = theta([0, 0], [0, 0], np.diag([2j, 2j]))
    assert abs(two.value - v.value ** 2) < 1e-10


def test_theta2_examples():
    a, b = theta2_vector([[1j]])
    assert abs(a.value - 1.0037348854877) < 1e-12
    direct = sum(math.exp(-2 * math.pi * (m + 0.5) ** 2) for m in range(-5, 5))
    assert abs(b.value - direct) < 1e-15
    vals = [t.value for t in theta2_vector(np.diag([1.3j, 0.8j, 2.1j]))]
    assert all(abs(z.imag) < 1e-15 and z.real > 0 for z in vals)


def test_theta2_diagonal_factorization():
    t1, t2 = 0.3 + 1.1j, -0.2 + 0.7j
    v1 = [t.value for t in theta2_vector([[t1]])]
    v2 = [t.value for t in theta2_vector([[t2]])]
    v = [t.value for t in theta2_vector(np.diag([t1, t2]))]
    for a in range(4):
        assert abs(v[a] - v1[a & 1] * v2[a >> 1]) < 1e-10


def test_vartheta_examples():
    assert abs(vartheta(Characteristic((0,), (0,)), [[1j]]).value - 1.0864348112133) < 1e-12
    for g in (1, 2, 3):
        m = Characteristic((1,) * g, (1,) * g)
        assert m.parity == (-1) ** g


def test_parity_count_and_vanishing():
    for g in (1, 2, 3):
        chars = Characteristic.all(g)
        even = [m for m in chars if m.is_even]
        assert len(even) == 2 ** (g - 1) * (2 ** g + 1)
    tau = random_siegel_point(2, 8)
    for m in Characteristic.all(2):
        v = vartheta(m, tau)
        if m.is_even:
            assert abs(v.value) > 1e-3
        else:
            assert abs(v.value) <= v.tail_bound


def test_tail_bound_honesty():
    tau = random_siegel_point(2, 2)
    coarse = theta([0.25, 0], [0, 0.5], tau, tol=1e-4)
    fine = theta([0.25, 0], [0, 0.5], tau, tol=1e-12)
    assert abs(coarse.value - fine.value) <= coarse.tail_bound + fine.tail_bound
    assert coarse.tail_bound <= 1e-4


def test_theta_with_z():
    tau = random_siegel_point(1, 3)
    z = [0.2 + 0.1j]
    t = tau.tau[0, 0]
    direct = sum(np.exp(1j * math.pi * m * m * t + 2j * math.pi * m * z[0]) for m in range(-30, 31))
    assert abs(theta([0], [0], tau, z).value - direct) < 1e-12


def test_radius_cap():
    with pytest.raises(ThetaError):
        theta([0], [0], [[1e-5j]])


def test_addition_formula():
    for s in range(3):
        tau = random_siegel_point(1, s)
        assert addition_formula_residual(Characteristic((0,), (0,)), tau) < 1e-9
    tau = random_siegel_point(2, 0)
    for m in Characteristic.all(2):
        assert addition_formula_residual(m, tau) < 1e-8


def test_fourth_order_examples():
    assert fourth_order_residual([0], [[1j]]) < 1e-9
    assert fourth_order_residual([1], [[1j]]) < 1e-9
    assert fourth_order_residual([0, 0], np.diag([1.2j, 0.9j])) < 1e-9


def test_fourth_order_all_residues():
    tau = random_siegel_point(2, 6)
    for mp in itertools.product(range(4), repeat=2):
        assert fourth_order_residual(mp, tau) < 1e-8


def test_fourth_order_sign_variant_fails_at_two():
    # with w = (-1)^(m', m'') the identity breaks when an entry of m' is 2 mod 4
    tau = random_siegel_point(1, 0)
    assert fourth_order_residual([1], tau, phase="sign") < 1e-9
    assert fourth_order_residual([2], tau, phase="sign") > 0.1


def test_transform_tS():
    tau = random_siegel_point(2, 1)
    assert transform_residual_tS(np.zeros((2, 2), dtype=int), tau) == 0
    assert transform_residual_tS([[1]], [[1j]]) < 1e-10
    assert transform_residual_tS([[0, 1], [1, 0]], tau) < 1e-9


def test_transform_J():
    for g in (1, 2, 3):
        jt = j_transform(1j * np.eye(g))
        assert jt.residual < 1e-9
        assert abs(abs(jt.scalar) - 1) < 1e-12
    assert transform_residual_J([[2j]]) < 1e-9
    jt = j_transform(random_siegel_point(2, 5))
    assert jt.scalar_spread < 1e-9


def test_construction_a():
    e8 = construction_a(named_code("e8"))
    assert e8.rank == 8 and integer_determinant(e8.gram) == 1
    assert np.all(np.diag(e8.gram) % 2 == 0)
    assert np.abs(e8.basis @ e8.basis.T - e8.gram).max() < 1e-10
    assert shell_counts(e8, 6) == {0: 1, 2: 240, 4: 2160, 6: 6720}
    d16 = construction_a(named_code("d16_plus"))
    assert d16.rank == 16 and integer_determinant(d16.gram) == 1
    assert shell_counts(d16, 4) == {0: 1, 2: 480, 4: 61920}
    with pytest.raises(CodeError):
        construction_a(make_code(["1111"]))


def test_integer_determinant():
    rng = np.random.default_rng(2)
    for _ in range(10):
        M = rng.integers(-4, 5, (5, 5))
        assert integer_determinant(M) == round(np.linalg.det(M))
    assert integer_determinant([[0, 1], [1, 0]]) == -1


def test_lattice_theta():
    e8 = construction_a(named_code("e8"))
    t = 2j
    q = np.exp(1j * math.pi * t)
    series = 1 + 240 * q ** 2 + 2160 * q ** 4 + 6720 * q ** 6 + 17520 * q ** 8
    assert abs(lattice_theta(e8, [[t]]).value - series) < 1e-9
    with pytest.raises(LatticeError):
        lattice_theta(e8, random_siegel_point(3, 0))
    # cutoff infeasible for tiny Im(tau)
    with pytest.raises(LatticeError):
        lattice_theta(e8, np.diag([0.01j, 0.01j]))


def test_lattice_theta_genus2_diagonal_factorizes():
    e8 = construction_a(named_code("e8"))
    a, b = 0.1 + 1.6j, -0.3 + 1.9j
    two = lattice_theta(e8, np.diag([a, b])).value
    assert abs(two - lattice_theta(e8, [[a]]).value * lattice_theta(e8, [[b]]).value) < 1e-9


def test_even_lattice_validation():
    with pytest.raises(ArithmeticError):
        EvenLattice(np.array([[1, 0], [0, 1]]))
