import numpy as np
import pytest

from thetalab.algebra import SparsePolynomial
from thetalab.codes import named_code, weight_enumerator
from thetalab.hgroup import apply_action, check_invariance, d_s_matrix
from thetalab.lattice import construction_a, lattice_theta
from thetalab.symplectic import random_siegel_point
from thetalab.theta import theta2_values
from thetalab.thetamap import schottky_polynomial, stream_th2, th2_evaluate, vanishing_experiment

E8_G1 = SparsePolynomial(1, {(16, 0): 1, (12, 4): 28, (8, 8): 198, (4, 12): 28, (0, 16): 1})


def test_constant():
    ev = th2_evaluate(SparsePolynomial.constant(2, 1), random_siegel_point(2, 0))
    assert ev.value == 1 and ev.normalization == 1


def test_odd_degree_rejected():
    with pytest.raises(ValueError):
        th2_evaluate(SparsePolynomial.variable(1, 0), [[1j]])
    with pytest.raises(ValueError):
        th2_evaluate(SparsePolynomial.constant(2, 1), [[1j]])


def test_e8_matches_lattice():
    W = weight_enumerator(named_code("e8"), 1)
    lat = construction_a(named_code("e8"))
    a = th2_evaluate(W, [[2j]]).value
    assert abs(a - lattice_theta(lat, [[2j]]).value) < 1e-9
    # beyond the shortest vector only the zero tuple survives
    assert lattice_theta(lat, [[40j]]).value == 1


def test_pipeline_equality_random_points():
    e8 = named_code("e8")
    lat = construction_a(e8)
    rng = np.random.default_rng(12)
    for g, height, count in ((1, 1.0, 10), (2, 3.0, 3)):
        W = weight_enumerator(e8, g)
        for _ in range(count):
            tau = random_siegel_point(g, rng, height=height)
            a = th2_evaluate(W, tau).value
            b = lattice_theta(lat, tau).value
            assert abs(a - b) <= 1e-8 * abs(b)


def test_product_on_diagonal():
    W1 = weight_enumerator(named_code("e8"), 1)
    W2 = weight_enumerator(named_code("e8"), 2)
    v1 = th2_evaluate(W1, [[2j]]).value
    v2 = th2_evaluate(W2, np.diag([2j, 2j])).value
    assert abs(v2 - v1 ** 2) < 1e-9


def test_translation_equivariance():
    W = weight_enumerator(named_code("d16_plus"), 2)
    tau = random_siegel_point(2, 3)
    S = np.array([[1, 1], [1, 0]])
    a = th2_evaluate(W, tau.tau + S).value
    b = th2_evaluate(W, tau).value
    assert abs(a - b) < 1e-8 * max(1, abs(b))
    assert apply_action(d_s_matrix(S), W) == W


def test_homogeneity():
    W = weight_enumerator(named_code("e8"), 2)
    tau = random_siegel_point(2, 4)
    ev = th2_evaluate(W, tau)
    ev3 = th2_evaluate(W.scale(3), tau)
    assert abs(ev3.value - 3 * ev.value) < 1e-12 * abs(ev3.value)
    assert ev3.ratio == pytest.approx(ev.ratio, rel=1e-14)


def test_schottky_low_genus():
    assert schottky_polynomial(1).is_zero()
    assert schottky_polynomial(2).is_zero()
    assert weight_enumerator(named_code("e8_plus_e8"), 1) == E8_G1
    J3 = schottky_polynomial(3)
    assert not J3.is_zero() and check_invariance(J3)
    assert not schottky_polynomial(4).is_zero()
    with pytest.raises(ValueError):
        schottky_polynomial(5)


def test_genus3_vanishing():
    rep = vanishing_experiment(3, 5, seed=7)
    assert rep.passed
    assert max(p["ratio"] for p in rep.points) < 1e-6


def test_genus4_experiment():
    rep = vanishing_experiment(4, 3, seed=11, n_diagonal=2)
    generic = [p["ratio"] for p in rep.points if p["kind"] == "generic"]
    diagonal = [p["ratio"] for p in rep.points if p["kind"] == "diagonal"]
    assert max(diagonal) < 1e-6
    assert min(generic) >= 1e-4
    assert rep.passed


def test_stream_matches_polynomial():
    for g in (1, 2, 3):
        tau = random_siegel_point(g, g)
        vals, _ = theta2_values(tau)
        for name in ("e8", "d16_plus"):
            ev = th2_evaluate(weight_enumerator(named_code(name), g), tau)
            s = stream_th2(named_code(name), g, vals, workers=2)
            assert abs(s - ev.value) <= 1e-12 * ev.normalization * 2 ** g


def test_genus4_stream_e8():
    tau = random_siegel_point(4, 0)
    vals, _ = theta2_values(tau)
    ev = th2_evaluate(weight_enumerator(named_code("e8"), 4), tau)
    assert abs(stream_th2(named_code("e8"), 4, vals) - ev.value) < 1e-10 * ev.normalization


@pytest.mark.slow
def test_genus4_stream_cross_check():
    # 2 x 2^32 tuples per point: roughly seven minutes per point on one core
    J = schottky_polynomial(4)
    tau = random_siegel_point(4, 21)
    vals, _ = theta2_values(tau)
    ev = th2_evaluate(J, tau)
    s = stream_th2(named_code("e8_plus_e8"), 4, vals, workers=4) - stream_th2(named_code("d16_plus"), 4, vals, workers=4)
    assert abs(s - ev.value) < 1e-8 * ev.normalization
