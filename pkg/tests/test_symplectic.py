import json

import numpy as np
import pytest

from thetalab.symplectic import (
    SiegelPoint,
    SymplecticMatrix,
    act,
    diagonal_sign,
    in_gamma,
    in_gamma_star_24,
    j_matrix,
    random_siegel_point,
    translation,
)


def eye(g):
    return translation(np.zeros((g, g), dtype=int))


def test_generators():
    for g in (1, 2, 3):
        J = j_matrix(g)
        assert J @ J == SymplecticMatrix.from_full(-np.eye(2 * g, dtype=int))
        assert translation(np.zeros((g, g), dtype=int)) == SymplecticMatrix.from_full(np.eye(2 * g, dtype=int))
    S1 = np.array([[1, 2], [2, 0]])
    S2 = np.array([[0, -1], [-1, 3]])
    assert translation(S1) @ translation(S2) == translation(S1 + S2)
    with pytest.raises(ValueError):
        translation([[0, 1], [0, 0]])


def test_not_symplectic_rejected():
    with pytest.raises(ValueError):
        SymplecticMatrix.from_full([[2, 0], [0, 1]])


def test_products_stay_symplectic():
    rng = np.random.default_rng(3)
    M = eye(2)
    for _ in range(10):
        S = rng.integers(-2, 3, (2, 2))
        S = np.triu(S) + np.triu(S, 1).T
        M = M @ translation(S) @ j_matrix(2)
    assert M._is_symplectic()


def test_act_examples():
    tau = random_siegel_point(2, 4)
    assert np.allclose(act(eye(2), tau).tau, tau.tau)
    S = np.array([[1, -1], [-1, 2]])
    assert np.allclose(act(translation(S), tau).tau, tau.tau + S)
    fixed = act(j_matrix(3), SiegelPoint(1j * np.eye(3))).tau
    assert np.allclose(fixed, 1j * np.eye(3))


def test_act_is_an_action():
    rng = np.random.default_rng(9)
    for _ in range(5):
        tau = random_siegel_point(2, rng)
        S = rng.integers(-2, 3, (2, 2))
        S = np.triu(S) + np.triu(S, 1).T
        M1, M2 = translation(S) @ j_matrix(2), j_matrix(2) @ translation(S.T)
        lhs = act(M1, act(M2, tau)).tau
        rhs = act(M1 @ M2, tau).tau
        assert np.abs(lhs - rhs).max() <= 1e-12 * np.abs(rhs).max()


def test_membership_examples():
    for r in (2, 4, 6):
        assert in_gamma(eye(2), r) and in_gamma(eye(2), r, strict2r=True)
    assert not in_gamma(translation(2 * np.eye(2, dtype=int)), 2, strict2r=True)
    assert in_gamma(translation(4 * np.eye(2, dtype=int)), 2, strict2r=True)
    assert not in_gamma(j_matrix(2), 2)


def test_gamma_star_examples():
    assert in_gamma_star_24(eye(3))
    m = diagonal_sign([-1, 1, 1])
    assert in_gamma(m, 2, strict2r=True)
    assert not in_gamma_star_24(m)
    S = np.array([[1, 3, 0], [3, -2, 1], [0, 1, 5]])
    assert in_gamma_star_24(translation(4 * S))


def test_siegel_point_validation():
    with pytest.raises(ValueError):
        SiegelPoint([[1j, 0.5], [0.0, 1j]])
    with pytest.raises(ValueError):
        SiegelPoint([[1j, 0], [0, -1j]])
    with pytest.raises(ValueError):
        SiegelPoint([[1, 0], [0, 1]])


def test_random_points():
    assert np.array_equal(random_siegel_point(3, 0, 0.0, perturb=0.0).tau, 1j * np.eye(3))
    a, b = random_siegel_point(3, 11), random_siegel_point(3, 11)
    assert np.array_equal(a.tau, b.tau)
    for s in range(20):
        t = random_siegel_point(4, s)
        assert t.imag_min_eigenvalue > 0
        d = random_siegel_point(4, s, diagonal=True)
        diag = np.diag(d.tau)
        assert np.count_nonzero(d.tau - np.diag(diag)) == 0
        assert len(set(diag)) == 4


def test_json_round_trip(tmp_path):
    tau = random_siegel_point(2, 1)
    again = SiegelPoint.from_json(json.dumps(tau.to_json()))
    assert np.array_equal(again.tau, tau.tau)
    path = tmp_path / "tau.json"
    path.write_text(json.dumps(tau.to_json()))
    assert np.array_equal(SiegelPoint.from_json(str(path)).tau, tau.tau)


def test_from_cli_report(tmp_path):
    tau = random_siegel_point(3, 1)
    path = tmp_path / "r.json"
    path.write_text(json.dumps({"schema": "theta-code-lab/1", "result": tau.to_json()}))
    assert np.array_equal(SiegelPoint.from_json(str(path)).tau, tau.tau)
