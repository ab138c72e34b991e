from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetalab.algebra import (
    GaussianRational,
    I,
    SparsePolynomial,
    apply_matrix_substitution,
    bits_of,
    index_of,
    poly_add,
    poly_mul,
)
from thetalab.codes import named_code, weight_enumerator
from thetalab.hgroup import UnitaryAction, d_s_matrix, t_g_matrix


def F(g, a, e=1):
    return SparsePolynomial.variable(g, a) ** e


def test_indexing_is_little_endian():
    assert index_of((1, 0)) == 1
    assert index_of((0, 1)) == 2
    assert bits_of(6, 3) == (0, 1, 1)
    assert all(index_of(bits_of(a, 4)) == a for a in range(16))


def test_gaussian_rational_lowest_terms():
    x = GaussianRational(Fraction(2, 4), Fraction(-3, 6))
    assert x.re == Fraction(1, 2) and x.im == Fraction(-1, 2)
    assert I * I == -1
    assert (1 + I) * (1 - I) == 2
    assert GaussianRational(1, 1) / GaussianRational(1, 1) == 1
    assert GaussianRational.parse(str(GaussianRational(Fraction(3, 4), -2))) == GaussianRational(Fraction(3, 4), -2)


def test_add_examples():
    p = F(1, 0, 8)
    assert poly_add(p, SparsePolynomial.zero(1)) == p
    assert (p + (-p)).is_zero()
    W = weight_enumerator(named_code("e8"), 1)
    assert poly_add(W, W) == SparsePolynomial(1, {(8, 0): 2, (4, 4): 28, (0, 8): 2})


def test_mul_examples():
    W = weight_enumerator(named_code("e8"), 1)
    assert poly_mul(W, SparsePolynomial.constant(1)) == W
    assert poly_mul(F(1, 0, 4), F(1, 1, 4)) == SparsePolynomial(1, {(4, 4): 1})
    sq = SparsePolynomial(1, {(16, 0): 1, (12, 4): 28, (8, 8): 198, (4, 12): 28, (0, 16): 1})
    assert poly_mul(W, W) == sq


def test_genus_mismatch():
    with pytest.raises(ValueError):
        F(1, 0) + F(2, 0)


def test_no_zero_coefficients_and_exponent_length():
    p = SparsePolynomial(2, {(1, 0, 0, 0): 0, (0, 1, 0, 0): 3})
    assert len(p) == 1
    with pytest.raises(ValueError):
        SparsePolynomial(2, {(1, 0): 1})


def test_substitution_examples():
    W = weight_enumerator(named_code("e8"), 1)
    assert apply_matrix_substitution(UnitaryAction.identity(1), W) == W
    D = d_s_matrix([[1]])
    assert apply_matrix_substitution(D, F(1, 1, 4)) == F(1, 1, 4)
    assert apply_matrix_substitution(D, F(1, 1)) == F(1, 1).scale(I)
    assert apply_matrix_substitution(t_g_matrix(1), W) == W


def test_substitution_composition_convention():
    p = F(1, 0, 3) * F(1, 1) + F(1, 1, 4).scale(2)
    M1, M2 = t_g_matrix(1), d_s_matrix([[1]])
    lhs = apply_matrix_substitution(M1, apply_matrix_substitution(M2, p))
    assert lhs == apply_matrix_substitution(M2 @ M1, p)


def test_text_and_json_round_trip():
    W = weight_enumerator(named_code("e8"), 2)
    assert SparsePolynomial.from_text(W.to_text(), 2) == W
    assert SparsePolynomial.from_json(W.to_json()) == W
    q = F(1, 0, 2).scale(GaussianRational(Fraction(1, 3), -2))
    assert SparsePolynomial.from_text(q.to_text(), 1) == q
    assert SparsePolynomial.zero(1).to_text() == "0"


def test_evaluate():
    W = weight_enumerator(named_code("e8"), 1)
    assert W.evaluate([1, 1]) == 16
    assert abs(W.evaluate([2, 1j]) - (256 + 14 * 16 + 1)) < 1e-9


coef = st.builds(GaussianRational, st.integers(-3, 3), st.integers(-3, 3))
exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exps, coef, max_size=4).map(lambda d: SparsePolynomial(1, d))
matrices = st.lists(st.lists(coef, min_size=2, max_size=2), min_size=2, max_size=2)


@settings(max_examples=30, deadline=None)
@given(polys, polys, matrices)
def test_substitution_is_ring_homomorphism(p, q, M):
    A = UnitaryAction.from_rows(1, M)
    assert apply_matrix_substitution(A, p * q) == apply_matrix_substitution(A, p) * apply_matrix_substitution(A, q)
    assert apply_matrix_substitution(A, p + q) == apply_matrix_substitution(A, p) + apply_matrix_substitution(A, q)


@settings(max_examples=30, deadline=None)
@given(polys, polys, matrices, matrices)
def test_substitution_composes(p, _q, M1, M2):
    A, B = UnitaryAction.from_rows(1, M1), UnitaryAction.from_rows(1, M2)
    assert apply_matrix_substitution(A, apply_matrix_substitution(B, p)) == apply_matrix_substitution(B @ A, p)


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_exact_round_trips(p, q):
    assert (p + q) - q == p
    assert (p * q) - q * p == SparsePolynomial.zero(1)
