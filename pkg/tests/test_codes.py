import numpy as np
import pytest

from thetalab.algebra import SparsePolynomial
from thetalab.codes import (
    NAMED_CODES,
    CodeError,
    build_d16_plus,
    direct_sum,
    is_doubly_even_self_dual,
    make_code,
    named_code,
    read_code_file,
    weight_enumerator,
    zero_code,
)

RM13 = ["11111111", "01010101", "00110011", "00001111"]


def test_make_code_examples():
    assert make_code([], length=8).codewords == (0,)
    e8 = make_code(RM13)
    assert e8.dimension == 4 and len(set(e8.codewords)) == 16
    assert make_code(RM13 + [RM13[1]]) == e8
    words = set(e8.codewords)
    assert all(a ^ b in words for a in words for b in words)


def test_named_codes():
    assert named_code("e8").weight_distribution() == {0: 1, 4: 14, 8: 1}
    dist = {0: 1, 4: 28, 8: 198, 12: 28, 16: 1}
    assert named_code("d16_plus").weight_distribution() == dist
    assert named_code("e8_plus_e8").weight_distribution() == dist
    for name in NAMED_CODES:
        assert is_doubly_even_self_dual(named_code(name))
    with pytest.raises(CodeError):
        named_code("golay")


def test_self_duality_examples():
    assert not is_doubly_even_self_dual(zero_code(8))
    assert not is_doubly_even_self_dual(make_code(["11"]))


def test_components():
    assert len(named_code("d16_plus").weight4_components()) == 1
    assert len(named_code("e8_plus_e8").weight4_components()) == 2


def test_corrupted_glue_is_rejected():
    with pytest.raises(CodeError):
        build_d16_plus("1010101010101011")
    with pytest.raises(CodeError):
        build_d16_plus("1111000000000000")


def test_weight_enumerator_examples():
    W = weight_enumerator(named_code("e8"), 1)
    assert W == SparsePolynomial(1, {(8, 0): 1, (4, 4): 14, (0, 8): 1})
    assert weight_enumerator(zero_code(5), 1) == SparsePolynomial(1, {(5, 0): 1})
    W2 = weight_enumerator(named_code("e8"), 2)
    assert W2.is_homogeneous() and W2.degree == 8
    assert W2.evaluate([1, 1, 1, 1]) == 256


@pytest.mark.parametrize("name", NAMED_CODES)
@pytest.mark.parametrize("g", [1, 2, 3])
def test_all_ones_value(name, g):
    code = named_code(name)
    assert weight_enumerator(code, g).evaluate([1] * (1 << g)) == 2 ** (code.dimension * g)


def test_genus2_specializes_to_genus1():
    # setting F_{a1 a2} = F_{a1} recovers 2^k times the genus-1 enumerator
    e8 = named_code("e8")
    W1 = weight_enumerator(e8, 1)
    W2 = weight_enumerator(e8, 2)
    x = np.array([0.7, 1.3])
    vals = [x[a & 1] for a in range(4)]
    assert abs(W2.evaluate(vals) - 16 * W1.evaluate(x)) < 1e-9


@pytest.mark.parametrize("g", [1, 2])
def test_product_law(g):
    e8 = named_code("e8")
    W = weight_enumerator(e8, g)
    assert weight_enumerator(direct_sum(e8, e8), g) == W * W
    assert weight_enumerator(direct_sum(e8, zero_code(0)), g) == W


def test_direct_sum_shape():
    c = direct_sum(named_code("e8"), named_code("e8"))
    assert (c.length, c.dimension) == (16, 8)
    assert direct_sum(named_code("e8"), zero_code(0)) == named_code("e8")


def test_permutation_invariance():
    rng = np.random.default_rng(1)
    code = named_code("d16_plus")
    perm = [int(i) for i in rng.permutation(16)]
    for g in (1, 2):
        assert weight_enumerator(code.permuted(perm), g) == weight_enumerator(code, g)


def test_methods_agree():
    code = named_code("d16_plus")
    for g in (1, 2):
        direct = weight_enumerator(code, g, method="direct")
        assert weight_enumerator(code, g, method="split") == direct
        assert weight_enumerator(code, g, method="direct", workers=2) == direct


def test_size_guard():
    with pytest.raises(CodeError):
        weight_enumerator(named_code("d16_plus"), 5)


def test_genus4_term_counts():
    assert len(weight_enumerator(named_code("e8_plus_e8"), 4)) == 36547
    assert len(weight_enumerator(named_code("d16_plus"), 4)) == 36835


def test_code_file(tmp_path):
    path = tmp_path / "e8.txt"
    path.write_text("# RM(1,3)\n" + "\n".join(RM13) + "\n")
    assert read_code_file(path) == named_code("e8")
