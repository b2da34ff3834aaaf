from fractions import Fraction
import random

import pytest

import genmat
from genmat import GenericMatrix, SingularPrincipalMinor, SizeMismatch
from toolkit_constants import FactorKind
import weyl


def F(a, b=1):
    return Fraction(a, b)


def test_elementary_factors():
    X = genmat.elementary(genmat.x(1, F(3)), 3)
    assert X[1, 2] == 3 and X[2, 1] == 0
    Y = genmat.elementary(genmat.y(2, F(5)), 3)
    assert Y[3, 2] == 5
    T = genmat.elementary(genmat.torus(1, F(2)), 2)
    assert T.diagonal() == [2, F(1, 2)]
    with pytest.raises(weyl.InvalidIndex):
        genmat.elementary(genmat.x(3, F(1)), 3)


def test_x_neg_is_y_times_torus():
    z = F(7, 3)
    lhs = genmat.elementary(genmat.x_neg(1, z), 2)
    rhs = genmat.elementary(genmat.y(1, z), 2) @ genmat.elementary(genmat.torus(1, 1 / z), 2)
    assert lhs == rhs


def test_ldu_reassembles():
    g = GenericMatrix([[F(2), F(1), F(0)], [F(4), F(5), F(1)], [F(2), F(3), F(7)]])
    f = genmat.ldu(g)
    assert f.lower.is_lower_unitriangular()
    assert f.diagonal.is_diagonal()
    assert f.upper.is_upper_unitriangular()
    assert f.lower @ f.diagonal @ f.upper == g


def test_ldu_needs_nonzero_principal_minors():
    with pytest.raises(SingularPrincipalMinor):
        genmat.ldu(GenericMatrix([[F(0), F(1)], [F(1), F(0)]]))


def test_inverse_and_determinant():
    g = GenericMatrix([[F(0), F(2), F(1)], [F(1), F(1), F(0)], [F(3), F(0), F(1)]])
    assert g @ genmat.inverse(g) == genmat.identity(3)
    assert genmat.minor(g, (1, 2, 3), (1, 2, 3)) == -5
    assert genmat.minor(g, (1, 2), (2, 3)) == -1
    with pytest.raises(SizeMismatch):
        genmat.minor(g, (1,), (1, 2))


def test_w0bar_is_signed_antidiagonal():
    w = genmat.w0bar(4)
    for i in range(1, 5):
        for j in range(1, 5):
            assert (w[i, j] != 0) == (i + j == 5)
    assert genmat.permutation_of(w) == weyl.Permutation.longest(4)
    assert w @ genmat.w0bar_inverse(4) == genmat.identity(4)


def test_big_x_commutator_word():
    r1, r2 = F(2), F(5, 3)
    word = genmat.big_x_recursive(2, 2, [r1, r2])
    assert genmat.word_product(word, 3) == genmat.big_x(2, 2, r1 * r2, 3)


def test_chi_reads_superdiagonal():
    u = genmat.word_product([genmat.x(1, F(2)), genmat.x(2, F(3)), genmat.x(1, F(4))], 3)
    assert genmat.chi(u) == 9


def test_minors_via_paths_agree_with_determinants():
    rng = random.Random(7)
    word = (3, 2, 1, 3, 2, 3)
    args = [F(rng.randint(1, 9), rng.randint(1, 9)) for _ in word]
    factors = genmat.factors_along(FactorKind.X, word, args)
    u = genmat.word_product(factors, 4)
    pg = genmat.path_graph(factors, 4)
    for rows, cols in [((1,), (4,)), ((1, 2), (3, 4)), ((1, 2, 3), (2, 3, 4)), ((2,), (3,))]:
        assert genmat.minor_via_paths(pg, rows, cols) == genmat.minor(u, rows, cols)


def test_path_graph_rejects_weyl_factors():
    with pytest.raises(genmat.GenMatError):
        genmat.path_graph([genmat.sbar(1)], 2)


def test_factors_along_length_mismatch():
    with pytest.raises(SizeMismatch):
        genmat.factors_along(FactorKind.Y, (1, 2), [F(1)])


def test_path_graph_dot():
    text = genmat.path_graph([genmat.x(1, F(2))], 2).to_dot()
    assert text.startswith("digraph pathgraph {")
    assert 'label="2"' in text
