from fractions import Fraction

import pytest

import gbcharts
from gbcharts import IdealPoint, StringPoint, WordNotSupported
from exactnum import chart_field, parse_expression, same
import genmat
from toolkit_constants import FactorKind
import weyl
from weyl import BraidMove, PositiveRoot


def test_string_chart_dimension_three(z3):
    K, d, z = z3
    el = gbcharts.string_chart(StringPoint(d, z, weyl.word_i0(3)))
    assert same(el.b[2, 1], parse_expression(K, "d3*(z1 + z2/z3)"))
    assert same(el.b[3, 3], parse_expression(K, "d1/(z1*z3)"))
    assert el.b[1, 2] == 0
    W = parse_expression(K, "z1 + z2/z3 + z3 + (d1/d2)*(1/z3 + z2/(z1*z3^2)) + (d2/d3)*z3/z2")
    assert same(el.superpotential(), W)
    assert all(same(a, b) for a, b in zip(el.highest_weight(), d))


def test_weight_matrix_formula_matches_chart(z3):
    K, d, z = z3
    p = StringPoint(d, z, weyl.word_i0(3))
    assert gbcharts.weight_matrix_string(p).equals(gbcharts.string_chart(p).t_R)


def test_ideal_chart_dimension_three(m3):
    K, d, m = m3
    el = gbcharts.ideal_chart(IdealPoint.from_list(d, m, weyl.word_i0(3)))
    assert same(el.b[1, 1], parse_expression(K, "d3*m2*m3"))
    assert same(el.b[3, 2], parse_expression(K, "d2*m1/(m2*m3)"))
    W = parse_expression(K, "m1 + m2 + m2*m3/m1 + (d2/d3)*m1/(m2*m3) + (d1/d2)*(m3/m1^2 + 1/m1)")
    assert same(el.superpotential(), W)
    assert el.lower.is_lower_unitriangular()


def test_charts_agree_through_coordinate_change():
    K, d, groups = chart_field(4, 6, prefixes=("z",))
    z = groups["z"]
    word = weyl.word_i0(4)
    m = gbcharts.string_to_ideal(z, 4)
    via_ideal = gbcharts.ideal_chart(IdealPoint.from_list(d, m, word)).b
    assert via_ideal.equals(gbcharts.string_chart(StringPoint(d, z, word)).b)


def test_monomial_coordinate_change_round_trip(z3):
    K, d, z = z3
    m = gbcharts.string_to_ideal(z, 3)
    assert [str(v) for v in m] == ["z3", "z1", "z2/z1"]
    assert all(same(a, b) for a, b in zip(gbcharts.ideal_to_string(m, 3), z))


def test_general_coordinate_change_on_i0_is_monomial(z3):
    K, d, z = z3
    word = weyl.word_i0(3)
    m = gbcharts.string_to_ideal_general(word, z)
    roots = weyl.root_order(word)
    assert all(same(m[r], v) for r, v in zip(roots, gbcharts.string_to_ideal(z, 3)))


def test_braid_transform_is_an_involution():
    word = weyl.word_i0(3)
    m = {PositiveRoot(1, 2): Fraction(2), PositiveRoot(1, 3): Fraction(3), PositiveRoot(2, 3): Fraction(5)}
    w1, m1 = gbcharts.braid_transform_m(word, BraidMove(3, 1), m)
    assert w1.indices == (2, 1, 2)
    assert m1[PositiveRoot(1, 3)] == Fraction(10, 7)
    w2, m2 = gbcharts.braid_transform_m(w1, BraidMove(3, 1), m1)
    assert w2.indices == (1, 2, 1) and m2 == m


def test_braid_moves_keep_b(z3):
    K, d, z = z3
    word = weyl.word_i0(3)
    m = gbcharts.string_to_ideal_general(word, z)
    w1, m1 = gbcharts.braid_transform_m(word, BraidMove(3, 1), m)
    b0 = gbcharts.ideal_chart(IdealPoint(d, m, word)).b
    assert gbcharts.ideal_chart(IdealPoint(d, m1, w1)).b.equals(b0)


def test_invalid_move_is_reported():
    m = {PositiveRoot(1, 2): 1, PositiveRoot(1, 3): 1, PositiveRoot(2, 3): 1}
    with pytest.raises(gbcharts.InvalidMove):
        gbcharts.braid_transform_m(weyl.word_i0(3), BraidMove(2, 1), m)
    with pytest.raises(weyl.InvalidMove):
        gbcharts.string_braid_move(weyl.word_i0(3), BraidMove(3, 2), [1, 1, 1])


def test_word_must_represent_w0(z3):
    K, d, z = z3
    with pytest.raises(WordNotSupported):
        StringPoint(d, z[:2], weyl.ReducedWord((1, 2), 3))


def test_p_coordinates_factor_u1():
    K, d, groups = chart_field(4, 6, prefixes=("z",))
    z = groups["z"]
    factors = genmat.factors_along(FactorKind.X, gbcharts.word_i0_prime(4).indices, gbcharts.p_coordinates(z, 4))
    u1 = genmat.word_product(factors, 4)
    assert u1.equals(gbcharts.string_u1(z, weyl.word_i0(4)))


def test_ideal_from_p(z3):
    K, d, z = z3
    m = gbcharts.ideal_from_p(gbcharts.p_coordinates(z, 3), 3)
    assert all(same(a, b) for a, b in zip(m, gbcharts.string_to_ideal(z, 3)))


def test_word_i0_prime():
    assert gbcharts.word_i0_prime(4).indices == (3, 2, 1, 3, 2, 3)


def test_chamber_ansatz_recovers_the_flag():
    u1 = genmat.GenericMatrix([[1, 2, 3], [0, 1, 5], [0, 0, 1]])
    t = gbcharts.chamber_ansatz_coords(u1, weyl.word_i0(3))
    assert t == [Fraction(1, 2), Fraction(2, 7), Fraction(7, 6)]
    Y = genmat.word_product([genmat.y(i, v) for i, v in zip((1, 2, 1), t)], 3)
    assert (genmat.inverse(u1 @ genmat.w0bar(3)) @ Y).is_upper_triangular()


def test_decompose_big_cell_element():
    u1 = genmat.GenericMatrix([[1, 2, 3], [0, 1, 5], [0, 0, 1]])
    u2 = genmat.GenericMatrix([[1, 7, 1], [0, 1, 2], [0, 0, 1]])
    d = genmat.diagonal([Fraction(2), Fraction(3), Fraction(5)])
    got_u1, got_d, got_u2 = gbcharts.decompose(u1 @ d @ genmat.w0bar(3) @ u2)
    assert got_u1.equals(u1)
    assert got_d.equals(d)
    assert got_u2.equals(u2)


def test_coordinate_change_off_i0():
    K, d, groups = chart_field(4, 6, prefixes=("z",))
    z = groups["z"]
    m = gbcharts.string_to_ideal_general(weyl.ReducedWord((1, 2, 3, 2, 1, 2), 4), z)
    assert same(m[PositiveRoot(2, 3)], parse_expression(K, "z2/z1 + z2^2*z4*(z4*z6 + z5)/(z1*z3*z5)"))
    assert same(m[PositiveRoot(3, 4)], parse_expression(K, "z2/z1 + z3*z5/(z1*z4*(z4*z6 + z5))"))


WORDS4 = [(1, 2, 3, 1, 2, 1), (1, 2, 1, 3, 2, 1), (2, 1, 2, 3, 2, 1), (1, 2, 3, 2, 1, 2), (3, 2, 1, 3, 2, 3)]


@pytest.mark.parametrize("indices", WORDS4)
def test_charts_agree_on_every_word(indices):
    word = weyl.ReducedWord(indices, 4)
    d = [Fraction(3), Fraction(1, 2), Fraction(5, 3), Fraction(2)]
    z = [Fraction(k + 1, 7 - k) for k in range(6)]
    m = gbcharts.string_to_ideal_general(word, z)
    b = gbcharts.ideal_chart(IdealPoint(d, m, word)).b
    assert b.equals(gbcharts.string_chart(StringPoint(d, z, word)).b)
    assert gbcharts.ideal_to_string_general(word, m) == z
