from fractions import Fraction as F

import pytest

from exactnum import PuiseuxSeries
import genmat
import toeplitz
from toeplitz import NonPositive, ToeplitzError
import tropic
from weyl import ParabolicData

B3 = ParabolicData.borel(3)


def test_build_y_gl3_b():
    Y = toeplitz.build_Y(B3, [F(1), F(2), F(3)])
    assert Y[2, 1] == F(4, 3)
    assert Y[3, 2] == F(1, 2)
    assert Y[3, 1] == F(1, 6)
    assert Y.is_lower_unitriangular()


def test_non_toeplitz_reports_first_violation():
    report = toeplitz.is_toeplitz(toeplitz.build_Y(B3, [F(1), F(2), F(3)]))
    assert not report.is_toeplitz
    assert report.violation == (-1, (2, 1), (3, 2))
    assert not report.heuristic


def test_toeplitz_point_gives_filling():
    report = toeplitz.toeplitz_filling(B3, [F(2), F(1), F(2)])
    assert report.is_toeplitz
    # constant m has valuation zero everywhere
    assert set(report.filling.entries.values()) == {0}


def test_recover_ideal_coordinates():
    m = [F(1), F(2), F(3)]
    assert toeplitz.recover_ideal_coords(toeplitz.build_Y(B3, m)) == {1: 1, 2: 2, 3: 3}


def test_recover_ideal_coordinates_gl4():
    P = ParabolicData.borel(4)
    m = [F(k + 1, 7 - k) for k in range(6)]
    recovered = toeplitz.recover_ideal_coords(toeplitz.build_Y(P, m))
    assert [recovered[k] for k in range(1, 7)] == m


@pytest.mark.parametrize("m", [[F(1), F(-2), F(3)], [F(1), F(0), F(3)]])
def test_non_positive_coordinates(m):
    with pytest.raises(NonPositive):
        toeplitz.build_Y(B3, m)


def test_negative_leading_series_is_not_positive():
    with pytest.raises(NonPositive):
        toeplitz.build_Y(ParabolicData.borel(2), [PuiseuxSeries.monomial(-1, 1)])


def test_word_length_mismatch():
    with pytest.raises(ToeplitzError):
        toeplitz.build_Y(B3, [F(1), F(2)])


def test_witness_for_gl3_b():
    lam = (2, 1, -1)
    m, Y = toeplitz.toeplitz_from_filling(B3, lam)
    assert [x.valuation for x in m] == [F(1, 2), F(5, 6), F(5, 6)]
    report = toeplitz.toeplitz_filling(B3, m, lam=lam)
    assert report.is_toeplitz
    assert report.filling.entries == tropic.ideal_filling_for_lambda(B3, lam).entries


def test_witness_for_projective_plane():
    P = ParabolicData.parse(3, "1")
    m, Y = toeplitz.toeplitz_from_filling(P, (1, 0, 0))
    assert [x.valuation for x in m] == [F(1, 3), F(1, 3)]
    assert Y[3, 1] == PuiseuxSeries.zero()


def test_witness_limited_to_small_n():
    with pytest.raises(ToeplitzError):
        toeplitz.toeplitz_from_filling(ParabolicData.borel(4), (3, 2, 1, 0))


def test_describe_formats_entries():
    rows = toeplitz.describe(toeplitz.build_Y(B3, [F(1), F(2), F(3)]))
    assert rows[0] == ["1", "0", "0"]
    assert rows[1][0] == "4/3"


def test_numeric_critical_point_gl2():
    point = toeplitz.numeric_critical_point(ParabolicData.borel(2), (3, 1))
    assert point.m[1] == pytest.approx(1e-3, rel=1e-6)
    assert point.rounded == {1: F(1)}
    assert point.toeplitz.is_toeplitz
    assert point.toeplitz.heuristic


def test_numeric_critical_point_rejects_bad_t0():
    with pytest.raises(ValueError):
        toeplitz.numeric_critical_point(ParabolicData.borel(2), (3, 1), t0=2.0)


def test_identity_is_toeplitz():
    assert toeplitz.is_toeplitz(genmat.identity(3)).is_toeplitz
