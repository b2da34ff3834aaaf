from fractions import Fraction
import random

import pytest

from exactnum import parse_expression, same
import gbcharts
import quiver
from quiver import PreconditionViolated, QuiverError
import toeplitz
from toolkit_constants import ArrowKind, VertexKind
import weyl
from weyl import ParabolicData


def _rand(rng):
    return Fraction(rng.randint(1, 9), rng.randint(1, 9))


def test_topology_of_gl3_b():
    topo = quiver.build_topology(ParabolicData.borel(3))
    assert sorted(topo.vertices) == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    assert len(topo.arrows) == 6
    assert [v.cell for v in topo.stars()] == [(1, 1), (2, 2), (3, 3)]
    assert topo.arrow((3, 2), (3, 1)).kind is ArrowKind.HORIZONTAL
    assert topo.arrow((3, 2), (2, 2)).label() == "a(2,0)"
    assert len(topo.squares()) == 1
    with pytest.raises(QuiverError):
        topo.arrow((1, 1), (2, 1))


def test_topology_of_partial_flag():
    P = ParabolicData.parse(8, "2,5,6")
    topo = quiver.build_topology(P)
    assert [v.cell for v in topo.stars()] == [(2, 1), (5, 3), (6, 6), (8, 7)]
    assert [topo.star_of_block(j) for j in range(1, 5)] == [(2, 1), (5, 3), (6, 6), (8, 7)]
    assert len(topo.dots()) == len(P.dots())
    assert all(v.kind is VertexKind.DOT for v in topo.dots())


def test_minimal_one_paths():
    topo = quiver.build_topology(ParabolicData.borel(3))
    assert quiver.minimal_one_path(topo, (2, 1)) == [topo.arrow((2, 1), (1, 1))]
    P = ParabolicData.parse(8, "2,5,6")
    topo = quiver.build_topology(P)
    for v in topo.dots():
        path = quiver.minimal_one_path(topo, v.cell)
        assert path[0].tail == v.cell
        assert all(a.head == b.tail for a, b in zip(path, path[1:]))
        assert path[-1].kind is ArrowKind.VERTICAL


def test_symbolic_decoration_gl3_b():
    P = ParabolicData.borel(3)
    dec = quiver.symbolic_decoration(P)
    K = dec.domain.zero.field
    assert same(dec.r[((3, 2), (2, 2))], parse_expression(K, "m2*m3/m1"))
    assert same(dec.r[((3, 2), (3, 1))], parse_expression(K, "d1*m3/(d2*m1^2)"))
    assert same(dec.cell_value((1, 1)), parse_expression(K, "d1"))


def test_quiver_superpotential_is_ideal_chart_superpotential():
    P = ParabolicData.borel(3)
    dec = quiver.symbolic_decoration(P)
    K = dec.domain.zero.field
    m = {P.root_of_dot(k, a): dec.m[P.dot_index(k, a)] for (k, a) in P.dots()}
    el = gbcharts.ideal_chart(gbcharts.IdealPoint(dec.d, m, weyl.wp_w0_word(P)))
    assert same(quiver.superpotential_F(dec), el.superpotential())
    assert quiver.gamma(dec).equals(el.t_R)


def test_gamma_two_ways_on_partial_flag():
    rng = random.Random(11)
    P = ParabolicData.parse(4, "1,3")
    dec = quiver.decorate(P, [_rand(rng) for _ in range(P.l + 1)], [_rand(rng) for _ in P.dots()])
    assert quiver.gamma(dec).diagonal() == quiver.gamma_via_paths(dec)


def test_horizontal_arrows_under_a_wide_square():
    dec = quiver.symbolic_decoration(ParabolicData.parse(8, "2,5,6"))
    K = dec.domain.zero.field
    assert same(dec.r[((6, 4), (6, 3))], parse_expression(K, "m4*m10*m20/(m3*m9)"))
    assert same(dec.r[((6, 5), (6, 4))], parse_expression(K, "m3*m9*m23/(m2*m8)"))
    t = quiver.gamma(dec).diagonal()
    assert same(t[0], parse_expression(K, "d4*m6*m12*m17*m21*m24*m26"))
    assert same(t[3], parse_expression(K, "d2*m2*m8/(m23*m24*m25)"))
    assert same(t[6], parse_expression(K, "d1/(m8*m9*m10*m11*m12*m13)"))


@pytest.mark.parametrize("n, ip", [(4, "1,3"), (5, "1,4"), (8, "2,5,6")])
def test_wide_squares_keep_both_chart_identities(n, ip):
    rng = random.Random(17)
    P = ParabolicData.parse(n, ip)
    dec = quiver.decorate(P, [_rand(rng) for _ in range(P.l + 1)], [_rand(rng) for _ in P.dots()])
    theta = quiver.quiver_chart_theta(dec)
    assert theta.lower.equals(quiver.dots_lower(dec))
    assert theta.diagonal.equals(quiver.gamma(dec))


def test_decorate_checks_sizes():
    P = ParabolicData.borel(3)
    with pytest.raises(QuiverError):
        quiver.decorate(P, [1, 1], [1, 1, 1])
    with pytest.raises(QuiverError):
        quiver.decorate(P, [1, 1, 1], [1, 1])


def test_critical_point_of_gl2():
    P = ParabolicData.borel(2)
    dec = quiver.decorate(P, [Fraction(4), Fraction(1)], [Fraction(2)])
    assert quiver.critical_residuals(dec).satisfied
    assert quiver.verify_sum_at_vertex(dec) == {(1, 1): True}
    lhs, rhs = quiver.diagonal_identity(dec, 2)
    assert lhs == rhs
    assert quiver.recoverable_torus_part(P, [Fraction(2)]) == [Fraction(4)]


def test_not_a_critical_point():
    P = ParabolicData.borel(2)
    dec = quiver.decorate(P, [Fraction(1), Fraction(1)], [Fraction(2)])
    report = quiver.critical_residuals(dec)
    assert not report.satisfied
    with pytest.raises(PreconditionViolated):
        quiver.verify_sum_at_vertex(dec)


@pytest.mark.parametrize("lam", [(3, 1, 0, -2), (2, 2, 1, 0), (4, 0, -1, -1)])
def test_diagonal_identity_at_numeric_critical_point(lam):
    P = ParabolicData.borel(4)
    cp = toeplitz.numeric_critical_point(P, lam, t0=0.5)
    dec = quiver.decorate(P, [0.5 ** v for v in lam], cp.m)
    assert max(abs(r) for r in quiver.critical_residuals(dec).residuals.values()) < 1e-6
    for i in range(2, 5):
        lhs, rhs = quiver.diagonal_identity(dec, i)
        assert lhs == pytest.approx(rhs, rel=1e-6)


def test_diagonal_identity_needs_borel():
    dec = quiver.decorate(ParabolicData.parse(3, "1"), [1, 1], [1, 1])
    with pytest.raises(PreconditionViolated):
        quiver.diagonal_identity(dec, 2)


def test_factorization_identities_hold():
    rng = random.Random(3)
    for P in (ParabolicData.borel(3), ParabolicData.parse(4, "2"), ParabolicData.parse(4, "1,3")):
        dec = quiver.decorate(P, [_rand(rng) for _ in range(P.l + 1)], [_rand(rng) for _ in P.dots()])
        _, u_l = quiver.matrices_gl_ul(dec)
        _, u_r = quiver.matrices_gr_ur(dec)
        assert u_l.is_upper_unitriangular()
        assert u_r.is_upper_unitriangular()


def test_quiver_chart_is_dots_times_gamma():
    rng = random.Random(5)
    for P in (ParabolicData.parse(3, "1"), ParabolicData.parse(4, "2"), ParabolicData.borel(4)):
        d = [_rand(rng) for _ in range(P.l + 1)]
        m = [_rand(rng) for _ in P.dots()]
        dec = quiver.decorate(P, d, m)
        theta = quiver.quiver_chart_theta(dec)
        assert theta.lower.equals(quiver.dots_lower(dec))
        assert theta.diagonal.equals(quiver.gamma(dec))
        assert theta.b.equals(quiver.psi_p(P, d, m))


def test_quiver_chart_matches_ideal_chart_on_gl3_b():
    P = ParabolicData.borel(3)
    dec = quiver.symbolic_decoration(P)
    m = {P.root_of_dot(k, a): dec.m[P.dot_index(k, a)] for (k, a) in P.dots()}
    el = gbcharts.ideal_chart(gbcharts.IdealPoint(dec.d, m, weyl.wp_w0_word(P)))
    assert quiver.quiver_chart_theta(dec).b.equals(el.b)


def test_conjecture_on_gl3_b():
    rng = random.Random(1)
    P = ParabolicData.borel(3)
    for _ in range(3):
        dec = quiver.decorate(P, [_rand(rng) for _ in range(P.l + 1)], [_rand(rng) for _ in P.dots()])
        assert quiver.check_conjecture(dec).holds


def test_dot_output():
    dec = quiver.decorate(ParabolicData.borel(2), [1, 1], [2])
    text = dec.to_dot()
    assert text.startswith("digraph quiver {")
    assert '"2,1" -> "1,1"' in text
    assert dec.to_dict()["arrows"][0]["label"]


@pytest.mark.slow
def test_partial_flag_symbolic_factorizations():
    dec = quiver.symbolic_decoration(ParabolicData.parse(8, "2,5,6"))
    quiver.matrices_gl_ul(dec)
    quiver.matrices_gr_ur(dec)
    K = dec.domain.zero.field
    assert same(quiver.gamma(dec).diagonal()[7], parse_expression(K, "d1/(m2*m3*m4*m5*m6*m7)"))


def test_reflected_quiver():
    rt = quiver.right_topology(ParabolicData.borel(3))
    assert rt.reflect((2, 1)) == (3, 2)
    assert rt.reflect((3, 1)) == (3, 1)
    assert len(rt.arrows()) == 6
    assert rt.sdots_in_column(1) == []
    rt4 = quiver.right_topology(ParabolicData.parse(4, "2"))
    assert rt4.square_bounds(1) == (2, 4)
    assert rt4.sdots_in_column(1) == [1]
    assert rt4.sdots_in_column(2) == []
