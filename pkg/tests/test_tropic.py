from fractions import Fraction as F
import random

import pytest

from case_processor import parse_affine
from toolkit_constants import Chart
import tropic
from tropic import NonDominant, TropicError
import weyl
from weyl import BraidMove, ParabolicData, PositiveRoot, ReducedWord

B3 = ParabolicData.borel(3)
LAM = (2, 1, -1)


def test_filling_for_gl3_b():
    filling = tropic.ideal_filling_for_lambda(B3, LAM)
    assert filling[(1, 2)] == F(1, 2)
    assert filling[(1, 3)] == F(5, 6)
    assert filling[(2, 3)] == F(5, 6)
    assert filling.ell == F(2, 3)
    assert filling.max_relations_hold()
    assert filling.lambda_sum_holds()
    assert filling.as_mu() == {1: F(1, 2), 2: F(5, 6), 3: F(5, 6)}


def test_filling_small_cases():
    assert tropic.ideal_filling_for_lambda(ParabolicData.borel(2), (3, 1)).entries == {(1, 2): 1}
    proj = tropic.ideal_filling_for_lambda(ParabolicData.parse(3, "1"), (1, 0, 0))
    assert proj.entries == {(1, 2): F(1, 3), (1, 3): F(1, 3)}


@pytest.mark.parametrize("P, lam", [
    (B3, (1, 2, 0)),
    (ParabolicData.parse(3, "1"), (1, 0, -1)),
    (B3, (1, 0)),
])
def test_non_dominant_weights(P, lam):
    with pytest.raises(NonDominant):
        tropic.check_dominant(P, lam)


def test_non_dominant_is_a_value_error():
    with pytest.raises(ValueError):
        tropic.ideal_filling_for_lambda(B3, (0, 1, 2))


def test_filling_to_quiver_point_and_back():
    filling = tropic.ideal_filling_for_lambda(B3, LAM)
    point = tropic.filling_to_quiver_point(filling)
    assert [point.delta[c] for c in ((1, 1), (2, 2), (3, 3))] == [2, 1, -1]
    back = tropic.quiver_point_to_filling(B3, point.rho, LAM)
    assert back.entries == filling.entries


def test_partial_flag_quiver_point_round_trip():
    P = ParabolicData.parse(4, "1,3")
    lam = (3, 1, 1, 0)
    filling = tropic.ideal_filling_for_lambda(P, lam)
    point = tropic.filling_to_quiver_point(filling)
    assert tropic.quiver_point_to_filling(P, point.rho, lam).entries == filling.entries


def test_tropical_critical_point():
    crit = tropic.tropical_critical_point(B3, LAM)
    assert crit.mu == {1: F(1, 2), 2: F(5, 6), 3: F(5, 6)}
    assert crit.mu_names() == {"mu1": F(1, 2), "mu2": F(5, 6), "mu3": F(5, 6)}
    poly = tropic.superpotential_polytope(B3, Chart.IDEAL, LAM)
    assert poly.interior(crit.mu_names())
    assert tropic.tropical_weight(crit.mu_names(), B3, Chart.IDEAL, LAM) == [F(2, 3)] * 3


def test_string_polytope_forms():
    poly = tropic.superpotential_polytope(B3, Chart.STRING)
    assert poly.coords == ["zeta1", "zeta2", "zeta3"]
    expected = {parse_affine(t) for t in (
        "zeta1", "lambda1 - lambda2 + zeta2 - 2*zeta3 - zeta1", "zeta2 - zeta3",
        "lambda2 - lambda3 + zeta3 - zeta2", "zeta3", "lambda1 - lambda2 - zeta3")}
    assert poly.inequality_set() == expected


def test_string_polytope_matches_ideal_polytope():
    string = tropic.superpotential_polytope(B3, Chart.STRING)
    ideal = tropic.superpotential_polytope(B3, Chart.IDEAL)
    assert tropic.string_polytope_in_ideal_coords(string, 3).inequality_set() == ideal.inequality_set()


@pytest.mark.parametrize("n", [3, 4])
def test_string_ideal_map_is_unimodular(n):
    E = tropic.string_ideal_linear_map(n)
    assert E.shape == (n * (n - 1) // 2,) * 2
    assert abs(E.det()) == 1


def test_vertices_of_gl3_b():
    poly = tropic.superpotential_polytope(B3, Chart.STRING, LAM)
    verts = poly.vertices()
    assert len(verts) == 7
    assert {"zeta1": 0, "zeta2": 0, "zeta3": 0} in verts
    # lambda1 - lambda2 = 1, lambda1 - lambda3 = 3, lambda2 - lambda3 = 2
    assert {"zeta1": 2, "zeta2": 3, "zeta3": 1} in verts
    assert {"zeta1": 0, "zeta2": 1, "zeta3": 1} in verts


def test_vertex_weights():
    poly = tropic.superpotential_polytope(B3, Chart.STRING, LAM)
    forms = tropic.weight_forms(B3, Chart.STRING)
    image = dict((tuple(v.values()), w) for v, w in
                 tropic.weight_polytope_image(poly, forms, tropic.lambda_names(B3, LAM)))
    assert image[(0, 0, 0)] == [-1, 1, 2]
    assert image[(2, 3, 1)] == [2, 1, -1]
    assert image[(0, 1, 1)] == [0, 1, 1]


def test_polytope_edges():
    poly = tropic.superpotential_polytope(B3, Chart.STRING, LAM)
    edges = poly.edges()
    assert len(edges) == 11
    assert ({"zeta1": 0, "zeta2": 2, "zeta3": 0}, {"zeta1": 3, "zeta2": 2, "zeta3": 0}) in edges


@pytest.mark.parametrize("chart, expected", [
    (Chart.STRING, {(1, 2, 0): [1, 0, 1], (2, 2, 0): [1, 1, 0]}),
    (Chart.IDEAL, {(0, 1, 1): [1, 0, 1], (0, 2, 0): [1, 1, 0]}),
])
def test_distinguished_points(chart, expected):
    poly = tropic.superpotential_polytope(B3, chart, LAM)
    forms = tropic.weight_forms(B3, chart)
    points = tropic.distinguished_points(B3, poly, forms, LAM)
    assert {tuple(p.values()): w for p, w in points} == expected
    assert all(poly.contains(p) and not poly.interior(p) for p, _ in points)


def test_vertices_need_specialised_polytope():
    with pytest.raises(TropicError):
        tropic.superpotential_polytope(B3, Chart.STRING).vertices()


def test_string_chart_needs_borel():
    with pytest.raises(tropic.PreconditionViolated):
        tropic.superpotential_polytope(ParabolicData.parse(3, "1"), Chart.STRING)


def test_partial_flag_polytope_contains_critical_point():
    P = ParabolicData.parse(3, "1")
    lam = (1, 0, 0)
    poly = tropic.superpotential_polytope(P, Chart.IDEAL, lam)
    crit = tropic.tropical_critical_point(P, lam)
    assert poly.contains(crit.mu_names())


def test_trop_braid_transform():
    word = ReducedWord((1, 2, 1), 3)
    mu = {PositiveRoot(1, 2): 1, PositiveRoot(1, 3): 2, PositiveRoot(2, 3): 3}
    new_word, moved = tropic.trop_braid_transform(word, BraidMove(3, 1), mu)
    assert new_word.indices == (2, 1, 2)
    assert moved == {PositiveRoot(1, 2): 0, PositiveRoot(1, 3): 3, PositiveRoot(2, 3): 2}
    _, back = tropic.trop_braid_transform(new_word, BraidMove(3, 1), moved)
    assert back == mu


def test_trop_braid_transform_rejects_bad_move():
    with pytest.raises(weyl.InvalidMove):
        tropic.trop_braid_transform(ReducedWord((1, 2, 1), 3), BraidMove(3, 2), {})


def test_transport_along_braid_path():
    i0 = weyl.word_i0(4)
    target = ReducedWord((3, 2, 1, 3, 2, 3), 4)
    mu = dict(zip(weyl.root_order(i0), range(6)))
    there = tropic.transport_along(i0, target, mu)
    assert tropic.transport_along(target, i0, there) == mu


WORDS4 = [(1, 2, 1, 3, 2, 1), (2, 1, 2, 3, 2, 1), (1, 2, 3, 2, 1, 2), (3, 2, 1, 3, 2, 3), (3, 2, 3, 1, 2, 3)]


@pytest.mark.parametrize("indices", WORDS4)
@pytest.mark.parametrize("lam", [(3, 1, 0, -2), (2, 2, 1, 0), (5, 3, 2, -1)])
def test_ideal_filling_is_fixed_by_braid_moves(indices, lam):
    filling = tropic.ideal_filling_for_lambda(ParabolicData.borel(4), lam)
    mu = filling.as_roots()
    assert tropic.transport_along(weyl.word_i0(4), ReducedWord(indices, 4), mu) == mu


def test_tropical_superpotential_terms_are_polytope_facets():
    trop = tropic.tropical_superpotential(B3, Chart.STRING)
    assert set(trop.forms) == tropic.superpotential_polytope(B3, Chart.STRING).inequality_set()


@pytest.mark.parametrize("P", [
    ParabolicData.borel(3),
    ParabolicData.borel(4),
    ParabolicData.parse(4, "1,3"),
    ParabolicData.parse(5, "2"),
    ParabolicData.parse(5, "1,3"),
    ParabolicData.borel(5),
])
def test_random_fillings(P):
    rng = random.Random(P.n * 31 + P.l)
    for _ in range(25):
        per_block = sorted((F(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(P.l + 1)), reverse=True)
        lam = [per_block[P.block_of(i) - 1] for i in range(1, P.n + 1)]
        filling = tropic.ideal_filling_for_lambda(P, lam)
        assert filling.max_relations_hold()
        assert filling.lambda_sum_holds()
        point = tropic.filling_to_quiver_point(filling)
        assert tropic.quiver_point_to_filling(P, point.rho, lam).entries == filling.entries
