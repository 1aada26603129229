import pytest

from errors import ToricError
from toric import (
    CENTRAL_TRIANGLE,
    TRIANGLE_POINTS,
    act_on_triangulation,
    candidate_triangles,
    chart,
    charts_and_gluing,
    enumerate_crepant_triangulations,
    exceptional_divisor_count,
    flop_graph,
    hilbert_basis,
    in_dual_lattice,
    monomial_in_invariants,
    normalized_area,
    singularity_presentation,
    symmetry_orbits,
)


@pytest.fixture(scope="module")
def triangulations():
    return enumerate_crepant_triangulations()


def test_candidates():
    candidates = candidate_triangles()
    assert len(candidates) == 10
    assert CENTRAL_TRIANGLE in candidates


def test_four_triangulations(triangulations):
    assert len(triangulations) == 4
    assert [t.is_central for t in triangulations] == [True, False, False, False]
    for t in triangulations:
        assert len(t.triangles) == 4
        assert t.vertices == frozenset(TRIANGLE_POINTS)
        assert sum(normalized_area(tri) for tri in t.triangles) == 4
        assert exceptional_divisor_count(t) == 3


def test_symmetry_fixes_central(triangulations):
    central = triangulations[0]
    assert act_on_triangulation((1, 0, 2), central) == central
    assert act_on_triangulation((1, 2, 0), central) == central
    assert symmetry_orbits(triangulations) == [(0,), (1, 2, 3)]


def test_singularity_presentation():
    presentation = singularity_presentation()
    assert presentation.hilbert_basis == ((0, 0, 2), (0, 2, 0), (1, 1, 1), (2, 0, 0))
    assert presentation.relation == "abc = d^2"
    assert all(in_dual_lattice(m) for m in hilbert_basis())


def test_corner_chart_is_smooth():
    data = chart(frozenset({(0, 0), (1, 0), (0, 1)}))
    assert len(data.generators) == 3
    assert all(in_dual_lattice(m) for m in data.generators)


def test_non_unimodular_cone_is_rejected():
    with pytest.raises(ToricError):
        chart(frozenset({(0, 0), (2, 0), (0, 2)}))


def test_monomials_are_laurent_in_invariants():
    assert monomial_in_invariants((1, 1, 1)) == (0, 0, 0, 1)
    assert monomial_in_invariants((-1, -1, 1)) == (-1, -1, 0, 1)
    with pytest.raises(ToricError):
        monomial_in_invariants((1, 0, 0))


def test_charts_and_gluing(triangulations):
    for t in triangulations:
        charts, gluings = charts_and_gluing(t)
        assert len(charts) == 4
        assert len(gluings) == 3
        for gluing in gluings:
            first = charts[gluing.first].generators
            second = charts[gluing.second].generators
            assert any(all(x + y == 0 for x, y in zip(u, v)) for u in first for v in second)


def test_flop_graph_is_a_star(triangulations):
    edges = flop_graph(triangulations)
    assert edges == [(0, 1), (0, 2), (0, 3)]
