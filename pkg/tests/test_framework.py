import json
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidcert.construct import build_core, build_kmn, moment_curve, RandomSource
from rigidcert.errors import DegenerateFramework
from rigidcert.exactmat import rank
from rigidcert.framework import (BipartitePartition, Configuration, Framework, Graph, affine_span_dim,
                                 bipartite_framework, complete_bipartite, config_matrix, edge_directions,
                                 framework_from_json, framework_to_json, is_general_position)


@pytest.mark.parametrize("u,v,m", [(1, 1, 1), (3, 3, 9), (5, 6, 30)])
def test_complete_bipartite(u, v, m):
    g, part = complete_bipartite(u, v)
    assert g.m == m == u * v and g.n == u + v
    part.validate(g)


def test_complete_bipartite_rejects_empty():
    with pytest.raises(ValueError):
        complete_bipartite(0, 3)


def test_graph_validation():
    with pytest.raises(ValueError):
        Graph(3, ((0, 0),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1), (1, 0)))
    g = Graph(3, ((2, 0), (1, 0)))
    assert g.edges == ((0, 1), (0, 2))
    with pytest.raises(ValueError):
        BipartitePartition((0,), (1, 2)).validate(Graph(3, ((1, 2),)))


def test_config_matrix_examples():
    C = Configuration(2, ((0, 0),))
    assert config_matrix(C).to_lists() == [[0, 0, 1]]
    C = Configuration(1, ((0,), (1,)))
    P = config_matrix(C)
    assert P.to_lists() == [[0, 1], [1, 1]] and rank(P) == 2
    F = build_core(2)
    P = config_matrix(F)
    assert P.shape == (6, 3) and rank(P) == 3


def test_affine_span_dim():
    assert affine_span_dim([(Fraction(3), Fraction(1))]) == 0
    assert affine_span_dim([(0, 0), (1, 1), (2, 2)]) == 1
    odd = [moment_curve(t, 3) for t in (1, 3, 5, 7)]
    assert affine_span_dim(odd) == 3
    with pytest.raises(ValueError):
        affine_span_dim([])


def test_general_position_examples():
    assert is_general_position(Configuration(2, ((0, 0), (1, 0), (0, 1))))
    pts = ((0, 0), (1, 1), (2, 2), (5, -1), (3, 7))
    assert not is_general_position(Configuration(2, pts))
    F, _ = build_kmn(2, 3, 4, RandomSource(7))
    assert is_general_position(F.config)
    with pytest.raises(ValueError):
        is_general_position(Configuration(2, ((0, 0), (1, 0))))


def test_general_position_monotone(rng):
    F, _ = build_kmn(2, 3, 4, RandomSource(3))
    pts = list(F.points)
    for k in range(3, len(pts)):
        for sub in combinations(pts, k):
            assert is_general_position(Configuration(2, sub))


def test_edge_directions():
    F = bipartite_framework([(0,)], [(1,)])
    assert edge_directions(F) == [(1,)]
    sq = bipartite_framework([(0, 0), (1, 1)], [(1, 0), (0, 1)])
    dirs = {tuple(abs(x) for x in e) for e in edge_directions(sq)}
    assert dirs == {(1, 0), (0, 1)} and len(edge_directions(sq)) == 4
    core = build_core(2)
    dirs = edge_directions(core)
    assert len(set(dirs)) == 9
    # the chord between parameters a < b of (t, t^2) is (b - a)(1, a + b):
    # two chords are parallel exactly when their parameter sums agree
    params = [1, 3, 5, 2, 4, 6]
    sums = [params[i] + params[j] for i, j in core.graph.edges]
    for (a, sa), (b, sb) in combinations(zip(dirs, sums), 2):
        assert (a[0] * b[1] - a[1] * b[0] == 0) == (sa == sb)
    assert len(set(sums)) == 5


def test_degenerate_rejected():
    with pytest.raises(DegenerateFramework):
        bipartite_framework([(1, 1)], [(1, 1)])


def test_json_format_and_roundtrip():
    F, _ = build_kmn(2, 3, 4, RandomSource(7))
    text = framework_to_json(F)
    data = json.loads(text)
    assert list(data) == ["dimension", "parts", "edges", "coords"]
    assert data["parts"] == {"U": [0, 1, 2], "V": [3, 4, 5, 6]}
    assert data["edges"] == sorted(data["edges"])
    assert list(data["coords"]) == [str(i) for i in range(7)]
    assert framework_to_json(framework_from_json(text)) == text


@given(st.lists(st.tuples(st.fractions(max_denominator=20), st.fractions(max_denominator=20)),
                min_size=2, max_size=8, unique=True))
@settings(max_examples=50, deadline=None)
def test_json_roundtrip_property(pts):
    edges = tuple((i, i + 1) for i in range(len(pts) - 1))
    F = Framework(Graph(len(pts), edges), Configuration(2, tuple(pts)))
    text = framework_to_json(F)
    G = framework_from_json(text)
    assert G == F
    assert framework_to_json(G) == text


def test_json_ignores_extra_keys():
    F = build_core(1)
    text = framework_to_json(F, seed=5, audit={"x": 1})
    assert framework_from_json(text) == F
