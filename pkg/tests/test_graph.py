import itertools

import pytest
from hypothesis import given

from conftest import complete, path, small_graphs
from ecckit.errors import ContractError, ParseError
from ecckit.graph import (build_graph, common_neighbors, degeneracy_order, is_clique,
                          list_four_cliques, list_triangles, maximal_cliques)
from ecckit.cli_io import gen_gnp


def test_build_graph_dedupes_and_drops_loops():
    g = build_graph([(0, 1), (1, 0), (2, 2)], n_hint=3)
    assert (g.n, g.m) == (3, 1)


def test_build_graph_triangle():
    g = build_graph([(0, 1), (1, 2), (0, 2)])
    assert (g.n, g.m) == (3, 3)
    assert g.edges == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.parametrize("bad", [[(0, 1, 2)], [(0,)], [(-1, 2)]])
def test_build_graph_rejects_malformed(bad):
    with pytest.raises(ParseError):
        build_graph(bad)


@given(small_graphs(max_n=12))
def test_graph_invariants(g):
    assert sum(len(a) for a in g.adj) == 2 * g.m
    for v in range(g.n):
        assert list(g.adj[v]) == sorted(set(g.adj[v]))
        assert v not in g.adj[v]
        for u in g.adj[v]:
            assert v in g.nbrs[u]
    assert sorted(g.edge_index.values()) == list(range(g.m))
    for (u, v), e in g.edge_index.items():
        assert u < v and g.edges[e] == (u, v)


def test_degeneracy_examples():
    assert degeneracy_order(path(5)).d == 1
    assert degeneracy_order(complete(5)).d == 4
    pendant = build_graph([(0, 1), (1, 2), (0, 2), (2, 3)])
    assert degeneracy_order(pendant).d == 2


def _brute_degeneracy(g):
    best = g.n
    for perm in itertools.permutations(range(g.n)):
        pos = {v: i for i, v in enumerate(perm)}
        later = max((sum(pos[u] > pos[v] for u in g.adj[v]) for v in range(g.n)), default=0)
        best = min(best, later)
    return best


@given(small_graphs(max_n=7))
def test_degeneracy_is_minimal_and_valid(g):
    o = degeneracy_order(g)
    assert sorted(o.order) == list(range(g.n))
    assert all(o.order[o.position[v]] == v for v in range(g.n))
    for v in range(g.n):
        assert len(o.later(g, v)) <= o.d
    assert o.d <= o.max_degree <= max(g.n - 1, 0)
    assert o.d == _brute_degeneracy(g)


def _brute_triangles(g):
    return {t for t in itertools.combinations(range(g.n), 3) if is_clique(g, t)}


def test_triangle_counts_small():
    tri = build_graph([(0, 1), (1, 2), (0, 2)])
    seen = []
    assert list_triangles(tri, degeneracy_order(tri), lambda *t: seen.append(t)) == 1
    assert sorted(seen[0]) == [0, 1, 2]
    k4 = complete(4)
    assert list_triangles(k4, degeneracy_order(k4), lambda *t: None) == 4


@pytest.mark.parametrize("seed", range(3))
def test_triangles_match_cubic_oracle_gnp64(seed):
    g = gen_gnp(64, 0.2, seed)
    o = degeneracy_order(g)
    seen = []
    count = list_triangles(g, o, lambda a, b, c: seen.append((a, b, c)))
    assert count == len(seen) == len(_brute_triangles(g))
    assert {tuple(sorted(t)) for t in seen} == _brute_triangles(g)
    for t in seen:
        assert [o.position[x] for x in t] == sorted(o.position[x] for x in t)


@given(small_graphs(max_n=10))
def test_triangles_and_four_cliques_exactly_once(g):
    o = degeneracy_order(g)
    tris, quads = [], []
    assert list_triangles(g, o, lambda *t: tris.append(t)) == len(tris)
    assert list_four_cliques(g, o, lambda *q: quads.append(q)) == len(quads)
    assert sorted(tuple(sorted(t)) for t in tris) == sorted(_brute_triangles(g))
    brute4 = sorted(q for q in itertools.combinations(range(g.n), 4) if is_clique(g, q))
    assert sorted(tuple(sorted(q)) for q in quads) == brute4


def test_common_neighbors():
    assert common_neighbors(complete(4), 0, 1) == [2, 3]
    assert common_neighbors(path(3), 0, 1) == []
    # diamond: v=0, x=1, z=2, y=3 with v,y both adjacent to x and z
    diamond = build_graph([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    assert common_neighbors(diamond, 0, 1) == [2]
    with pytest.raises(ContractError):
        common_neighbors(path(3), 0, 2)


def test_is_clique():
    tri = build_graph([(0, 1), (1, 2), (0, 2)])
    assert is_clique(tri, [0, 1, 2])
    assert not is_clique(path(3), [0, 1, 2])
    assert is_clique(tri, [])


@given(small_graphs(max_n=8))
def test_maximal_cliques_match_bruteforce(g):
    found = {tuple(c) for c in maximal_cliques(g.nbrs)}
    brute = set()
    for r in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            if is_clique(g, s) and not any(is_clique(g, s + (x,)) for x in range(g.n) if x not in s):
                brute.add(s)
    assert found == brute
