import networkx as nx
from hypothesis import given, strategies as st

from ecckit.matching import UNMATCHED, hopcroft_karp


@st.composite
def bipartite(draw):
    a = draw(st.integers(0, 12))
    b = draw(st.integers(0, 12))
    pairs = [(i, j) for i in range(a) for j in range(b)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    adj = [[] for _ in range(a)]
    for i, j in edges:
        adj[i].append(j)
    return a, b, adj


def test_perfect_matching_on_a_path():
    size, ml, mr = hopcroft_karp(3, 3, [[0], [0, 1], [1, 2]])
    assert size == 3 and ml == [0, 1, 2] and mr == [0, 1, 2]


def test_empty_sides():
    assert hopcroft_karp(0, 4, [])[0] == 0
    size, ml, _ = hopcroft_karp(2, 0, [[], []])
    assert size == 0 and ml == [UNMATCHED, UNMATCHED]


@given(bipartite())
def test_matches_networkx(inst):
    a, b, adj = inst
    size, ml, mr = hopcroft_karp(a, b, adj)
    g = nx.Graph()
    g.add_nodes_from(("L", i) for i in range(a))
    g.add_nodes_from(("R", j) for j in range(b))
    g.add_edges_from((("L", i), ("R", j)) for i in range(a) for j in adj[i])
    ref = nx.bipartite.maximum_matching(g, top_nodes=[("L", i) for i in range(a)])
    assert size == len(ref) // 2
    # the returned matching is consistent and uses real edges
    assert sum(x != UNMATCHED for x in ml) == size
    for i, j in enumerate(ml):
        if j != UNMATCHED:
            assert j in adj[i] and mr[j] == i
