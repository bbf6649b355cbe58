import pytest
from hypothesis import assume, given, strategies as st

from conftest import complete, complete_bipartite, empty, path, small_graphs
from ecckit.errors import ContractError
from ecckit.graph import Graph, build_graph, is_clique
from ecckit.vcc_reduce import (VccReduceState, VccRules, crown_sweep, degree2_fold, find_crown,
                               fold_sweep, is_foldable, reduce_vcc, simplicial_sweep, unfold)
from ecckit.vcc_solve import brute_force_vcc, check_vcc


def kernel_theta(state):
    kg, ids = state.kernel()
    sol = brute_force_vcc(kg)
    return sol.size, [{ids[i] for i in c} for c in sol.cliques]


def assert_valid_cover(h: Graph, cover):
    seen = set()
    for c in cover:
        assert is_clique(h, c)
        seen |= set(c)
    assert seen == set(range(h.n))


def test_simplicial_isolated_and_triangle():
    st_ = VccReduceState(empty(1))
    assert simplicial_sweep(st_) == 1 and st_.taken_cliques == [(0,)]
    st_ = VccReduceState(complete(3))
    assert simplicial_sweep(st_) == 1 and st_.taken_cliques == [(0, 1, 2)]


def test_simplicial_pendant_takes_closed_neighbourhood():
    # triangle 0,1,2 plus pendant 3 on 2: N[0] = {0,1,2} is a clique
    h = build_graph([(0, 1), (0, 2), (1, 2), (2, 3)])
    st_ = VccReduceState(h)
    simplicial_sweep(st_)
    assert st_.taken_cliques == [(0, 1, 2), (3,)]


def test_simplicial_cap():
    st_ = VccReduceState(complete(5))
    assert simplicial_sweep(st_, cap=3) == 0
    assert simplicial_sweep(st_, cap=None) == 1


def test_star_crown():
    st_ = VccReduceState(complete_bipartite(1, 3))
    crown = find_crown(st_)
    assert crown.I == {1, 2, 3} and crown.H == {0}
    assert len(crown.M) == 1 and crown.M[0][0] == 0
    assert len(crown.I_unmatched) == 2
    assert crown_sweep(st_) == (3, 4)
    assert st_.kernel_size == 0
    assert brute_force_vcc(complete_bipartite(1, 3)).size == 3


def test_flared_crown_two_heads():
    # heads 0,1; crown 2..4 with 0-2, 0-3, 1-3, 1-4 and heads adjacent
    h = build_graph([(0, 1), (0, 2), (0, 3), (1, 3), (1, 4)])
    st_ = VccReduceState(h)
    crown = find_crown(st_)
    assert crown.H == {0, 1} and crown.I == {2, 3, 4}
    k, nv = crown_sweep(st_)
    assert (k, nv) == (3, 5)
    assert brute_force_vcc(h).size == 3


def test_no_crown_in_k4():
    st_ = VccReduceState(complete(4))
    assert find_crown(st_) is None
    assert crown_sweep(st_) == (0, 0)


def test_p3_fold_and_unfold():
    st_ = VccReduceState(path(3))
    assert degree2_fold(st_, 1)
    assert st_.kernel_size == 1
    rec = st_.fold_stack[0]
    assert (rec.v, rec.u, rec.w, rec.v_prime) == (1, 0, 2, 3)
    cover = unfold(st_, [{3}])
    assert sorted(map(sorted, cover)) in ([[0], [1, 2]], [[0, 1], [2]])
    assert_valid_cover(path(3), cover)


def test_fold_preconditions():
    with pytest.raises(ContractError):
        degree2_fold(VccReduceState(path(4)), 0)
    with pytest.raises(ContractError):
        degree2_fold(VccReduceState(complete(3)), 0)


def test_fold_refused_when_not_crossing_independent():
    # v=0 with neighbours u=1, w=2; x=3 in N(u) only, y=4 in N(w) only, x-y adjacent
    h = build_graph([(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)])
    st_ = VccReduceState(h)
    assert not is_foldable(st_, 0)
    assert degree2_fold(st_, 0) is False
    assert st_.kernel_size == 5
    # folding anyway would create the spurious clique {v', 3, 4}: theta drops from 3 to 2
    assert brute_force_vcc(h).size == 3
    folded = build_graph([(0, 1), (0, 2), (1, 2)], n_hint=3)
    assert brute_force_vcc(folded).size + 1 != brute_force_vcc(h).size


def test_fold_degree_and_simple():
    # C6 is foldable at every vertex
    h = build_graph([(i, (i + 1) % 6) for i in range(6)])
    st_ = VccReduceState(h)
    assert degree2_fold(st_, 0)
    vp = st_.fold_stack[0].v_prime
    assert st_.adj[vp] == {2, 4}
    for v in st_.alive_vertices():
        assert v not in st_.adj[v]


def test_unfold_missing_fold_vertex():
    st_ = VccReduceState(path(3))
    degree2_fold(st_, 1)
    with pytest.raises(ContractError):
        unfold(st_, [])


def test_empty_instance():
    st_ = VccReduceState(empty(0))
    stats = reduce_vcc(st_)
    assert stats.rounds == 0 and st_.kernel_size == 0


def test_rules_from_names():
    assert VccRules.from_names(["crown"]) == VccRules(False, False, True)
    with pytest.raises(ValueError):
        VccRules.from_names(["twin"])


SINGLE_STEPS = {
    "simplicial": lambda s: _one_simplicial(s),
    "crown": lambda s: _one_crown(s),
    "fold2": lambda s: _one_fold(s),
}


def _one_simplicial(state):
    for v in state.alive_vertices():
        if state.is_simplicial(v):
            state.take_clique(state.adj[v] | {v}, "simplicial")
            return True
    return False


def _one_crown(state):
    crown = find_crown(state)
    if crown is None:
        return False
    for h, i in crown.M:
        state.take_clique((h, i), "crown")
    for i in crown.I_unmatched:
        state.take_clique((i,), "crown")
    return True


def _one_fold(state):
    for v in state.alive_vertices():
        if is_foldable(state, v):
            return degree2_fold(state, v)
    return False


@pytest.mark.parametrize("rule", sorted(SINGLE_STEPS))
@given(h=small_graphs(max_n=9))
def test_single_rule_preserves_theta(rule, h):
    st_ = VccReduceState(h)
    assume(SINGLE_STEPS[rule](st_))
    after, kcover = kernel_theta(st_)
    assert brute_force_vcc(h).size == after + st_.offset
    cover = unfold(st_, kcover)
    assert_valid_cover(h, cover)
    assert len(cover) == brute_force_vcc(h).size


@given(small_graphs(max_n=10), st.sampled_from([VccRules(), VccRules(True, False, False),
                                                 VccRules(False, True, False),
                                                 VccRules(False, False, True)]))
def test_reduce_then_unfold_is_optimal(h, rules):
    st_ = VccReduceState(h)
    reduce_vcc(st_, rules)
    theta, kcover = kernel_theta(st_)
    cover = unfold(st_, kcover)
    assert_valid_cover(h, cover)
    check_vcc([set(a) for a in h.adj], cover)
    assert len(cover) == theta + st_.offset == brute_force_vcc(h).size


@given(small_graphs(max_n=10))
def test_crown_sweep_leaves_no_crown(h):
    st_ = VccReduceState(h)
    crown_sweep(st_)
    assert find_crown(st_) is None


@given(small_graphs(max_n=10))
def test_crown_structure(h):
    st_ = VccReduceState(h)
    crown = find_crown(st_)
    assume(crown is not None)
    assert all(not (h.nbrs[v] & crown.I) for v in crown.I)
    head = set().union(*(h.nbrs[v] for v in crown.I))
    assert head == crown.H
    assert {a for a, _ in crown.M} == crown.H
    assert len({b for _, b in crown.M}) == len(crown.M)
    assert all(h.has_edge(a, b) for a, b in crown.M)
    assert len(crown.I) >= len(crown.H)


@given(small_graphs(max_n=10))
def test_fold_sweep_vertex_degrees(h):
    st_ = VccReduceState(h)
    while True:
        vs = [v for v in st_.alive_vertices() if is_foldable(st_, v)]
        if not vs:
            break
        degree2_fold(st_, vs[0])
        rec = st_.fold_stack[-1]
        assert len(st_.adj[rec.v_prime]) == len(rec.nu | rec.nw) - 1
    assert fold_sweep(st_) == 0
    for v in st_.alive_vertices():
        assert v not in st_.adj[v]
        for x in st_.adj[v]:
            assert st_.alive[x] and v in st_.adj[x]
    for rec in st_.fold_stack:
        assert rec.u != rec.w
