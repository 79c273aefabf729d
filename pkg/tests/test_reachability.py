import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import reachable_set
from petriflow.casebook import casebook_net
from petriflow.errors import IncompleteGraphError, PetriError
from petriflow.invariants import invariant_value
from petriflow.net import enabled, fire
from petriflow.predicate import NodeSet, parse_predicate
from petriflow.reachability import (
    TransitionGraph,
    backward_closure,
    build_graph,
    forward_closure,
    home_states,
    is_home_space,
    is_home_space_definitional,
    is_home_state,
    is_strongly_connected,
    live_transitions,
    live_transitions_exhaustive,
    scc_decomposition,
    sinks,
)
from petriflow.semiflows import minimal_support_semiflows

LIMIT = 3000


def tn(k, a, b):
    net, _ = casebook_net("tn", {"k": k, "a": a, "b": b})
    return net, build_graph(net, [(a, b)])


@pytest.fixture(scope="module")
def corpus_graphs(corpus):
    out = []
    for net, q0 in corpus:
        g = build_graph(net, [q0], limit=LIMIT)
        if g.complete:
            out.append((net, q0, g))
    assert len(out) >= 12
    return out


@pytest.fixture
def two_cycles_graph():
    edges = [("r", "ra", "a1"), ("r", "rb", "b1"), ("a1", "x", "a2"), ("a2", "y", "a1"),
             ("b1", "x", "b2"), ("b2", "y", "b1")]
    return TransitionGraph.from_edges(edges, init=["r"])


# -- construction -------------------------------------------------------------


def test_tn_graph_sizes():
    _, g = tn(2, 3, 0)
    assert g.nodes == [(3, 0), (1, 1)] and len(g.edges) == 2 and g.complete
    _, g = tn(2, 2, 0)
    assert g.nodes == [(2, 0), (0, 1)] and g.edges == [(0, "t1", 1)]


def test_no_enabled_transition_gives_single_node():
    _, g = tn(2, 1, 0)
    assert g.nodes == [(1, 0)] and g.edges == [] and g.complete


@pytest.mark.parametrize(
    "name, bindings, n_nodes, n_edges",
    [("tel", {"x": 1, "y": 1}, 12, 20), ("tel", {"x": 2, "y": 1}, 34, 79),
     ("tel", {"x": 2, "y": 2}, 67, None), ("tel2", {"x": 2, "y": 2}, 60, 172),
     ("twocycles", {}, 5, 6)],
)
def test_casebook_graph_sizes(name, bindings, n_nodes, n_edges):
    net, q0 = casebook_net(name, bindings)
    g = build_graph(net, [q0])
    states, edges = reachable_set(net, q0)
    assert len(g.nodes) == len(states) == n_nodes
    assert n_edges is None or len(g.edges) == len(edges) == n_edges


def test_tel_nodes_satisfy_invariants():
    net, q0 = casebook_net("tel", {"x": 1, "y": 1})
    g = build_graph(net, [q0])
    for f in minimal_support_semiflows(net).vectors():
        assert {invariant_value(f, q) for q in g.nodes} == {invariant_value(f, q0)}


def test_graph_matches_dfs_oracle(corpus_graphs):
    for net, q0, g in corpus_graphs:
        states, edges = reachable_set(net, q0)
        assert set(g.nodes) == states
        assert {(g.nodes[s], t, g.nodes[d]) for s, t, d in g.edges} == edges
        for s, t, d in g.edges:
            assert enabled(net, g.nodes[s], t) and fire(net, g.nodes[s], t) == g.nodes[d]


def test_semiflow_values_constant_on_graphs(corpus_graphs):
    for net, q0, g in corpus_graphs:
        for f in minimal_support_semiflows(net).vectors():
            assert {invariant_value(f, q) for q in g.nodes} == {invariant_value(f, q0)}


def test_limit_marks_incomplete_and_poisons_queries():
    net, q0 = casebook_net("tel", {"x": 2, "y": 2})
    g = build_graph(net, [q0], limit=10)
    assert not g.complete and len(g.nodes) == 10
    for query in (scc_decomposition, sinks, home_states, live_transitions,
                  lambda g: is_home_space(g, []), lambda g: is_home_state(g, 0)):
        with pytest.raises(IncompleteGraphError):
            query(g)
    with pytest.raises(ValueError):
        build_graph(net, [q0], limit=0)


def test_unbounded_net_is_incomplete():
    from petriflow.net import parse_net

    net, q0 = parse_net("place P init 0\ntrans t : in - , out P:1\n")
    assert not build_graph(net, [q0], limit=50).complete


def test_build_is_deterministic():
    net, q0 = casebook_net("tel2", {"x": 2, "y": 1})
    a, b = build_graph(net, [q0]), build_graph(net, [q0])
    assert a.dumps() == b.dumps() and a.to_dot() == b.to_dot()


def test_exports():
    net, g = tn(2, 3, 0)
    doc = json.loads(g.dumps())
    assert doc["schema_version"] == 1 and doc["complete"] is True
    assert doc["nodes"] == [[3, 0], [1, 1]] and doc["init"] == [0]
    dot = g.to_dot()
    assert dot.startswith("digraph RG {")
    assert 'n0 [label="(A=3,B=0)", shape=doublecircle];' in dot
    assert 'n0 -> n1 [label="t1"];' in dot


def test_dom_and_im():
    _, g = tn(2, 3, 0)
    assert g.dom("t1") == {0} and g.im("t1") == {1}
    assert g.dom("t2") == {1} and g.im("t2") == {0}


# -- SCCs and sinks -----------------------------------------------------------


def test_scc_examples(two_cycles_graph):
    cyc = TransitionGraph.from_edges([("a", "t", "b"), ("b", "t", "a")], init=["a"])
    assert [c.bottom for c in scc_decomposition(cyc)] == [True]
    comps = scc_decomposition(two_cycles_graph)
    named = {frozenset(two_cycles_graph.nodes[i] for i in c.nodes): c.bottom for c in comps}
    assert named == {frozenset({"r"}): False, frozenset({"a1", "a2"}): True, frozenset({"b1", "b2"}): True}
    net, q0 = casebook_net("tel", {"x": 1, "y": 1})
    g = build_graph(net, [q0])
    assert len(scc_decomposition(g)) == 1 and is_strongly_connected(g)


def test_sinks_examples(two_cycles_graph):
    net, g = tn(2, 2, 0)
    assert {g.nodes[i] for i in sinks(g)} == {(0, 1)}
    assert sinks(two_cycles_graph) == set()
    net, q0 = casebook_net("tel", {"x": 1, "y": 1})
    assert sinks(build_graph(net, [q0])) == set()


def _scc_oracle(g):
    reach = [forward_closure(g, [i]) for i in range(len(g.nodes))]
    return {frozenset(j for j in reach[i] if i in reach[j]) for i in range(len(g.nodes))}


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 9))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from("ab"), st.integers(0, n - 1)),
                          max_size=20))
    return TransitionGraph.from_edges(edges, init=[0], nodes=list(range(n)), labels=("a", "b", "c"))


@settings(max_examples=150, deadline=None)
@given(random_graphs())
def test_scc_matches_oracle(g):
    comps = scc_decomposition(g)
    assert {frozenset(c.nodes) for c in comps} == _scc_oracle(g)
    for c in comps:
        out = {d for v in c.nodes for _, d in g.successors(v)}
        assert c.bottom == (out <= set(c.nodes))


# -- home spaces --------------------------------------------------------------


def test_home_space_examples(two_cycles_graph):
    net, q0 = casebook_net("tel", {"x": 2, "y": 2})
    g = build_graph(net, [q0])
    assert is_home_space(g, parse_predicate("CLA=2 & CA=2"))
    assert is_home_space(g, parse_predicate(""))
    hs1 = NodeSet(frozenset({"a1", "b1"}))
    hs2 = NodeSet(frozenset({"a2", "b1"}))
    assert is_home_space(two_cycles_graph, hs1) and is_home_space(two_cycles_graph, hs2)
    verdict = is_home_space(two_cycles_graph, NodeSet(hs1.states & hs2.states))
    assert not verdict
    assert two_cycles_graph.nodes[verdict.counterexample] == "a1"


def test_home_space_counterexample_is_bfs_minimal():
    net, q0 = casebook_net("twocycles")
    g = build_graph(net, [q0])
    verdict = is_home_space(g, parse_predicate("B1=1"))
    assert not verdict.holds
    assert verdict.counterexample == min(set(range(len(g.nodes))) - backward_closure(g, g.select(parse_predicate("B1=1"))))


def test_predicate_on_hand_built_graph_is_rejected(two_cycles_graph):
    with pytest.raises(PetriError):
        is_home_space(two_cycles_graph, parse_predicate("R=0"))


def test_home_state_examples():
    net, q0 = casebook_net("tel", {"x": 2, "y": 1})
    assert is_home_state(build_graph(net, [q0]), q0)
    single = TransitionGraph.from_edges([], init=["s"])
    assert is_home_state(single, "s") and home_states(single) == {0}
    _, g = tn(2, 2, 0)
    assert not is_home_state(g, (2, 0))
    assert is_home_state(g, (0, 1))
    with pytest.raises(PetriError):
        is_home_state(g, (9, 9))


def test_home_states_match_per_node_graphs(corpus_graphs):
    for net, q0, g in corpus_graphs[:8]:
        hs = home_states(g)
        for i, q in enumerate(g.nodes):
            own = build_graph(net, [q])
            expected = bool(is_home_space(own, NodeSet(frozenset({q}))))
            assert (i in hs) == expected == is_home_state(g, i)


def test_home_space_superset_and_union(corpus_graphs):
    for net, q0, g in corpus_graphs:
        bottoms = [c for c in scc_decomposition(g) if c.bottom]
        hs = {c.nodes[0] for c in bottoms}  # one node per bottom SCC is a home space
        assert is_home_space(g, hs)
        assert is_home_space(g, hs | {0})
        if len(g.nodes) > 1:
            other = g.nodes[-1]
            g2 = build_graph(net, [other], limit=LIMIT)
            both = build_graph(net, [q0, other], limit=LIMIT)
            hs1 = NodeSet(frozenset(g.nodes[i] for i in hs))
            hs2 = NodeSet(frozenset(g2.nodes[c.nodes[0]] for c in scc_decomposition(g2) if c.bottom))
            assert is_home_space(g2, hs2)
            assert is_home_space(both, NodeSet(hs1.states | hs2.states))


def test_sinks_in_every_home_space(corpus_graphs):
    for _, _, g in corpus_graphs:
        s = sinks(g)
        for i in range(len(g.nodes)):
            if is_home_space(g, {i}):
                assert not s or s == {i}
        for v in s:
            assert not is_home_space(g, set(range(len(g.nodes))) - {v})


def test_home_state_three_way(corpus_graphs):
    net, q0 = casebook_net("tel2", {"x": 1, "y": 2})
    cases = [(g, is_home_state(g, g.init[0])) for _, _, g in corpus_graphs]
    cases.append((build_graph(net, [q0]), True))
    seen = set()
    for g, expected in cases:
        every = all(is_home_state(g, i) for i in range(len(g.nodes)))
        assert expected == every == is_strongly_connected(g)
        seen.add(expected)
    assert seen == {True, False}


def test_home_space_definitional(corpus_graphs):
    for _, _, g in corpus_graphs:
        for i in range(0, len(g.nodes), max(1, len(g.nodes) // 5)):
            for hs in ({i}, {i, 0}, sinks(g)):
                assert bool(is_home_space(g, hs)) == is_home_space_definitional(g, hs)


# -- liveness -----------------------------------------------------------------


def test_liveness_examples():
    _, g = tn(2, 3, 0)
    assert live_transitions(g).live == ("t1", "t2")
    _, g = tn(2, 1, 0)
    lv = live_transitions(g)
    assert lv.live == () and lv.dead == ("t1", "t2")
    _, g = tn(2, 2, 0)
    lv = live_transitions(g)
    assert lv.live == () and lv.quasi_live == ("t1",) and lv.dead == ("t2",)


def test_liveness_via_dom_and_im(corpus_graphs):
    for _, _, g in corpus_graphs:
        lv = live_transitions(g)
        assert lv.live == live_transitions_exhaustive(g)
        assert sorted(lv.live + lv.dead + lv.quasi_live) == sorted(g.labels)
        for t in lv.live:
            assert is_home_space(g, g.im(t))


def test_liveness_fast_path(corpus_graphs):
    for _, _, g in corpus_graphs:
        if is_home_state(g, g.init[0]):
            labels = {t for _, t, _ in g.edges}
            assert set(live_transitions(g).live) == labels
            assert live_transitions(g, fast_path=False) == live_transitions(g)


def test_twocycles_has_no_live_transition():
    net, q0 = casebook_net("twocycles")
    g = build_graph(net, [q0])
    lv = live_transitions(g)
    assert lv.live == () and set(lv.quasi_live) == set(net.transitions)
