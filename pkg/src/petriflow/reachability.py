"""Reachability graphs, SCCs, home spaces, home states and liveness.

Every decision procedure refuses graphs whose exploration was cut short
by the node limit: home-space and liveness verdicts on a truncated graph
are unsound in both directions.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import IncompleteGraphError, PetriError
from .net import PetriNet, enabled, fire
from .predicate import NodeSet, StatePredicate

DEFAULT_NODE_LIMIT = 500_000
SCHEMA_VERSION = 1


@dataclass
class TransitionGraph:
    """Labelled directed graph over states.

    `nodes` holds markings for graphs built from a net and arbitrary
    hashable ids for hand-built fixtures.  `labels` is the full transition
    alphabet, so transitions that never fire are still classified.
    """

    nodes: list
    edges: list  # (source index, label, target index)
    init: tuple
    complete: bool = True
    labels: tuple = ()
    places: tuple | None = None
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = {s: i for i, s in enumerate(self.nodes)}
        self._succ = [[] for _ in self.nodes]
        self._pred = [[] for _ in self.nodes]
        for s, t, d in self.edges:
            self._succ[s].append((t, d))
            self._pred[d].append((t, s))
        if not self.labels:
            self.labels = tuple(dict.fromkeys(t for _, t, _ in self.edges))

    @classmethod
    def from_edges(cls, edges, init, nodes=None, labels=()):
        """Hand-built graph from ``(source_state, label, target_state)`` triples."""
        order = list(nodes or [])
        seen = set(order)
        for s, _, d in edges:
            for x in (s, d):
                if x not in seen:
                    seen.add(x)
                    order.append(x)
        for x in init:
            if x not in seen:
                seen.add(x)
                order.append(x)
        idx = {s: i for i, s in enumerate(order)}
        return cls(
            nodes=order,
            edges=[(idx[s], t, idx[d]) for s, t, d in edges],
            init=tuple(idx[x] for x in init),
            labels=tuple(labels),
            index=idx,
        )

    def __len__(self):
        return len(self.nodes)

    def successors(self, i):
        return self._succ[i]

    def predecessors(self, i):
        return self._pred[i]

    def node_of(self, state) -> int:
        try:
            return self.index[tuple(state) if isinstance(state, list) else state]
        except KeyError:
            raise PetriError(f"state {state!r} is not a node of the graph") from None

    def require_complete(self):
        if not self.complete:
            raise IncompleteGraphError(
                f"graph exploration stopped at {len(self.nodes)} nodes; verdict refused"
            )

    def dom(self, t) -> set:
        """Nodes enabling t (sources of t-labelled edges)."""
        return {s for s, lab, _ in self.edges if lab == t}

    def im(self, t) -> set:
        return {d for _, lab, d in self.edges if lab == t}

    def select(self, hs) -> set:
        """Nodes satisfying a StatePredicate, NodeSet, or iterable of node indices."""
        if isinstance(hs, StatePredicate):
            if self.places is None:
                raise PetriError("linear predicates need a graph built from a net")
            hs.check_places(self.places)
            return {i for i, q in enumerate(self.nodes) if hs.holds(q, self.places)}
        if isinstance(hs, NodeSet):
            return {self.index[s] for s in hs.states if s in self.index}
        return set(hs)

    def state_label(self, i) -> str:
        s = self.nodes[i]
        if self.places is not None:
            return "(" + ",".join(f"{p}={v}" for p, v in zip(self.places, s)) + ")"
        return str(s)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "places": list(self.places) if self.places is not None else None,
            "nodes": [list(s) if isinstance(s, tuple) else s for s in self.nodes],
            "edges": [[s, t, d] for s, t, d in self.edges],
            "init": list(self.init),
            "complete": self.complete,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_dot(self) -> str:
        lines = ["digraph RG {"]
        for i in range(len(self.nodes)):
            shape = ", shape=doublecircle" if i in self.init else ""
            lines.append(f'  n{i} [label="{self.state_label(i)}"{shape}];')
        for s, t, d in self.edges:
            lines.append(f'  n{s} -> n{d} [label="{t}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(net: PetriNet, init: Iterable, limit: int = DEFAULT_NODE_LIMIT) -> TransitionGraph:
    """Breadth-first closure of `init` under firing.

    Node order is BFS order with transitions tried in declaration order.
    When `limit` nodes are reached before the frontier empties the partial
    graph is returned with ``complete=False``.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    nodes, index, edges = [], {}, []
    init_idx = []
    queue = deque()
    complete = True
    for q in init:
        q = tuple(q)
        if q not in index:
            if len(nodes) >= limit:
                complete = False
                break
            index[q] = len(nodes)
            nodes.append(q)
            queue.append(q)
        init_idx.append(index[q])
    while queue and complete:
        q = queue.popleft()
        src = index[q]
        for t in net.transitions:
            if not enabled(net, q, t):
                continue
            q2 = fire(net, q, t)
            if q2 not in index:
                if len(nodes) >= limit:
                    complete = False
                    break
                index[q2] = len(nodes)
                nodes.append(q2)
                queue.append(q2)
            edges.append((src, t, index[q2]))
    return TransitionGraph(
        nodes=nodes,
        edges=edges,
        init=tuple(dict.fromkeys(init_idx)),
        complete=complete,
        labels=net.transitions,
        places=net.places,
        index=index,
    )


# ---------------------------------------------------------------------------
# Closures and SCCs


def forward_closure(g: TransitionGraph, start: Iterable[int]) -> set:
    seen = set(start)
    queue = deque(seen)
    while queue:
        n = queue.popleft()
        for _, m in g.successors(n):
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return seen


def backward_closure(g: TransitionGraph, targets: Iterable[int]) -> set:
    seen = set(targets)
    queue = deque(seen)
    while queue:
        n = queue.popleft()
        for _, m in g.predecessors(n):
            if m not in seen:
                seen.add(m)
                queue.append(m)
    return seen


@dataclass(frozen=True)
class Component:
    nodes: tuple
    bottom: bool


def scc_decomposition(g: TransitionGraph) -> list:
    """Tarjan's algorithm, iterative.  Components come in reverse topological order."""
    g.require_complete()
    n = len(g.nodes)
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    comps = []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            succ = g.successors(v)
            descended = False
            while pos < len(succ):
                w = succ[pos][1]
                pos += 1
                if index[w] is None:
                    work.append((v, pos))
                    work.append((w, 0))
                    descended = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if descended:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comp_of = {}
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    out = []
    for ci, comp in enumerate(comps):
        bottom = all(comp_of[d] == ci for v in comp for _, d in g.successors(v))
        out.append(Component(tuple(comp), bottom))
    return out


def is_strongly_connected(g: TransitionGraph) -> bool:
    return len(scc_decomposition(g)) <= 1


def sinks(g: TransitionGraph) -> set:
    g.require_complete()
    return {i for i in range(len(g.nodes)) if not g.successors(i)}


# ---------------------------------------------------------------------------
# Home spaces and home states


@dataclass(frozen=True)
class HomeVerdict:
    holds: bool
    counterexample: int | None = None  # node index

    def __bool__(self):
        return self.holds


def is_home_space(g: TransitionGraph, hs) -> HomeVerdict:
    """Every node can reach some node of `hs` (backward closure covers all)."""
    g.require_complete()
    closure = backward_closure(g, g.select(hs))
    for i in range(len(g.nodes)):  # BFS order, so the first miss is BFS-minimal
        if i not in closure:
            return HomeVerdict(False, i)
    return HomeVerdict(True)


def is_home_state(g: TransitionGraph, state) -> bool:
    """{h} is a home space of the graph restricted to the states reachable from h."""
    g.require_complete()
    h = state if isinstance(state, int) else g.node_of(state)
    if not 0 <= h < len(g.nodes):
        raise PetriError(f"node {h} out of range")
    reach = forward_closure(g, [h])
    back = backward_closure(g, [h])
    return reach <= back


def home_states(g: TransitionGraph) -> set:
    """Nodes in bottom SCCs: exactly the nodes that are home states."""
    return {v for c in scc_decomposition(g) if c.bottom for v in c.nodes}


# ---------------------------------------------------------------------------
# Liveness


@dataclass(frozen=True)
class Liveness:
    live: tuple
    dead: tuple
    quasi_live: tuple  # fires somewhere, but not live


def live_transitions(g: TransitionGraph, fast_path: bool = True) -> Liveness:
    """Classify every label: live iff Dom(t) is a home space.

    When the graph has a single initial node that is a home state, the
    live set also equals the set of edge labels; both routes are computed
    and must agree.
    """
    g.require_complete()
    fired = {t for _, t, _ in g.edges}
    live, dead, quasi = [], [], []
    for t in g.labels:
        if t not in fired:
            dead.append(t)
        elif is_home_space(g, g.dom(t)):
            live.append(t)
        else:
            quasi.append(t)
    if fast_path and len(g.init) == 1 and is_home_state(g, g.init[0]):
        shortcut = [t for t in g.labels if t in fired]
        if shortcut != live:
            raise AssertionError(f"live-set routes disagree: {shortcut} vs {live}")
    return Liveness(tuple(live), tuple(dead), tuple(quasi))


def live_transitions_exhaustive(g: TransitionGraph) -> tuple:
    """Definitional check: from every node some reachable node enables t."""
    g.require_complete()
    out = []
    reach = [forward_closure(g, [i]) for i in range(len(g.nodes))]
    enabling = {t: g.dom(t) for t in g.labels}
    for t in g.labels:
        if enabling[t] and all(reach[i] & enabling[t] for i in range(len(g.nodes))):
            out.append(t)
    return tuple(out)


def is_home_space_definitional(g: TransitionGraph, hs) -> bool:
    """Per-node forward reachability; quadratic, used as an oracle."""
    g.require_complete()
    targets = g.select(hs)
    return all(forward_closure(g, [i]) & targets for i in range(len(g.nodes)))
