"""Built-in parameterised nets and their expected results.

Each entry owns an arc table, a parameter schema and a list of checks.
Nets are produced by rendering the arc table to parameterised `.pnet`
text and parsing it, so the text format is exercised on every use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import PetriError
from .invariants import invariant_value, mu_bound, threshold_dead_transitions
from .net import parse_net
from .predicate import parse_predicate
from .reachability import (
    build_graph,
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
from .semiflows import hilbert_basis, minimal_support_semiflows


class CasebookError(PetriError, ValueError):
    pass


TEL_PLACES = ("LA", "CLA", "WLA", "A", "CA", "PU", "S", "F", "R")
TEL_ARCS = {
    "t1": ({"LA": 1}, {"PU": 1}),
    "t2": ({"S": 1}, {"CLA": 1}),
    "t3": ({"CLA": 1, "F": 1}, {"LA": 1, "R": 1}),
    "t4": ({"CLA": 1}, {"WLA": 1, "R": 1}),
    "t5": ({"S": 1}, {"WLA": 1, "R": 1}),
    "t6": ({"WLA": 1, "F": 1}, {"LA": 1}),
    "t7": ({"A": 1, "PU": 1}, {"CA": 1, "S": 1}),
    "t8": ({"CA": 1}, {"F": 1}),
    "t9": ({"R": 1}, {"A": 1}),
}
TEL2_PLACES = TEL_PLACES + ("WA",)
TEL2_ARCS = dict(TEL_ARCS)
TEL2_ARCS["t8"] = ({"CA": 1}, {"F": 1, "WA": 1})
TEL2_ARCS["t9"] = ({"R": 1, "WA": 1}, {"A": 1})


def _indicator(places, ones):
    return tuple(int(p in ones) for p in places)


# Minimal-support semiflows as listed for the telephony nets.
TEL_F1 = {"LA", "CLA", "WLA", "PU", "S"}
TEL_F2 = {"LA", "PU", "F", "CA"}
TEL_F3 = {"CLA", "S", "R", "A"}
TEL2_F4 = {"A", "CA", "WA"}


def _source(name, params, places, arcs, initial):
    lines = [f"net {name}"]
    for p, default in params.items():
        lines.append(f"param {p} = {default}")
    for p in places:
        lines.append(f"place {p} init {initial.get(p, 0)}")
    for t, (ins, outs) in arcs.items():
        i = " ".join(f"{p}:{w}" for p, w in ins.items()) or "-"
        o = " ".join(f"{p}:{w}" for p, w in outs.items()) or "-"
        lines.append(f"trans {t} : in {i} , out {o}")
    return "\n".join(lines) + "\n"


@dataclass
class Check:
    name: str
    run: Callable  # ctx -> (ok, evidence)


@dataclass
class CasebookEntry:
    name: str
    description: str
    defaults: dict
    minimums: dict
    source: str
    checks: list = field(default_factory=list)

    def validate(self, bindings):
        values = dict(self.defaults)
        for k, v in (bindings or {}).items():
            if k not in self.defaults:
                raise CasebookError(f"{self.name}: unknown parameter {k!r}")
            values[k] = int(v)
        for k, lo in self.minimums.items():
            if values[k] < lo:
                raise CasebookError(f"{self.name}: parameter {k} must be >= {lo}")
        return values

    def build(self, bindings=None):
        values = self.validate(bindings)
        return parse_net(self.source, values)


class Context:
    """Lazily computed artefacts shared by the checks of one entry."""

    def __init__(self, net, q0, bindings, limit=None):
        self.net, self.q0, self.b = net, q0, bindings
        self._limit = limit
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def msupp(self):
        return self._get("msupp", lambda: minimal_support_semiflows(self.net))

    @property
    def hilbert(self):
        return self._get("hilbert", lambda: hilbert_basis(self.net))

    @property
    def graph(self):
        kw = {"limit": self._limit} if self._limit else {}
        return self._get("graph", lambda: build_graph(self.net, [self.q0], **kw))

    def vec(self, ones):
        return _indicator(self.net.places, ones)

    def max_tokens(self, place):
        i = self.net.place_index(place)
        return max(q[i] for q in self.graph.nodes)


# ---------------------------------------------------------------------------
# TN(k)


def tn_live_formula(k, a, b):
    """All transitions live iff g.q0 > k and g.q0 is not a multiple of k."""
    value = a + k * b
    return value > k and value % k != 0


def _tn_semiflow(ctx):
    g = (1, ctx.b["k"])
    ok = ctx.msupp.vectors() == [g] and ctx.hilbert.vectors() == [g]
    return ok, f"minimal supports {ctx.msupp.vectors()}, Hilbert basis {ctx.hilbert.vectors()}"


def _tn_liveness(ctx):
    k, a, b = ctx.b["k"], ctx.b["a"], ctx.b["b"]
    lv = live_transitions(ctx.graph)
    all_live = set(lv.live) == set(ctx.net.transitions)
    expected = tn_live_formula(k, a, b)
    return all_live == expected, f"graph live={list(lv.live)}, formula says all-live={expected}"


def _tn_k1(ctx):
    if ctx.b["k"] != 1:
        return True, "k != 1, not applicable"
    lv = live_transitions(ctx.graph)
    return not lv.live, f"live={list(lv.live)}"


def _tn_threshold(ctx):
    dead = threshold_dead_transitions(ctx.net, ctx.msupp, ctx.q0)
    names = {ctx.net.transitions[t] for t in dead}
    value = invariant_value((1, ctx.b["k"]), ctx.q0)
    fired = {t for _, t, _ in ctx.graph.edges}
    ok = not (names & fired)
    if value < ctx.b["k"]:
        ok = ok and names == set(ctx.net.transitions) and not ctx.graph.edges
    return ok, f"g.q0={value}, threshold-dead={sorted(names)}, edges={len(ctx.graph.edges)}"


def _mu_sound(ctx):
    worst = []
    for i, p in enumerate(ctx.net.places):
        try:
            _, fl, _ = mu_bound(ctx.msupp, i, ctx.q0)
        except PetriError:
            continue
        top = ctx.max_tokens(p)
        if top > fl:
            worst.append((p, top, fl))
    return not worst, "all reachable markings within floor(mu)" if not worst else f"violations {worst}"


# ---------------------------------------------------------------------------
# TEL / TEL2


def _tel_semiflows(expected_sets):
    def check(ctx):
        expected = {ctx.vec(s) for s in expected_sets}
        got = ctx.msupp.vectors()
        missing = len(expected - set(got))
        ok = len(got) == len(expected) and not missing
        return ok, f"{len(got)} minimal-support semiflows, {missing} listed ones missing"

    return check


def _tel_invariants(ctx):
    x, y = ctx.b["x"], ctx.b["y"]
    vals = [invariant_value(ctx.vec(s), ctx.q0) for s in (TEL_F1, TEL_F2, TEL_F3)]
    held = all(
        invariant_value(ctx.vec(s), q) == v
        for s, v in zip((TEL_F1, TEL_F2, TEL_F3), vals)
        for q in ctx.graph.nodes
    )
    return vals == [x, x, y] and held, f"f1,f2,f3 . q0 = {vals}"


def _mu_check(place, expected_fn):
    def check(ctx):
        bound, _, _ = mu_bound(ctx.msupp, place, ctx.q0, ctx.net)
        expected = expected_fn(ctx.b["x"], ctx.b["y"])
        return bound == expected, f"mu({place})={bound}, expected {expected}"

    return check


def _max_check(place, expected_fn):
    def check(ctx):
        top = ctx.max_tokens(place)
        expected = expected_fn(ctx.b["x"], ctx.b["y"])
        return top == expected, f"max q({place}) over RS = {top}, expected {expected}"

    return check


def _home_state_live(ctx):
    g = ctx.graph
    home = is_home_state(g, g.init[0])
    sc = is_strongly_connected(g)
    every = home_states(g) == set(range(len(g.nodes)))
    lv = live_transitions(g)
    exhaustive = live_transitions_exhaustive(g)
    all_live = set(lv.live) == set(ctx.net.transitions) and lv.live == exhaustive
    ok = home and sc and every and all_live
    return ok, (
        f"{len(g.nodes)} states, q0 home state={home}, strongly connected={sc}, "
        f"live={len(lv.live)}/{len(ctx.net.transitions)}"
    )


def _hs_z(ctx):
    g = ctx.graph
    zmax = min(ctx.b["x"], ctx.b["y"])
    bad = []
    for z in range(zmax + 1):
        pred = parse_predicate(f"CLA={z} & CA={z}", ctx.net.places)
        if not (is_home_space(g, pred) and is_home_space_definitional(g, pred)):
            bad.append(z)
    return not bad, f"HS(z) home space for z in 0..{zmax}" if not bad else f"fails for z={bad}"


def _no_sinks(ctx):
    s = sinks(ctx.graph)
    return not s, f"{len(s)} sinks"


# ---------------------------------------------------------------------------
# twocycles


HS1 = "R=0 & A2+B2=0"  # {A1, B1}
HS2 = "R=0 & A1+B2=0"  # {A2, B1}


def _twocycles_hs(ctx):
    g = ctx.graph
    p1 = parse_predicate(HS1, ctx.net.places)
    p2 = parse_predicate(HS2, ctx.net.places)
    v1, v2, v12 = is_home_space(g, p1), is_home_space(g, p2), is_home_space(g, p1 & p2)
    ok = v1.holds and v2.holds and not v12.holds and v12.counterexample is not None
    ce = g.state_label(v12.counterexample) if v12.counterexample is not None else None
    return ok, f"HS1={v1.holds}, HS2={v2.holds}, HS1&HS2={v12.holds} (counterexample {ce})"


def _twocycles_structure(ctx):
    comps = scc_decomposition(ctx.graph)
    bottoms = [c for c in comps if c.bottom]
    lv = live_transitions(ctx.graph)
    ok = len(bottoms) == 2 and all(len(c.nodes) == 2 for c in bottoms) and not lv.live
    return ok, f"{len(comps)} components, {len(bottoms)} bottom, live={list(lv.live)}"


_TN_SOURCE = _source(
    "TN",
    {"k": 2, "a": 3, "b": 0},
    ("A", "B"),
    {"t1": ({"A": "k"}, {"B": 1}), "t2": ({"A": 1, "B": 1}, {"A": "k+1"})},
    {"A": "a", "B": "b"},
)

ENTRIES = {
    "tn": CasebookEntry(
        "tn",
        "TN(k): two places, pre (k,0)/(1,1), post (0,1)/(k+1,0); initial A=a, B=b",
        {"k": 2, "a": 3, "b": 0},
        {"k": 1, "a": 0, "b": 0},
        _TN_SOURCE,
        [
            Check("semiflow g = (1,k)", _tn_semiflow),
            Check("live iff g.q0 > k and not a multiple of k", _tn_liveness),
            Check("k = 1 has no live transition", _tn_k1),
            Check("threshold-dead transitions never fire", _tn_threshold),
            Check("mu bounds hold on the reachability set", _mu_sound),
        ],
    ),
    "tel": CasebookEntry(
        "tel",
        "TEL(x,y): x callers, y callees, reduced telephony model",
        {"x": 2, "y": 1},
        {"x": 1, "y": 1},
        _source("TEL", {"x": 2, "y": 1}, TEL_PLACES, TEL_ARCS, {"LA": "x", "A": "y"}),
        [
            Check("minimal supports are exactly f1, f2, f3", _tel_semiflows([TEL_F1, TEL_F2, TEL_F3])),
            Check("invariants f1.q = x, f2.q = x, f3.q = y", _tel_invariants),
            Check("mu(CLA) = min(x,y)", _mu_check("CLA", min)),
            Check("mu(CA) = x", _mu_check("CA", lambda x, y: x)),
            Check("q(CA) reaches x", _max_check("CA", lambda x, y: x)),
            Check("q0 home state, strongly connected, all live", _home_state_live),
            Check("HS(z): CLA=z & CA=z is a home space", _hs_z),
            Check("no sink", _no_sinks),
            Check("mu bounds hold on the reachability set", _mu_sound),
        ],
    ),
    "tel2": CasebookEntry(
        "tel2",
        "TEL2(x,y): TEL with callee wait place WA between t8 and t9",
        {"x": 2, "y": 1},
        {"x": 1, "y": 1},
        _source("TEL2", {"x": 2, "y": 1}, TEL2_PLACES, TEL2_ARCS, {"LA": "x", "A": "y"}),
        [
            Check(
                "minimal supports are exactly f1, f2, f3, f4",
                _tel_semiflows([TEL_F1, TEL_F2, TEL_F3, TEL2_F4]),
            ),
            Check("mu(CLA) = min(x,y)", _mu_check("CLA", min)),
            Check("mu(CA) = min(x,y)", _mu_check("CA", min)),
            Check("max q(CA) = min(x,y)", _max_check("CA", min)),
            Check("q0 home state, strongly connected, all live", _home_state_live),
            Check("HS(z): CLA=z & CA=z is a home space", _hs_z),
            Check("no sink", _no_sinks),
            Check("mu bounds hold on the reachability set", _mu_sound),
        ],
    ),
    "twocycles": CasebookEntry(
        "twocycles",
        "root R feeding two disjoint terminal 2-cycles A1<->A2 and B1<->B2",
        {},
        {},
        _source(
            "twocycles",
            {},
            ("R", "A1", "A2", "B1", "B2"),
            {
                "ra": ({"R": 1}, {"A1": 1}),
                "rb": ({"R": 1}, {"B1": 1}),
                "a12": ({"A1": 1}, {"A2": 1}),
                "a21": ({"A2": 1}, {"A1": 1}),
                "b12": ({"B1": 1}, {"B2": 1}),
                "b21": ({"B2": 1}, {"B1": 1}),
            },
            {"R": 1},
        ),
        [
            Check("two home spaces whose intersection is not one", _twocycles_hs),
            Check("two bottom 2-cycles, no live transition", _twocycles_structure),
        ],
    ),
}


def entry(name) -> CasebookEntry:
    try:
        return ENTRIES[name]
    except KeyError:
        raise CasebookError(f"unknown casebook net {name!r} (have {', '.join(ENTRIES)})") from None


def casebook_net(name, bindings=None):
    """(net, initial marking) for a casebook entry."""
    return entry(name).build(bindings)


@dataclass
class CheckResult:
    name: str
    ok: bool
    evidence: str


def verify(name, bindings=None, limit=None) -> list:
    e = entry(name)
    values = e.validate(bindings)
    net, q0 = e.build(values)
    ctx = Context(net, q0, values, limit)
    results = []
    for check in e.checks:
        ok, evidence = check.run(ctx)
        results.append(CheckResult(check.name, bool(ok), evidence))
    return results
