"""Command-line front end.

Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage or
input error, 3 a resource limit was hit.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys
from pathlib import Path

from . import casebook
from .errors import (
    IncompleteGraphError,
    NetFormatError,
    PetriError,
    PredicateError,
    ResourceLimitError,
    UnknownPlaceError,
)
from .invariants import bound_report, iota, invariant_value
from .net import enabled_transitions, fire, parse_net, serialize_net
from .predicate import parse_predicate
from .reachability import (
    DEFAULT_NODE_LIMIT,
    build_graph,
    home_states,
    is_home_space,
    is_home_state,
    is_strongly_connected,
    live_transitions,
    live_transitions_exhaustive,
    scc_decomposition,
    sinks,
)
from .report import AnalysisReport, render_tableau
from .semiflows import (
    DEFAULT_NODE_CAP,
    hilbert_basis,
    minimal_support_semiflows,
    rational_kernel_basis,
)

log = logging.getLogger("petriflow")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

KINDS = {
    "min-support": minimal_support_semiflows,
    "hilbert": hilbert_basis,
    "rational": rational_kernel_basis,
}


class UsageError(PetriError):
    pass


def _binding(text):
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise argparse.ArgumentTypeError(f"expected name=int, got {text!r}")
    try:
        return name.strip(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected name=int, got {text!r}") from None


def _marking_overrides(text):
    out = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, value = _binding(part)
        if value < 0:
            raise argparse.ArgumentTypeError(f"negative token count in {part!r}")
        out[name] = value
    return out


def load(args):
    """(net, q0, casebook name or None) from the NET argument and flags."""
    bindings = dict(args.param or [])
    source = args.net
    if source.startswith("casebook:"):
        name = source.split(":", 1)[1]
        net, q0 = casebook.casebook_net(name, bindings)
    else:
        name = None
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {source}: {exc.strerror}") from None
        net, q0 = parse_net(text, bindings)
    symbolic = True
    if args.init:
        overrides = _marking_overrides(args.init)
        q = list(q0)
        for place, v in overrides.items():
            q[net.place_index(place)] = v
        q0 = tuple(q)
        symbolic = False
    if getattr(args, "emit_pnet", None):
        Path(args.emit_pnet).write_text(serialize_net(net, q0), encoding="utf-8")
    return net, q0, name, symbolic


def _graph(net, q0, args):
    g = build_graph(net, [q0], args.max_states)
    if not g.complete:
        raise IncompleteGraphError(
            f"reachability graph exceeds {args.max_states} states; raise --max-states"
        )
    return g


def cmd_semiflows(args, out):
    net, q0, _, symbolic = load(args)
    kinds = list(KINDS) if args.kind == "all" else [args.kind]
    report = AnalysisReport(net.name, dict(net.params), net.places)
    for kind in kinds:
        fn = KINDS[kind]
        gs = fn(net, args.node_cap) if kind == "hilbert" else fn(net)
        report.generating_sets[kind] = gs
        if kind == kinds[0]:
            report.tableau = [(m.coords, invariant_value(m, q0)) for m in gs]
        if args.format == "tableau":
            if len(kinds) > 1:
                out.write(f"# {kind} ({gs.kind.value}, over {gs.semiring.value})\n")
            names = net.params if symbolic else None
            out.write(render_tableau(gs, q0, net.places, names))
    if args.format == "json":
        out.write(report.dumps() + "\n")
    return EXIT_OK


def cmd_bounds(args, out):
    net, q0, _, _ = load(args)
    E = minimal_support_semiflows(net)
    br = bound_report(net, E, q0, args.node_cap)
    if args.format == "json":
        report = AnalysisReport(net.name, dict(net.params), net.places, bounds=br)
        report.generating_sets["min-support"] = E
        out.write(report.dumps() + "\n")
        return EXIT_OK
    for e in br.entries:
        if e.bound is None:
            out.write(f"mu({e.place}) = none derivable\n")
        else:
            out.write(f"mu({e.place}) = {e.bound}  (floor {e.floor}, witness f{e.witness + 1})\n")
    out.write("rho: " + ",".join(net.places[i] for i in sorted(br.rho)) + "\n")
    out.write(
        "structurally bounded places: "
        + ",".join(net.places[i] for i in sorted(br.bounded_places))
        + "\n"
    )
    verdict = "yes" if br.structurally_bounded else "no"
    witness = f" (witness {list(br.structural_witness)})" if br.structural_witness else ""
    out.write(f"net structurally bounded: {verdict}{witness}\n")
    dead = ",".join(f"{t}(f{w + 1})" for t, w in br.threshold_dead.items())
    out.write(f"threshold-dead: {dead or '-'}\n")
    return EXIT_OK


def _graph_stats(g):
    comps = scc_decomposition(g)
    return {
        "nodes": len(g.nodes),
        "edges": len(g.edges),
        "complete": g.complete,
        "sccs": len(comps),
        "bottom_sccs": sum(c.bottom for c in comps),
        "sinks": len(sinks(g)),
    }


def cmd_rg(args, out):
    net, q0, _, _ = load(args)
    g = build_graph(net, [q0], args.max_states)
    if args.dot:
        Path(args.dot).write_text(g.to_dot(), encoding="utf-8")
    if args.format == "json":
        out.write(g.dumps() + "\n")
    if not g.complete:
        log.error("reachability graph exceeds %d states", args.max_states)
        if args.format != "json":
            out.write(f"nodes: {len(g.nodes)} (incomplete)\n")
        return EXIT_LIMIT
    if args.format != "json":
        for k, v in _graph_stats(g).items():
            out.write(f"{k}: {v}\n")
    return EXIT_OK


def cmd_home(args, out):
    net, q0, _, _ = load(args)
    if (args.set is None) == (args.state is None):
        raise UsageError("home needs exactly one of --set or --state")
    g = _graph(net, q0, args)
    if args.set is not None:
        pred = parse_predicate(args.set, net.places)
        v = is_home_space(g, pred)
        out.write(f"home space: {'yes' if v.holds else 'no'}\n")
        if not v.holds:
            out.write(f"counterexample: {g.state_label(v.counterexample)}\n")
        return EXIT_OK if v.holds else EXIT_FAIL
    overrides = _marking_overrides(args.state)
    state = net.marking(overrides)
    if state not in g.index:
        g = _graph(net, state, args)
    ok = is_home_state(g, state)
    out.write(f"home state: {'yes' if ok else 'no'}\n")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_live(args, out):
    net, q0, _, _ = load(args)
    g = _graph(net, q0, args)
    lv = live_transitions(g)
    out.write("live: " + (",".join(lv.live) or "-") + "\n")
    if lv.quasi_live:
        out.write("quasi-live, not live: " + ",".join(lv.quasi_live) + "\n")
    if lv.dead:
        out.write("dead: " + ",".join(lv.dead) + "\n")
    return EXIT_OK if len(lv.live) == len(net.transitions) else EXIT_FAIL


def _generic_checks(net, q0, args):
    """Consistency checks applicable to any net."""
    results = []
    E = minimal_support_semiflows(net)
    g = _graph(net, q0, args)
    system = iota(E, q0)
    bad = [i for i, q in enumerate(g.nodes) if not system.contains(q)]
    results.append(("invariants hold on every reachable marking", not bad, f"{len(g.nodes)} states"))
    rng = random.Random(args.seed)
    q, walk_ok, note = q0, True, f"{args.walk} steps, seed {args.seed}"
    for step in range(1, args.walk + 1):
        choices = enabled_transitions(net, q)
        if not choices:
            note = f"deadlock after {step - 1} steps, seed {args.seed}"
            break
        q = fire(net, q, rng.choice(choices))
        if not system.contains(q):
            walk_ok, note = False, f"violated at step {step}"
            break
    results.append(("random walk keeps invariants", walk_ok, note))
    lv = live_transitions(g)
    results.append(
        ("Dom(t) home space agrees with exhaustive liveness",
         lv.live == live_transitions_exhaustive(g), f"live={list(lv.live)}")
    )
    home = is_home_state(g, g.init[0])
    sc = is_strongly_connected(g)
    every = home_states(g) == set(range(len(g.nodes)))
    results.append(
        ("q0 home state <=> strongly connected <=> all states home",
         home == sc == every, f"home={home}, strongly connected={sc}")
    )
    return results


def cmd_verify(args, out):
    net, q0, name, _ = load(args)
    rows = []
    if name is not None:
        if args.init:
            raise UsageError("verify on a casebook net takes --param, not --init")
        for r in casebook.verify(name, dict(args.param or []), args.max_states):
            rows.append((r.name, r.ok, r.evidence))
    rows.extend(_generic_checks(net, q0, args))
    for check, ok, evidence in rows:
        out.write(f"{'PASS' if ok else 'FAIL'}  {check}: {evidence}\n")
    failed = sum(not ok for _, ok, _ in rows)
    out.write(f"{len(rows) - failed}/{len(rows)} checks passed\n")
    return EXIT_OK if not failed else EXIT_FAIL


def cmd_casebook(args, out):
    if args.action != "list":
        raise UsageError(f"unknown casebook action {args.action!r}")
    for e in casebook.ENTRIES.values():
        params = ", ".join(f"{k}={v}" for k, v in e.defaults.items()) or "no parameters"
        out.write(f"{e.name:10} {e.description} [{params}]\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="petriflow", description="Semiflows, bounds, home spaces and liveness of Petri nets."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def net_command(name, func, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("net", help="path to a .pnet file or casebook:<name>")
        p.add_argument("--param", action="append", type=_binding, metavar="NAME=INT")
        p.add_argument("--init", metavar="PLACE=INT,...", help="override initial tokens")
        p.add_argument("--format", choices=("tableau", "json"), default="tableau")
        p.add_argument("--max-states", type=int, default=DEFAULT_NODE_LIMIT)
        p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP,
                       help="Hilbert-basis search cap")
        p.add_argument("--emit-pnet", metavar="PATH", help="write the concrete net as .pnet")
        p.set_defaults(func=func)
        return p

    p = net_command("semiflows", cmd_semiflows, "generating sets of semiflows")
    p.add_argument("--kind", choices=list(KINDS) + ["all"], default="min-support")
    net_command("bounds", cmd_bounds, "mu bounds, rho, structural boundedness")
    p = net_command("rg", cmd_rg, "reachability graph statistics")
    p.add_argument("--dot", metavar="PATH")
    p = net_command("home", cmd_home, "home space / home state checks")
    p.add_argument("--set", metavar="PREDICATE")
    p.add_argument("--state", metavar="PLACE=INT,...")
    net_command("live", cmd_live, "classify transitions as live, quasi-live or dead")
    p = net_command("verify", cmd_verify, "run the expected-results table and consistency checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--walk", type=int, default=1000, help="random-walk length")

    p = sub.add_parser("casebook", help="built-in nets")
    p.add_argument("action", choices=("list",))
    p.set_defaults(func=cmd_casebook)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args, out)
    except (ResourceLimitError, IncompleteGraphError) as exc:
        log.error("%s", exc)
        return EXIT_LIMIT
    except (NetFormatError, PredicateError, UnknownPlaceError, casebook.CasebookError,
            UsageError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except PetriError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
