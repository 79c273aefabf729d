"""Text and JSON rendering of analysis results."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .invariants import invariant_value

SCHEMA_VERSION = 1


def render_tableau(E, q0, places=None, symbolic_names=None, row_names=None) -> str:
    """Aligned table: one row per member, one column per place, then e.q0.

    With `symbolic_names` (``{"x": 2, "y": 1}``) an invariant value equal
    to a named parameter is printed as that name; the first match wins.
    """
    members = [m.coords if hasattr(m, "coords") else tuple(m) for m in E]
    if places is None:
        places = getattr(E, "places", None) or tuple(f"p{i}" for i in range(len(q0)))
    names = list(row_names or [f"f{i + 1}" for i in range(len(members))])
    symbolic = dict(symbolic_names or {})

    def value_text(v):
        for name, val in symbolic.items():
            if val == v:
                return name
        return str(v)

    values = [value_text(invariant_value(m, q0)) for m in members]
    widths = [
        max([len(p)] + [len(str(m[i])) for m in members]) for i, p in enumerate(places)
    ]
    label_w = max([len(n) for n in names] + [0])
    header = " " * label_w + " " + " ".join(p.rjust(w) for p, w in zip(places, widths)) + " | value"
    lines = [header, "-" * len(header)]
    for name, m, v in zip(names, members, values):
        cells = " ".join(str(x).rjust(w) for x, w in zip(m, widths))
        lines.append(f"{name.ljust(label_w)} {cells} | {v}")
    return "\n".join(lines) + "\n"


@dataclass
class AnalysisReport:
    """Everything one CLI invocation computed, with the evidence for each verdict."""

    net: str
    bindings: dict
    places: tuple = ()
    generating_sets: dict = field(default_factory=dict)  # kind -> GeneratingSet
    tableau: list = field(default_factory=list)  # [(coords, value)]
    bounds: object = None  # BoundReport
    graph_stats: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)  # [{"check", "ok", "evidence"}]

    def add_verdict(self, check, ok, evidence):
        self.verdicts.append({"check": check, "ok": bool(ok), "evidence": evidence})

    @property
    def ok(self):
        return all(v["ok"] for v in self.verdicts)

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "net": self.net,
            "bindings": dict(self.bindings),
            "places": list(self.places),
            "generating_sets": {k: g.to_json() for k, g in self.generating_sets.items()},
            "tableau": [{"semiflow": list(f), "value": v} for f, v in self.tableau],
            "bounds": self.bounds.to_json() if self.bounds is not None else None,
            "graph": self.graph_stats,
            "verdicts": self.verdicts,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=False)
