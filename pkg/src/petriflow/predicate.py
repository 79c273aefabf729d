"""Linear state predicates: conjunctions of ``sum a_i * place (=|<=|>=) c``.

Grammar::

    pred  := ''  |  atom ('&' atom)*
    atom  := lin cmp lin
    lin   := ['-'] term (('+'|'-') term)*
    term  := INT | [INT '*'] PLACE
    cmp   := '=' | '<=' | '>='

Both sides may mix places and constants; everything is moved to
``sum(coeffs) cmp constant``.  Explicit node sets are supported through
`NodeSet` for predicates the grammar cannot express.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import PredicateError, UnknownPlaceError

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><=|>=|=|&|\+|-|\*))")


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple  # ((place, coeff), ...)
    op: str
    rhs: int

    def holds(self, value_of) -> bool:
        lhs = sum(c * value_of(p) for p, c in self.coeffs)
        if self.op == "=":
            return lhs == self.rhs
        if self.op == "<=":
            return lhs <= self.rhs
        return lhs >= self.rhs

    def __str__(self):
        parts = []
        for p, c in self.coeffs:
            term = p if abs(c) == 1 else f"{abs(c)}*{p}"
            if not parts:
                parts.append(term if c > 0 else "-" + term)
            else:
                parts.append(("+ " if c > 0 else "- ") + term)
        return f"{' '.join(parts) or '0'} {self.op} {self.rhs}"


@dataclass(frozen=True)
class StatePredicate:
    """Conjunction of linear constraints over place names."""

    constraints: tuple = ()

    def places(self):
        return {p for c in self.constraints for p, _ in c.coeffs}

    def check_places(self, places):
        unknown = self.places() - set(places)
        if unknown:
            raise UnknownPlaceError(f"unknown place(s) {sorted(unknown)} in predicate")

    def holds(self, marking, places) -> bool:
        idx = {p: i for i, p in enumerate(places)}
        self.check_places(places)
        return all(c.holds(lambda p: marking[idx[p]]) for c in self.constraints)

    def __and__(self, other: "StatePredicate") -> "StatePredicate":
        return StatePredicate(self.constraints + other.constraints)

    def __str__(self):
        return " & ".join(str(c) for c in self.constraints) or "true"


@dataclass(frozen=True)
class NodeSet:
    """Extensional predicate: explicit states (markings or opaque ids)."""

    states: frozenset

    def holds(self, state, places=None) -> bool:
        return state in self.states


def _tokenize(text):
    toks = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PredicateError(f"unexpected character at column {pos + 1}: {text[pos:]!r}")
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return toks


def parse_predicate(text: str, places=None) -> StatePredicate:
    """Parse a conjunction; with `places`, unknown names are rejected."""
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take(kind=None, value=None):
        nonlocal i
        tok = peek()
        if tok is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            where = f"column {tok[2]}" if tok else "end of input"
            raise PredicateError(f"expected {value or kind} at {where}")
        i += 1
        return tok

    def linear():
        coeffs, const = {}, 0
        sign = 1
        if peek() and peek()[1] == "-":
            take()
            sign = -1
        while True:
            tok = peek()
            if tok is None:
                raise PredicateError("expected term at end of input")
            if tok[0] == "int":
                take()
                value = int(tok[1])
                if peek() and peek()[1] == "*":
                    take()
                    name = take("ident")[1]
                    coeffs[name] = coeffs.get(name, 0) + sign * value
                else:
                    const += sign * value
            elif tok[0] == "ident":
                take()
                coeffs[tok[1]] = coeffs.get(tok[1], 0) + sign
            else:
                raise PredicateError(f"expected term at column {tok[2]}")
            tok = peek()
            if tok and tok[1] in ("+", "-"):
                take()
                sign = 1 if tok[1] == "+" else -1
            else:
                return coeffs, const

    constraints = []
    if toks:
        while True:
            lc, lk = linear()
            tok = peek()
            if tok is None or tok[1] not in ("=", "<=", ">="):
                where = f"column {tok[2]}" if tok else "end of input"
                raise PredicateError(f"expected comparator at {where}")
            op = take()[1]
            rc, rk = linear()
            coeffs = dict(lc)
            for p, c in rc.items():
                coeffs[p] = coeffs.get(p, 0) - c
            constraints.append(
                Constraint(tuple((p, c) for p, c in coeffs.items() if c), op, rk - lk)
            )
            if peek() is None:
                break
            take("op", "&")
    pred = StatePredicate(tuple(constraints))
    if places is not None:
        pred.check_places(places)
    return pred
