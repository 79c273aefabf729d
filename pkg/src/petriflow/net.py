"""Petri net data model, the `.pnet` text format, and firing semantics.

A net is fully concrete once built: parameters are substituted while
parsing, so every weight and initial token count is a plain integer.
Place and transition order is declaration order and every vector in the
package is indexed by it.

The `.pnet` format is line oriented, `#` starts a comment::

    net TN
    param k = 2
    place A init 3
    place B init 0
    trans t1 : in A:k , out B:1
    trans t2 : in A:1 B:1 , out A:k+1

Weights and initial markings are affine expressions over parameters
(`3`, `k`, `k+1`, `2*x - 1`).  An empty arc list is written `-`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionError,
    DuplicateIdentifierError,
    NegativeWeightError,
    NetFormatError,
    NotEnabledError,
    UnboundParameterError,
    UnknownPlaceError,
    UnknownTransitionError,
)

Marking = tuple  # tuple[int, ...] indexed by PetriNet.places


@dataclass(frozen=True)
class AffineExpr:
    """`constant + sum(coeff * param)` with integer coefficients."""

    constant: int = 0
    terms: tuple = ()  # ((name, coeff), ...)

    def params(self):
        return [name for name, _ in self.terms]

    def evaluate(self, bindings: Mapping[str, int]) -> int:
        value = self.constant
        for name, coeff in self.terms:
            if name not in bindings:
                raise UnboundParameterError(f"parameter {name!r} has no binding")
            value += coeff * bindings[name]
        return value

    def __str__(self):
        parts = []
        for name, coeff in self.terms:
            if coeff == 1:
                parts.append(name)
            elif coeff == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{coeff}*{name}")
        if self.constant or not parts:
            parts.append(str(self.constant))
        text = parts[0]
        for p in parts[1:]:
            text += p if p.startswith("-") else "+" + p
        return text


@dataclass(frozen=True)
class PetriNet:
    name: str
    places: tuple
    transitions: tuple
    pre: tuple  # pre[p][t]
    post: tuple  # post[p][t]
    params: Mapping[str, int] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.places) < 1:
            raise ValueError("a net needs at least one place")
        names = list(self.places) + list(self.transitions)
        seen = set()
        for n in names:
            if n in seen:
                raise DuplicateIdentifierError(f"duplicate identifier {n!r}")
            seen.add(n)
        for table in (self.pre, self.post):
            if len(table) != len(self.places) or any(
                len(row) != len(self.transitions) for row in table
            ):
                raise DimensionError("weight table does not match places x transitions")
            for row in table:
                for w in row:
                    if w < 0:
                        raise NegativeWeightError(f"negative weight {w}")
        object.__setattr__(self, "_pidx", {p: i for i, p in enumerate(self.places)})
        object.__setattr__(self, "_tidx", {t: i for i, t in enumerate(self.transitions)})

    @property
    def d(self) -> int:
        return len(self.places)

    def place_index(self, p) -> int:
        if isinstance(p, int):
            return p
        try:
            return self._pidx[p]
        except KeyError:
            raise UnknownPlaceError(f"unknown place {p!r}") from None

    def transition_index(self, t) -> int:
        if isinstance(t, int):
            if not 0 <= t < len(self.transitions):
                raise UnknownTransitionError(f"unknown transition index {t}")
            return t
        try:
            return self._tidx[t]
        except KeyError:
            raise UnknownTransitionError(f"unknown transition {t!r}") from None

    def pre_vector(self, t) -> tuple:
        j = self.transition_index(t)
        return tuple(row[j] for row in self.pre)

    def post_vector(self, t) -> tuple:
        j = self.transition_index(t)
        return tuple(row[j] for row in self.post)

    def marking(self, values: Mapping[str, int] | None = None, **kw) -> Marking:
        """Build a marking from place names; unmentioned places get 0."""
        values = dict(values or {}, **kw)
        q = [0] * self.d
        for name, v in values.items():
            if v < 0:
                raise ValueError(f"negative token count for {name!r}")
            q[self.place_index(name)] = v
        return tuple(q)

    def format_marking(self, q: Sequence[int]) -> str:
        return "(" + ",".join(f"{p}={v}" for p, v in zip(self.places, q)) + ")"


def incidence(net: PetriNet) -> tuple:
    """C[p][t] = Post(p,t) - Pre(p,t)."""
    return tuple(
        tuple(a - b for a, b in zip(post_row, pre_row))
        for post_row, pre_row in zip(net.post, net.pre)
    )


def _check_marking(net, q):
    if len(q) != net.d:
        raise DimensionError(f"marking has length {len(q)}, net has {net.d} places")


def enabled(net: PetriNet, q: Sequence[int], t) -> bool:
    _check_marking(net, q)
    j = net.transition_index(t)
    return all(q[i] >= net.pre[i][j] for i in range(net.d))


def fire(net: PetriNet, q: Sequence[int], t) -> Marking:
    if not enabled(net, q, t):
        raise NotEnabledError(net.transitions[net.transition_index(t)], 1, tuple(q))
    j = net.transition_index(t)
    return tuple(q[i] - net.pre[i][j] + net.post[i][j] for i in range(net.d))


def fire_sequence(net: PetriNet, q: Sequence[int], word: Iterable) -> Marking:
    q = tuple(q)
    _check_marking(net, q)
    for pos, t in enumerate(word, start=1):
        if not enabled(net, q, t):
            name = net.transitions[net.transition_index(t)]
            raise NotEnabledError(name, pos, q)
        q = fire(net, q, t)
    return q


def enabled_transitions(net: PetriNet, q: Sequence[int]) -> list:
    return [t for t in net.transitions if enabled(net, q, t)]


# ---------------------------------------------------------------------------
# .pnet parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[:,+\-*=]))"
)
_KEYWORDS = {"net", "param", "place", "init", "trans", "in", "out"}


class _Line:
    def __init__(self, text, lineno):
        self.lineno = lineno
        self.toks = []  # (kind, value, column)
        pos = 0
        stripped = text.split("#", 1)[0].rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                col = pos + 1 + (len(stripped[pos:]) - len(stripped[pos:].lstrip()))
                raise NetFormatError(
                    f"unexpected character {stripped[col - 1]!r}", lineno, col
                )
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg, cls=NetFormatError):
        tok = self.peek()
        col = tok[2] if tok else (self.toks[-1][2] + len(self.toks[-1][1]) if self.toks else 1)
        return cls(msg, self.lineno, col)

    def next(self, kind=None, value=None, what=None):
        tok = self.peek()
        if tok is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            expected = what or value or kind
            found = "end of line" if tok is None else repr(tok[1])
            raise self.error(f"expected {expected}, found {found}")
        self.i += 1
        return tok

    def at(self, kind=None, value=None):
        tok = self.peek()
        return tok is not None and (kind is None or tok[0] == kind) and (
            value is None or tok[1] == value
        )

    def ident(self, what):
        tok = self.next("ident", what=what)
        if tok[1] in _KEYWORDS:
            self.i -= 1
            raise self.error(f"expected {what}, found keyword {tok[1]!r}")
        return tok

    def end(self):
        if self.peek() is not None:
            raise self.error(f"unexpected {self.peek()[1]!r}")


def _parse_affine(line: _Line) -> tuple:
    """Returns (AffineExpr, column)."""
    col = line.peek()[2] if line.peek() else None
    constant = 0
    terms = {}
    sign = 1
    if line.at("sym", "-"):
        line.next()
        sign = -1
    while True:
        if line.at("int"):
            value = int(line.next()[1])
            if line.at("sym", "*"):
                line.next()
                name = line.ident("parameter name")[1]
                terms[name] = terms.get(name, 0) + sign * value
            else:
                constant += sign * value
        elif line.at("ident"):
            name = line.ident("integer or parameter")[1]
            terms[name] = terms.get(name, 0) + sign
        else:
            raise line.error("expected integer or parameter")
        if line.at("sym", "+"):
            line.next()
            sign = 1
        elif line.at("sym", "-"):
            line.next()
            sign = -1
        else:
            break
    expr = AffineExpr(constant, tuple((n, c) for n, c in terms.items() if c))
    return expr, col


def _parse_arcs(line: _Line, stop):
    arcs = []
    if line.at("sym", "-"):
        line.next()
        return arcs
    while line.peek() is not None and not line.at("sym", stop):
        ptok = line.ident("place name")
        line.next("sym", ":")
        expr, col = _parse_affine(line)
        arcs.append((ptok[1], ptok[2], expr, col))
    if not arcs:
        raise line.error("empty arc list (write '-' for none)")
    return arcs


def parse_net(text: str, bindings: Mapping[str, int] | None = None):
    """Parse `.pnet` text and substitute parameters.

    Returns ``(net, initial_marking)``.  `bindings` override the defaults
    declared with ``param name = value``.
    """
    bindings = dict(bindings or {})
    name = None
    declared = {}  # param -> default (or None)
    places = []  # (name, expr, lineno, col)
    trans = []  # (name, in_arcs, out_arcs, lineno)
    seen = {}

    def declare(ident, lineno, col):
        if ident in seen:
            raise DuplicateIdentifierError(
                f"duplicate identifier {ident!r} (first declared on line {seen[ident]})",
                lineno,
                col,
            )
        seen[ident] = lineno

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _Line(raw, lineno)
        if line.peek() is None:
            continue
        kw = line.next("ident", what="keyword")[1]
        if kw == "net":
            if name is not None:
                raise NetFormatError("net name declared twice", lineno, 1)
            name = line.ident("net name")[1]
        elif kw == "param":
            tok = line.ident("parameter name")
            if tok[1] in declared:
                raise DuplicateIdentifierError(
                    f"duplicate parameter {tok[1]!r}", lineno, tok[2]
                )
            default = None
            if line.at("sym", "="):
                line.next()
                neg = 1
                if line.at("sym", "-"):
                    line.next()
                    neg = -1
                default = neg * int(line.next("int", what="integer")[1])
            declared[tok[1]] = default
        elif kw == "place":
            tok = line.ident("place name")
            declare(tok[1], lineno, tok[2])
            line.next("ident", "init")
            expr, col = _parse_affine(line)
            places.append((tok[1], expr, lineno, col))
        elif kw == "trans":
            tok = line.ident("transition name")
            declare(tok[1], lineno, tok[2])
            line.next("sym", ":")
            line.next("ident", "in")
            ins = _parse_arcs(line, ",")
            line.next("sym", ",")
            line.next("ident", "out")
            outs = _parse_arcs(line, None)
            trans.append((tok[1], ins, outs, lineno))
        else:
            raise NetFormatError(f"unknown keyword {kw!r}", lineno, 1)
        line.end()

    if not places:
        raise NetFormatError("net declares no place")
    for key in bindings:
        if key not in declared:
            raise UnboundParameterError(f"binding for undeclared parameter {key!r}")
    values = {}
    for pname, default in declared.items():
        if pname in bindings:
            values[pname] = int(bindings[pname])
        elif default is not None:
            values[pname] = default

    def evaluate(expr, lineno, col, what):
        for pname in expr.params():
            if pname not in declared:
                raise UnboundParameterError(f"undeclared parameter {pname!r}", lineno, col)
            if pname not in values:
                raise UnboundParameterError(f"parameter {pname!r} has no binding", lineno, col)
        v = expr.evaluate(values)
        if v < 0:
            raise NegativeWeightError(f"{what} {expr} evaluates to {v}", lineno, col)
        return v

    place_names = [p[0] for p in places]
    pidx = {p: i for i, p in enumerate(place_names)}
    q0 = tuple(evaluate(e, ln, c, "initial marking") for _, e, ln, c in places)
    pre = [[0] * len(trans) for _ in places]
    post = [[0] * len(trans) for _ in places]
    for j, (tname, ins, outs, lineno) in enumerate(trans):
        for arcs, table in ((ins, pre), (outs, post)):
            used = set()
            for pl, pcol, expr, col in arcs:
                if pl not in pidx:
                    raise NetFormatError(f"unknown place {pl!r}", lineno, pcol)
                if pl in used:
                    raise DuplicateIdentifierError(
                        f"place {pl!r} listed twice for {tname!r}", lineno, pcol
                    )
                used.add(pl)
                table[pidx[pl]][j] = evaluate(expr, lineno, col, "weight")

    net = PetriNet(
        name=name or "net",
        places=tuple(place_names),
        transitions=tuple(t[0] for t in trans),
        pre=tuple(map(tuple, pre)),
        post=tuple(map(tuple, post)),
        params=values,
    )
    return net, q0


def serialize_net(net: PetriNet, q0: Sequence[int] | None = None) -> str:
    """Emit `.pnet` text with all weights as integers."""
    if q0 is None:
        q0 = (0,) * net.d
    _check_marking(net, q0)
    lines = [f"net {net.name}"]
    for pname, value in net.params.items():
        lines.append(f"param {pname} = {value}")
    for p, v in zip(net.places, q0):
        lines.append(f"place {p} init {v}")
    for j, t in enumerate(net.transitions):
        ins = " ".join(f"{p}:{net.pre[i][j]}" for i, p in enumerate(net.places) if net.pre[i][j])
        outs = " ".join(
            f"{p}:{net.post[i][j]}" for i, p in enumerate(net.places) if net.post[i][j]
        )
        lines.append(f"trans {t} : in {ins or '-'} , out {outs or '-'}")
    return "\n".join(lines) + "\n"


def net_from_arcs(name, places, transitions, initial=None, params=None):
    """Build a net from ``{t: ({place: w}, {place: w})}``.

    `places` is a sequence of names; `transitions` maps transition name to
    a pair of (consumed, produced) dicts.  Returns ``(net, q0)``.
    """
    places = tuple(places)
    pidx = {p: i for i, p in enumerate(places)}
    tnames = tuple(transitions)
    pre = [[0] * len(tnames) for _ in places]
    post = [[0] * len(tnames) for _ in places]
    for j, t in enumerate(tnames):
        ins, outs = transitions[t]
        for p, w in ins.items():
            pre[pidx[p]][j] = w
        for p, w in outs.items():
            post[pidx[p]][j] = w
    net = PetriNet(
        name, places, tnames, tuple(map(tuple, pre)), tuple(map(tuple, post)), dict(params or {})
    )
    return net, net.marking(initial or {})
