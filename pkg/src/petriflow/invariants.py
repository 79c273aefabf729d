"""Behavioural facts derived from a generating set of semiflows.

Covers invariant values, the intersection of invariant hyperplanes
(`iota`), per-place token bounds (`mu_bound`), the union of supports
(`rho`), structural boundedness and threshold-dead transitions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor

from . import linalg
from .errors import DimensionError, NoBoundError, SemiringError
from .net import PetriNet, incidence
from .semiflows import (
    DEFAULT_NODE_CAP,
    GeneratingSet,
    Semiflow,
    Semiring,
    hilbert_basis_vectors,
    minimal_support_vectors,
)

SCHEMA_VERSION = 1


def _coords(v):
    return v.coords if isinstance(v, Semiflow) else tuple(v)


def invariant_value(f, q) -> int:
    """f . q, cross-checked against the positive-minus-negative split."""
    f, q = _coords(f), tuple(q)
    if len(f) != len(q):
        raise DimensionError(f"semiflow has length {len(f)}, marking has {len(q)}")
    direct = sum(a * b for a, b in zip(f, q))
    plus = sum(a * b for a, b in zip(f, q) if a > 0)
    minus = sum(-a * b for a, b in zip(f, q) if a < 0)
    assert direct == plus - minus, (direct, plus, minus)
    return direct


@dataclass(frozen=True)
class LinearInvariantSystem:
    """Rows f . q = c, one per generating-set member."""

    rows: tuple  # ((coords, constant), ...)
    origin: tuple

    def contains(self, q) -> bool:
        q = tuple(q)
        return all(invariant_value(f, q) == c for f, c in self.rows)

    __contains__ = contains

    def augmented(self) -> list:
        return [list(f) + [c] for f, c in self.rows]

    def same_affine_set(self, other: "LinearInvariantSystem") -> bool:
        """Mutual row-span inclusion of the augmented systems [f | c]."""
        return linalg.same_row_span(self.augmented(), other.augmented())


def iota(E, q0) -> LinearInvariantSystem:
    q0 = tuple(q0)
    rows = tuple((_coords(e), invariant_value(e, q0)) for e in E)
    return LinearInvariantSystem(rows, q0)


def _require_ordered_semiring(E):
    if isinstance(E, GeneratingSet) and E.semiring not in (Semiring.N, Semiring.Qplus):
        raise SemiringError(
            f"bounds need a generating set over N or Q+, got {E.semiring.value}"
        )


def rho(E) -> frozenset:
    out = frozenset()
    for e in E:
        out |= frozenset(i for i, x in enumerate(_coords(e)) if x)
    return out


@dataclass(frozen=True)
class PlaceBound:
    place: str
    bound: Fraction | None
    floor: int | None
    witness: int | None  # index into the generating set

    def to_json(self):
        return {
            "place": self.place,
            "bound": None if self.bound is None else str(self.bound),
            "floor": self.floor,
            "witness": self.witness,
        }


def mu_bound(E, p, q0, net: PetriNet | None = None):
    """(exact bound, floored bound, witness index) for place `p`.

    `p` is a place index, or a name when `net` is given.
    """
    _require_ordered_semiring(E)
    if not isinstance(p, int):
        if net is None:
            raise TypeError("place names need the net")
        p = net.place_index(p)
    best = None
    witness = None
    for i, e in enumerate(E):
        e = _coords(e)
        if e[p]:
            value = Fraction(invariant_value(e, q0), e[p])
            if best is None or value < best:
                best, witness = value, i
    if best is None:
        raise NoBoundError(f"place {p} lies in no semiflow support")
    return best, floor(best), witness


@dataclass
class BoundReport:
    places: tuple
    entries: list
    rho: frozenset
    bounded_places: frozenset = frozenset()
    bounded_witnesses: dict = field(default_factory=dict)
    structurally_bounded: bool = False
    structural_witness: tuple | None = None
    threshold_dead: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "mu": [e.to_json() for e in self.entries],
            "rho": [self.places[i] for i in sorted(self.rho)],
            "structurally_bounded_places": [self.places[i] for i in sorted(self.bounded_places)],
            "structural_witnesses": {
                self.places[i]: list(w) for i, w in sorted(self.bounded_witnesses.items())
            },
            "net_structurally_bounded": self.structurally_bounded,
            "structural_witness": (
                list(self.structural_witness) if self.structural_witness else None
            ),
            "threshold_dead": {t: w for t, w in self.threshold_dead.items()},
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2)


def bound_report(net: PetriNet, E, q0, node_cap=DEFAULT_NODE_CAP) -> BoundReport:
    _require_ordered_semiring(E)
    entries = []
    for i, name in enumerate(net.places):
        try:
            b, fl, w = mu_bound(E, i, q0)
        except NoBoundError:
            b = fl = w = None
        entries.append(PlaceBound(name, b, fl, w))
    places, witnesses = structurally_bounded_places(net, node_cap)
    ok, witness = is_structurally_bounded(net, node_cap, (places, witnesses))
    return BoundReport(
        places=net.places,
        entries=entries,
        rho=rho(E),
        bounded_places=places,
        bounded_witnesses=witnesses,
        structurally_bounded=ok,
        structural_witness=witness,
        threshold_dead={net.transitions[t]: w for t, w in threshold_dead_transitions(net, E, q0).items()},
    )


# ---------------------------------------------------------------------------
# Structural boundedness


def structurally_bounded_places(net: PetriNet, node_cap=DEFAULT_NODE_CAP, method="supports"):
    """Places p with some f >= 0, f(p) > 0 and f.Pre(.,t) >= f.Post(.,t) for all t.

    One slack variable per transition turns the inequalities into the
    equalities f.C + s = 0 over N.  The union of f-part supports is the
    same for the extreme rays of that cone (``method="supports"``, fast)
    and for its Hilbert basis (``method="hilbert"``).
    Returns (place index set, {place index: witness f}).
    """
    c = incidence(net)
    ntrans = len(net.transitions)
    d = net.d
    if not ntrans:
        basis = [tuple(int(i == j) for i in range(d)) for j in range(d)]
    else:
        matrix = [list(c[i]) for i in range(d)]
        matrix += [[int(j == k) for k in range(ntrans)] for j in range(ntrans)]
        if method == "hilbert":
            basis = hilbert_basis_vectors(matrix, d + ntrans, node_cap)
        elif method == "supports":
            basis = minimal_support_vectors(matrix, d + ntrans)
        else:
            raise ValueError(f"unknown method {method!r}")
    witnesses = {}
    for v in basis:
        f = tuple(v[:d])
        for i in range(d):
            if f[i] and i not in witnesses:
                witnesses[i] = f
    return frozenset(witnesses), witnesses


def is_structurally_bounded(net: PetriNet, node_cap=DEFAULT_NODE_CAP, precomputed=None):
    """(verdict, witness) where the witness is strictly positive when True."""
    places, witnesses = precomputed or structurally_bounded_places(net, node_cap)
    if len(places) != net.d:
        return False, None
    total = [0] * net.d
    for f in dict.fromkeys(witnesses.values()):
        total = [a + b for a, b in zip(total, f)]
    return True, tuple(total)


def threshold_dead_transitions(net: PetriNet, E, q0) -> dict:
    """{transition index: witness member index} with e.q0 < e.Pre(.,t).

    One-sided: a transition absent from the result may still be dead.
    """
    _require_ordered_semiring(E)
    q0 = tuple(q0)
    dead = {}
    members = [_coords(e) for e in E]
    for j in range(len(net.transitions)):
        pre = net.pre_vector(j)
        for i, e in enumerate(members):
            if invariant_value(e, q0) < invariant_value(e, pre):
                dead[j] = i
                break
    return dead
