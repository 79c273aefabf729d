"""Place semiflows: non-negative integer solutions of f . C = 0.

Three generating sets are computed, each exactly:

* ``minimal_support_semiflows`` -- the canonical semiflow of every minimal
  support, by Farkas-style column elimination.  Generates over Q+.
* ``hilbert_basis`` -- every componentwise-minimal semiflow, by a
  Contejean-Devie completion.  Generates over N.
* ``rational_kernel_basis`` -- a linearly independent family of
  non-negative semiflows spanning the same rational space.  Generates
  over Q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    DecompositionError,
    DimensionError,
    NotASemiflowError,
    NotASupportError,
    ResourceLimitError,
    SemiringError,
)
from .net import PetriNet, incidence

SCHEMA_VERSION = 1
DEFAULT_NODE_CAP = 10**6


class Semiring(str, Enum):
    N = "N"
    Qplus = "Qplus"
    Q = "Q"


class Kind(str, Enum):
    MinimalSemiflows = "MinimalSemiflows"
    MinimalSupports = "MinimalSupports"
    RationalBasis = "RationalBasis"


@dataclass(frozen=True)
class Semiflow:
    coords: tuple

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, x in enumerate(self.coords) if x)

    @property
    def positive_support(self) -> frozenset:
        return frozenset(i for i, x in enumerate(self.coords) if x > 0)

    @property
    def negative_support(self) -> frozenset:
        return frozenset(i for i, x in enumerate(self.coords) if x < 0)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]


@dataclass(frozen=True)
class GeneratingSet:
    members: tuple  # tuple[Semiflow, ...], descending lexicographic by coords
    semiring: Semiring
    kind: Kind
    places: tuple = ()
    net_name: str = ""

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def vectors(self) -> list:
        return [m.coords for m in self.members]

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "net": self.net_name,
            "semiring": self.semiring.value,
            "kind": self.kind.value,
            "places": list(self.places),
            "members": [list(m.coords) for m in self.members],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, doc) -> "GeneratingSet":
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(
            members=tuple(Semiflow(tuple(m)) for m in doc["members"]),
            semiring=Semiring(doc["semiring"]),
            kind=Kind(doc["kind"]),
            places=tuple(doc.get("places", ())),
            net_name=doc.get("net", ""),
        )


def _make_set(net, vectors, semiring, kind):
    vecs = sorted(set(tuple(v) for v in vectors), reverse=True)
    return GeneratingSet(
        tuple(Semiflow(v) for v in vecs), Semiring(semiring), Kind(kind), net.places, net.name
    )


def _coords(v):
    return v.coords if isinstance(v, Semiflow) else tuple(v)


def residual(net: PetriNet, v: Sequence[int]) -> tuple:
    """The vector v . C, one entry per transition."""
    v = _coords(v)
    if len(v) != net.d:
        raise DimensionError(f"vector has length {len(v)}, net has {net.d} places")
    c = incidence(net)
    return tuple(
        sum(v[i] * c[i][j] for i in range(net.d)) for j in range(len(net.transitions))
    )


def verify_semiflow(net: PetriNet, v: Sequence[int]) -> bool:
    return not any(residual(net, v))


def supports(v):
    """(support, positive support, negative support) as frozensets of indices."""
    s = Semiflow(_coords(v))
    return s.support, s.positive_support, s.negative_support


def dominates(a, b) -> bool:
    """a >= b componentwise."""
    return all(x >= y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Minimal supports


def minimal_support_vectors(matrix, nvars):
    """Canonical non-negative solutions of minimal support of ``x . matrix = 0``.

    `matrix` has one row per variable and one column per equation.  Rows
    of the tableau are ``identity part | residual part``; each column of
    the residual is cancelled in turn by positive combinations of row
    pairs with opposite signs.
    """
    ncols = len(matrix[0]) if matrix and matrix[0] else 0
    rows = [tuple(int(i == j) for j in range(nvars)) + tuple(matrix[i]) for i in range(nvars)]
    for col in range(nvars, nvars + ncols):
        zero = [r for r in rows if r[col] == 0]
        pos = [r for r in rows if r[col] > 0]
        neg = [r for r in rows if r[col] < 0]
        new = []
        for a in pos:
            for b in neg:
                comb = tuple(-b[col] * x + a[col] * y for x, y in zip(a, b))
                new.append(linalg.primitive(comb))
        rows = _prune_supports(zero + new, nvars)
    result = [r[:nvars] for r in rows]
    return sorted(_prune_supports(result, nvars, strict_only=False))


def _prune_supports(rows, nvars, strict_only=True):
    rows = list(dict.fromkeys(rows))
    supp = [frozenset(i for i in range(nvars) if r[i]) for r in rows]
    keep = []
    for i, r in enumerate(rows):
        if not supp[i]:
            continue
        dominated = False
        for j in range(len(rows)):
            if i == j or not supp[j]:
                continue
            if supp[j] < supp[i] or (not strict_only and supp[j] == supp[i] and j < i):
                dominated = True
                break
        if not dominated:
            keep.append(r)
    return keep


def minimal_support_semiflows(net: PetriNet) -> GeneratingSet:
    c = incidence(net)
    vecs = minimal_support_vectors([list(row) for row in c], net.d)
    return _make_set(net, vecs, Semiring.Qplus, Kind.MinimalSupports)


# ---------------------------------------------------------------------------
# Hilbert basis


def hilbert_basis_vectors(matrix, nvars, node_cap=DEFAULT_NODE_CAP):
    """All componentwise-minimal non-zero x in N^nvars with ``x . matrix = 0``.

    Breadth-first completion: a non-solution v is extended by the unit
    vector e_p only if the column contribution of p points back toward
    zero, i.e. ``<v.A, e_p.A> < 0``.  Candidates dominating a found
    solution are dropped.  `node_cap` bounds the number of generated
    candidates; hitting it raises ResourceLimitError.
    """
    ncols = len(matrix[0]) if matrix and matrix[0] else 0
    units = [tuple(matrix[p]) if ncols else () for p in range(nvars)]
    solutions = []
    frontier = {}
    for p in range(nvars):
        v = tuple(int(i == p) for i in range(nvars))
        frontier[v] = units[p]
    generated = len(frontier)
    while frontier:
        fresh = [v for v, r in frontier.items() if not any(r)]
        solutions.extend(fresh)
        nxt = {}
        for v, r in frontier.items():
            if not any(r):
                continue
            for p in range(nvars):
                u = units[p]
                if sum(a * b for a, b in zip(r, u)) >= 0:
                    continue
                w = v[:p] + (v[p] + 1,) + v[p + 1 :]
                if w in nxt:
                    continue
                if any(dominates(w, s) for s in solutions):
                    continue
                generated += 1
                if generated > node_cap:
                    raise ResourceLimitError(
                        f"Hilbert basis search exceeded {node_cap} nodes"
                    )
                nxt[w] = tuple(a + b for a, b in zip(r, u))
        frontier = nxt
    return sorted(solutions)


def hilbert_basis(net: PetriNet, node_cap: int = DEFAULT_NODE_CAP) -> GeneratingSet:
    c = incidence(net)
    vecs = hilbert_basis_vectors([list(row) for row in c], net.d, node_cap)
    return _make_set(net, vecs, Semiring.N, Kind.MinimalSemiflows)


# ---------------------------------------------------------------------------
# Rational basis


def rational_kernel_basis(net: PetriNet) -> GeneratingSet:
    """Independent non-negative semiflows spanning span(F+) over Q."""
    c = incidence(net)
    ntrans = len(net.transitions)
    if ntrans:
        eqs = [[c[i][j] for i in range(net.d)] for j in range(ntrans)]
        kernel = linalg.nullspace(eqs, net.d)
    else:
        kernel = linalg.nullspace([], net.d)
    signed = []
    for v in kernel:
        if all(x <= 0 for x in v):
            v = tuple(-x for x in v)
        signed.append(v)
    if all(all(x >= 0 for x in v) for v in signed):
        return _make_set(net, signed, Semiring.Q, Kind.RationalBasis)
    msupp = minimal_support_semiflows(net).vectors()
    chosen = [msupp[i] for i in linalg.independent_subset(msupp)]
    return _make_set(net, chosen, Semiring.Q, Kind.RationalBasis)


# ---------------------------------------------------------------------------
# Minimality queries


def _as_nonneg_semiflow(net, f):
    f = _coords(f)
    if len(f) != net.d:
        raise DimensionError(f"vector has length {len(f)}, net has {net.d} places")
    if any(x < 0 for x in f) or not any(f) or not verify_semiflow(net, f):
        raise NotASemiflowError(f"{f} is not a non-zero semiflow of F+")
    return f


def is_minimal_semiflow(net: PetriNet, f, basis: GeneratingSet | None = None) -> bool:
    f = _as_nonneg_semiflow(net, f)
    basis = basis or hilbert_basis(net)
    return f in set(basis.vectors())


def _place_set(net, places):
    return frozenset(net.place_index(p) for p in places)


def minimal_support_cover(net: PetriNet, places: Iterable, msupp: GeneratingSet | None = None):
    """Minimal supports contained in `places`; their union must equal it."""
    target = _place_set(net, places)
    msupp = msupp or minimal_support_semiflows(net)
    cover = [m.support for m in msupp if m.support <= target]
    union = frozenset().union(*cover) if cover else frozenset()
    if not target or union != target:
        raise NotASupportError(
            f"places {sorted(net.places[i] for i in target)} are not the support of a semiflow"
        )
    return cover


def is_minimal_support(net: PetriNet, places: Iterable, msupp: GeneratingSet | None = None) -> bool:
    target = _place_set(net, places)
    cover = minimal_support_cover(net, target, msupp)
    return not any(s < target for s in cover)


# ---------------------------------------------------------------------------
# Decomposition


def decompose_over_N(f, generating_set, order: Sequence[int] | None = None) -> list:
    """Greedy coefficients k_i with f = sum k_i e_i over the given member order.

    `order` is a permutation of member indices (default: stored order);
    the returned coefficients follow `order`.  Each k_i is the largest
    integer keeping the residual non-negative.
    """
    members = [m.coords if isinstance(m, Semiflow) else tuple(m) for m in generating_set]
    if isinstance(generating_set, GeneratingSet) and generating_set.semiring is not Semiring.N:
        raise SemiringError("decomposition over N needs a generating set over N")
    if order is None:
        order = range(len(members))
    order = list(order)
    if sorted(order) != list(range(len(members))):
        raise ValueError("order must be a permutation of member indices")
    r = list(_coords(f))
    if any(x < 0 for x in r):
        raise NotASemiflowError("decomposition needs a non-negative vector")
    coeffs = []
    for i in order:
        e = members[i]
        ks = [r[p] // e[p] for p in range(len(e)) if e[p] > 0]
        k = min(ks) if ks else 0
        if k:
            r = [a - k * b for a, b in zip(r, e)]
        coeffs.append(k)
    if any(r):
        raise DecompositionError(r)
    return coeffs


def decompose_over_Qplus(f, generating_set):
    """Non-negative rational coefficients (Fractions) or None if infeasible."""
    vectors = [_coords(m) for m in generating_set]
    return linalg.nonnegative_combination(vectors, _coords(f))
