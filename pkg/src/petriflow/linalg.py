"""Exact integer/rational linear algebra on small dense matrices.

Matrices are lists of rows of Python ints (or Fractions).  Elimination is
fraction free: rows are combined by cross multiplication and divided by
their content, so intermediate entries stay integral and small.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm


def content(row):
    return reduce(gcd, (abs(x) for x in row), 0)


def primitive(row):
    """Divide an integer vector by the gcd of its entries."""
    g = content(row)
    if g <= 1:
        return tuple(row)
    return tuple(x // g for x in row)


def to_integer_rows(rows):
    """Scale rows of Fractions to integer rows (per-row lcm of denominators)."""
    out = []
    for row in rows:
        den = reduce(lcm, (Fraction(x).denominator for x in row), 1)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def echelon(matrix):
    """Fraction-free reduced row echelon form.

    Returns ``(rows, pivots)`` where `rows` are primitive integer rows and
    `pivots[i]` is the pivot column of row i.  Every pivot column is zero
    in all other rows.
    """
    m = [list(r) for r in to_integer_rows(matrix)]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pr = m[r]
        if pr[c] < 0:
            pr[:] = [-x for x in pr]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                a, b = pr[c], m[i][c]
                m[i] = list(primitive([a * x - b * y for x, y in zip(m[i], pr)]))
        m[r] = list(primitive(pr))
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(matrix) -> int:
    return len(echelon(matrix)[1])


def nullspace(matrix, ncols=None):
    """Integer basis (primitive vectors) of {x : matrix . x = 0}."""
    if ncols is None:
        ncols = len(matrix[0])
    if not matrix:
        return [tuple(int(i == j) for i in range(ncols)) for j in range(ncols)]
    rows, pivots = echelon(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        scale = reduce(lcm, (row[p] for row, p in zip(rows, pivots)), 1)
        v = [0] * ncols
        v[free] = scale
        for row, p in zip(rows, pivots):
            v[p] = -scale * row[free] // row[p]
        basis.append(primitive(v))
    return basis


def in_row_span(rows, vector) -> bool:
    if not any(vector):
        return True
    rows = [list(r) for r in rows]
    return rank(rows + [list(vector)]) == rank(rows)


def same_row_span(a, b) -> bool:
    """True when two families of vectors span the same rational space."""
    return all(in_row_span(a, v) for v in b) and all(in_row_span(b, v) for v in a)


def independent_subset(vectors):
    """Greedy maximal linearly independent sub-family (indices, in order)."""
    chosen = []
    for i, v in enumerate(vectors):
        if rank([vectors[j] for j in chosen] + [v]) > len(chosen):
            chosen.append(i)
    return chosen


def solve(columns, target):
    """Exact solution of sum(x_i * columns[i]) = target, or None.

    Returns the unique solution as Fractions; `columns` must be linearly
    independent.
    """
    n = len(columns)
    if n == 0:
        return [] if not any(target) else None
    d = len(target)
    aug = [[Fraction(columns[i][r]) for i in range(n)] + [Fraction(target[r])] for r in range(d)]
    r = 0
    for c in range(n):
        pivot = next((i for i in range(r, d) if aug[i][c] != 0), None)
        if pivot is None:
            raise ValueError("columns are linearly dependent")
        aug[r], aug[pivot] = aug[pivot], aug[r]
        inv = aug[r][c]
        aug[r] = [x / inv for x in aug[r]]
        for i in range(d):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        r += 1
    if any(aug[i][n] != 0 for i in range(n, d)):
        return None
    return [aug[i][n] for i in range(n)]


def nonnegative_combination(vectors, target):
    """Non-negative rational coefficients expressing `target`, or None.

    Enumerates linearly independent sub-families (Caratheodory: a point of
    a finitely generated cone lies in the cone of an independent subset).
    Exponential in the worst case; intended for small generating sets.
    """
    vectors = [tuple(v) for v in vectors]
    if not any(target):
        return [Fraction(0)] * len(vectors)
    r = rank([list(v) for v in vectors])
    for size in range(1, r + 1):
        for idx in combinations(range(len(vectors)), size):
            cols = [vectors[i] for i in idx]
            if rank([list(c) for c in cols]) < size:
                continue
            coeffs = solve(cols, target)
            if coeffs is not None and all(x >= 0 for x in coeffs):
                out = [Fraction(0)] * len(vectors)
                for i, x in zip(idx, coeffs):
                    out[i] = x
                return out
    return None
