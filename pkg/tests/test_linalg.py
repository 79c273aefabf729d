from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from petriflow import linalg

small_matrix = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_primitive_and_content():
    assert linalg.content([4, -6, 0]) == 2
    assert linalg.primitive([4, -6, 0]) == (2, -3, 0)
    assert linalg.primitive([0, 0]) == (0, 0)


def test_to_integer_rows():
    assert linalg.to_integer_rows([[Fraction(1, 2), Fraction(1, 3)]]) == [[3, 2]]


def test_echelon_identity():
    rows, pivots = linalg.echelon([[2, 0], [0, 3]])
    assert pivots == [0, 1]
    assert rows == [(1, 0), (0, 1)]


def test_nullspace_tn_transpose():
    # equations are the transitions of TN(2): -2a + b = 0 and 2a - b = 0
    assert linalg.nullspace([[-2, 1], [2, -1]], 2) == [(1, 2)]


def test_nullspace_no_equations():
    assert sorted(linalg.nullspace([], 2)) == [(0, 1), (1, 0)]


def test_solve_and_nonnegative_combination():
    assert linalg.solve([(1, 0), (1, 1)], (3, 1)) == [2, 1]
    assert linalg.solve([(1, 0)], (0, 1)) is None
    assert linalg.nonnegative_combination([(1, 0), (0, 1)], (2, 3)) == [2, 3]
    assert linalg.nonnegative_combination([(1, 1)], (1, 2)) is None
    coeffs = linalg.nonnegative_combination([(2, 0, 1), (0, 2, 1)], (1, 1, 1))
    assert coeffs == [Fraction(1, 2), Fraction(1, 2)]


def test_same_row_span():
    assert linalg.same_row_span([(1, 1, 0), (0, 1, 1)], [(1, 2, 1), (1, 0, -1)])
    assert not linalg.same_row_span([(1, 0)], [(0, 1)])


@settings(max_examples=80, deadline=None)
@given(small_matrix)
def test_rank_matches_numpy(m):
    assert linalg.rank(m) == np.linalg.matrix_rank(np.array(m, dtype=float))


@settings(max_examples=80, deadline=None)
@given(small_matrix)
def test_nullspace_is_kernel_of_full_dimension(m):
    ncols = len(m[0])
    kernel = linalg.nullspace(m, ncols)
    for v in kernel:
        assert any(v)
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)
        assert linalg.content(v) == 1
    assert len(kernel) == ncols - linalg.rank(m)
    if kernel:
        assert linalg.rank(kernel) == len(kernel)
