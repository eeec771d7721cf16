import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from evoder import linalg
from evoder.field import ONE, ZERO, GaussianRational
from helpers import SPARSE_POOL, from_sympy, to_sympy

matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.sampled_from(SPARSE_POOL), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=200)
@given(matrices)
def test_rank_agrees_with_bareiss_and_sympy(m):
    expected = sympy.Matrix([[to_sympy(x) for x in row] for row in m]).rank()
    assert linalg.rank(m) == expected
    assert linalg.bareiss_rank(m) == expected


@settings(max_examples=200)
@given(matrices)
def test_nullspace_is_a_basis_of_the_kernel(m):
    ncols = len(m[0])
    basis = linalg.nullspace(m)
    assert len(basis) == ncols - linalg.rank(m)
    for v in basis:
        for row in m:
            assert sum((a * b for a, b in zip(row, v)), ZERO) == ZERO
    if basis:
        assert linalg.rank(basis) == len(basis)


@settings(max_examples=100)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.sampled_from(SPARSE_POOL), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_sympy(m):
    expected = sympy.Matrix([[to_sympy(x) for x in row] for row in m]).det()
    assert linalg.det(m) == from_sympy(sympy.nsimplify(sympy.expand(expected)))


def test_det_of_empty_matrix_is_one():
    assert linalg.det([]) == ONE


def test_solve_and_span_coefficients():
    m = [[GaussianRational(2), ONE], [ONE, GaussianRational(0, 1)]]
    x = linalg.solve(m, [ONE, ZERO])
    assert [sum((a * b for a, b in zip(row, x)), ZERO) for row in m] == [ONE, ZERO]
    assert linalg.span_coefficients([[ONE, ZERO]], [ZERO, ONE]) is None
    assert linalg.span_coefficients([], [ZERO, ZERO]) == []
