import pytest
from hypothesis import given

from evoder import EvolutionAlgebra, multiply, normalize_dependent_row, rank
from evoder.errors import DimensionMismatch, RankMismatch
from evoder.field import GaussianRational
from helpers import algebras

G = GaussianRational


def test_distinct_basis_vectors_annihilate():
    E = EvolutionAlgebra([[1, 2], [3, 4]])
    assert multiply(E.basis_vector(0), E.basis_vector(1), E) == [0, 0]


def test_square_reads_off_row():
    E = EvolutionAlgebra([[1, 2], [3, 4]])
    assert multiply(E.basis_vector(1), E.basis_vector(1), E) == [3, 4]
    assert E.square(1) == (3, 4)


def test_bilinearity_cross_terms_vanish():
    E = EvolutionAlgebra([[1, 0], [0, 1]])
    assert E.multiply([1, 1], [1, 1]) == [1, 1]


def test_multiply_rejects_wrong_length():
    E = EvolutionAlgebra([[1, 0], [0, 1]])
    with pytest.raises(DimensionMismatch):
        E.multiply([1, 1, 1], [1, 1])


@pytest.mark.parametrize("entries", [[], [[1, 2]], [[1, 0], [0]]])
def test_non_square_rejected(entries):
    with pytest.raises(DimensionMismatch):
        EvolutionAlgebra(entries)


@pytest.mark.parametrize(
    "A, r",
    [
        ([[1 if i == j else 0 for j in range(4)] for i in range(4)], 4),
        ([[0] * 3] * 3, 0),
        ([[0, 1, 0], [1, 0, 1], [0, -1, 0]], 2),
    ],
)
def test_rank_examples(A, r):
    assert rank(EvolutionAlgebra(A)) == r


@given(algebras(max_n=5))
def test_rank_is_permutation_invariant(E):
    perm = list(reversed(range(E.n)))
    assert rank(E.permuted(perm)) == rank(E)


@given(algebras(max_n=4))
def test_product_is_commutative(E):
    u = [G(k + 1) for k in range(E.n)]
    v = [G(0, k) for k in range(E.n)]
    assert E.multiply(u, v) == E.multiply(v, u)


def test_permuted_moves_rows_and_columns_together():
    E = EvolutionAlgebra([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    P = E.permuted([2, 0, 1])
    assert P.A[0] == (9, 7, 8)
    assert P.A[1] == (3, 1, 2)


@pytest.mark.parametrize(
    "A, coeffs, perm",
    [
        ([[1, 0, 0], [0, 1, 0], [1, 1, 0]], (1, 1), (0, 1, 2)),
        ([[0, 1, 0], [1, 0, 1], [0, -1, 0]], (-1, 0), (0, 1, 2)),
        ([[1, 1, 0], [2, 2, 0], [0, 0, 1]], (2, 0), (0, 2, 1)),
    ],
)
def test_normalize_dependent_row(A, coeffs, perm):
    b = normalize_dependent_row(EvolutionAlgebra(A))
    assert b.coeffs == coeffs
    assert b.perm == perm


def test_normalize_requires_rank_n_minus_one():
    with pytest.raises(RankMismatch):
        normalize_dependent_row(EvolutionAlgebra([[1, 0], [0, 1]]))


@given(algebras(min_n=2, max_n=5))
def test_normalized_row_is_the_stated_combination(E):
    if rank(E) != E.n - 1:
        return
    b = normalize_dependent_row(E)
    P = E.permuted(b.perm)
    combo = [sum((b.coeffs[k] * P.A[k][j] for k in range(E.n - 1)), G(0)) for j in range(E.n)]
    assert combo == list(P.A[-1])
