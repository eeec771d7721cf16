"""Evolution algebras given by their structure matrix in a natural basis.

Row ``i`` of the structure matrix holds the coordinates of ``e_i * e_i``;
distinct natural basis vectors multiply to zero.

Permutations use one-line notation with 0-based indices: ``perm[new] = old``.
Relabelling the natural basis moves rows and columns together, so the
permuted structure matrix is ``A'[i][j] = A[perm[i]][perm[j]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from . import linalg
from .errors import DimensionMismatch, RankMismatch
from .field import ONE, ZERO, GaussianRational, as_gaussian

Matrix = Tuple[Tuple[GaussianRational, ...], ...]


def validate_square(entries) -> Matrix:
    """Coerce a nested sequence to an exact square matrix, rejecting ragged input."""
    rows = [tuple(as_gaussian(x) for x in row) for row in entries]
    n = len(rows)
    if n == 0:
        raise DimensionMismatch("structure matrix must have at least one row")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise DimensionMismatch(f"row {i} has length {len(row)}, expected {n}")
    return tuple(rows)


def validate_perm(perm: Sequence[int], n: int) -> Tuple[int, ...]:
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of 0..{n - 1}")
    return perm


@dataclass(frozen=True)
class EvolutionAlgebra:
    """An n-dimensional evolution algebra over Q(i)."""

    A: Matrix

    def __init__(self, A):
        object.__setattr__(self, "A", validate_square(A))

    @property
    def n(self) -> int:
        return len(self.A)

    def basis_vector(self, i: int) -> List[GaussianRational]:
        v = [ZERO] * self.n
        v[i] = ONE
        return v

    def square(self, i: int) -> Tuple[GaussianRational, ...]:
        """Coordinates of ``e_i * e_i``."""
        return self.A[i]

    def multiply(self, u: Sequence, v: Sequence) -> List[GaussianRational]:
        return multiply(u, v, self)

    def rank(self) -> int:
        return rank(self)

    def permuted(self, perm: Sequence[int]) -> "EvolutionAlgebra":
        perm = validate_perm(perm, self.n)
        return EvolutionAlgebra([[self.A[p][q] for q in perm] for p in perm])

    def is_zero_square(self, i: int) -> bool:
        return not any(self.A[i])

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.A)
        return f"EvolutionAlgebra(n={self.n}, A=[{body}])"


def multiply(u: Sequence, v: Sequence, E: EvolutionAlgebra) -> List[GaussianRational]:
    """Product ``u * v`` in ``E``: the sum over i of ``u_i v_i (e_i * e_i)``."""
    n = E.n
    if len(u) != n or len(v) != n:
        raise DimensionMismatch(f"vectors of length {len(u)}, {len(v)} in a {n}-dimensional algebra")
    out = [ZERO] * n
    for i in range(n):
        if not u[i] or not v[i]:
            continue
        w = u[i] * v[i]
        for k, a in enumerate(E.A[i]):
            if a:
                out[k] = out[k] + w * a
    return out


def rank(E: EvolutionAlgebra) -> int:
    """``rank A``, which equals ``dim(E * E)``."""
    return linalg.bareiss_rank(E.A)


@dataclass(frozen=True)
class BVector:
    """Coefficients expressing the dependent square in a rank-(n-1) algebra.

    After applying ``perm`` the first ``n-1`` rows are independent and
    ``e_n e_n = sum_k coeffs[k] (e_k e_k)``.
    """

    coeffs: Tuple[GaussianRational, ...]
    perm: Tuple[int, ...]

    @property
    def nonzero(self) -> List[int]:
        return [k for k, b in enumerate(self.coeffs) if b]


def normalize_dependent_row(E: EvolutionAlgebra) -> BVector:
    """Move a dependent row last and solve for its coefficients.

    Rows are scanned in index order and kept while they raise the rank; the
    one row that does not is placed last.
    """
    n = E.n
    r = rank(E)
    if r != n - 1:
        raise RankMismatch(f"rank {r} != n-1 = {n - 1}")
    kept: List[int] = []
    dependent = None
    for i in range(n):
        if linalg.rank([E.A[j] for j in kept + [i]]) == len(kept) + 1:
            kept.append(i)
        elif dependent is None:
            dependent = i
    assert dependent is not None and len(kept) == n - 1
    coeffs = linalg.span_coefficients([E.A[j] for j in kept], E.A[dependent])
    assert coeffs is not None
    return BVector(coeffs=tuple(coeffs), perm=tuple(kept + [dependent]))
