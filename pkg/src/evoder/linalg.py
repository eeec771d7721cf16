"""Exact linear algebra over Q(i).

Dense matrices are lists of rows; sparse rows are ``{column: value}`` dicts
holding nonzero entries only. Everything here is exact: no pivot tolerances.
"""

from __future__ import annotations

from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from .field import ONE, ZERO, GaussianRational, as_gaussian

SparseRow = Dict[int, GaussianRational]


def _integral_row(row: Sequence[GaussianRational]) -> List[GaussianRational]:
    den = 1
    for x in row:
        den = lcm(den, x.re.denominator, x.im.denominator)
    return [x * den for x in row] if den != 1 else list(row)


def bareiss_rank(matrix: Sequence[Sequence]) -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Rows are first scaled to Gaussian integers so every intermediate value is a
    Gaussian integer and each division by the previous pivot is exact.
    """
    m = [_integral_row([as_gaussian(x) for x in row]) for row in matrix]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    prev = ONE
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        pivot = next((r for r in range(rank, nrows) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, nrows):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col + 1, ncols):
                row_r[c] = (p * row_r[c] - f * row_p[c]) / prev
            row_r[col] = ZERO
        prev = p
        rank += 1
    return rank


def to_sparse(row: Sequence) -> SparseRow:
    return {j: as_gaussian(x) for j, x in enumerate(row) if x}


def rref_sparse(rows: Sequence[SparseRow], ncols: int) -> Tuple[List[SparseRow], List[int]]:
    """Gauss-Jordan reduction of sparse rows.

    Columns are processed left to right; the pivot for a column is the first
    remaining row (in input order) with a nonzero entry there. Returns the
    pivot rows, each normalized to a leading 1, and their pivot columns.
    """
    remaining = [dict(r) for r in rows if r]
    pivot_rows: List[SparseRow] = []
    pivots: List[int] = []
    for col in range(ncols):
        idx = next((k for k, r in enumerate(remaining) if col in r), None)
        if idx is None:
            continue
        prow = remaining.pop(idx)
        lead = prow[col]
        if lead != ONE:
            inv = ONE / lead
            prow = {c: v * inv for c, v in prow.items()}
        for other in remaining:
            _eliminate(other, prow, col)
        for other in pivot_rows:
            _eliminate(other, prow, col)
        remaining = [r for r in remaining if r]
        pivot_rows.append(prow)
        pivots.append(col)
        if not remaining:
            break
    return pivot_rows, pivots


def _eliminate(target: SparseRow, prow: SparseRow, col: int) -> None:
    f = target.get(col)
    if f is None:
        return
    for c, v in prow.items():
        nv = target.get(c, ZERO) - f * v
        if nv:
            target[c] = nv
        else:
            target.pop(c, None)


def rank(matrix: Sequence[Sequence]) -> int:
    """Rank by Gauss-Jordan reduction (independent of :func:`bareiss_rank`)."""
    if not matrix:
        return 0
    return len(rref_sparse([to_sparse(r) for r in matrix], len(matrix[0]))[1])


def nullspace_sparse(rows: Sequence[SparseRow], ncols: int) -> List[List[GaussianRational]]:
    """Basis of ``{x : row . x = 0 for every row}``, returned in reduced echelon form.

    Each basis vector has a leading entry 1 at a distinct position, and the
    vectors are ordered by that position.
    """
    prows, pivots = rref_sparse(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for prow, p in zip(prows, pivots):
            x = prow.get(free)
            if x is not None:
                v[p] = -x
        basis.append(v)
    return echelon_basis(basis, ncols)


def nullspace(matrix: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[GaussianRational]]:
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    return nullspace_sparse([to_sparse(r) for r in matrix], ncols)


def echelon_basis(vectors: Sequence[Sequence], ncols: int) -> List[List[GaussianRational]]:
    """Reduced row echelon form of a family of vectors, zero rows dropped."""
    prows, _ = rref_sparse([to_sparse(v) for v in vectors], ncols)
    out = []
    for r in prows:
        v = [ZERO] * ncols
        for c, x in r.items():
            v[c] = x
        out.append(v)
    return out


def span_coefficients(
    basis: Sequence[Sequence], target: Sequence
) -> Optional[List[GaussianRational]]:
    """Coefficients ``c`` with ``sum c_k basis[k] == target``, or None if not in the span."""
    k = len(basis)
    length = len(target)
    if k == 0:
        return [] if not any(target) else None
    # unknowns c_0..c_{k-1}; augmented column k holds the target
    rows = []
    for pos in range(length):
        row = {j: as_gaussian(basis[j][pos]) for j in range(k) if basis[j][pos]}
        t = as_gaussian(target[pos])
        if t:
            row[k] = t
        if row:
            rows.append(row)
    prows, pivots = rref_sparse(rows, k + 1)
    if k in pivots:
        return None
    coeffs = [ZERO] * k
    for prow, p in zip(prows, pivots):
        coeffs[p] = prow.get(k, ZERO)
    return coeffs


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> List[GaussianRational]:
    """Unique solution of a square nonsingular system ``matrix @ x = rhs``."""
    n = len(matrix)
    columns = [[matrix[i][j] for i in range(n)] for j in range(n)]
    coeffs = span_coefficients(columns, rhs)
    if coeffs is None or rank(matrix) != n:
        raise ZeroDivisionError("singular system")
    return coeffs


def det(matrix: Sequence[Sequence]) -> GaussianRational:
    """Determinant by Gaussian elimination with exact arithmetic."""
    m = [[as_gaussian(x) for x in row] for row in matrix]
    n = len(m)
    result = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result = result * p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                for c in range(col, n):
                    m[r][c] = m[r][c] - f * m[col][c]
    return result


def transpose(matrix: Sequence[Sequence]) -> List[list]:
    return [list(col) for col in zip(*matrix)] if matrix else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[list]:
    cols = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in cols:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out
