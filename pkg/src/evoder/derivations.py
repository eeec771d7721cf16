"""Derivations of an evolution algebra as the nullspace of the Leibniz system.

A linear map ``d`` is stored as the matrix ``D`` with ``d(e_p) = sum_q D[p][q] e_q``,
so row ``p`` holds the image of ``e_p`` and ``d`` acts on a coordinate row
vector by ``x -> x @ D``. The unknowns ``D[p][q]`` are ordered row-major:
unknown ``p*n + q``.

Two equation families make up the system. For every pair ``i < j`` the
product ``e_i e_j = 0`` gives ``D[i][j] (e_j e_j) + D[j][i] (e_i e_i) = 0``;
for every ``i`` the square gives ``d(e_i e_i) = 2 D[i][i] (e_i e_i)``. Each is
expanded coordinate by coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from . import linalg
from .algebra import EvolutionAlgebra, multiply
from .errors import DimensionMismatch
from .field import ZERO, GaussianRational

DerivationMatrix = Tuple[Tuple, ...]


@dataclass(frozen=True)
class LeibnizSystem:
    n: int
    rows: Tuple[dict, ...]
    labels: Tuple[Tuple[str, int, int, int], ...]

    @property
    def num_unknowns(self) -> int:
        return self.n * self.n

    def dense(self) -> List[List[GaussianRational]]:
        out = []
        for r in self.rows:
            row = [ZERO] * self.num_unknowns
            for c, v in r.items():
                row[c] = v
            out.append(row)
        return out


@dataclass(frozen=True)
class DerivationSpace:
    n: int
    basis: Tuple[DerivationMatrix, ...] = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def vectors(self) -> List[List]:
        return [flatten(d) for d in self.basis]

    def contains(self, d: Sequence[Sequence]) -> bool:
        return linalg.span_coefficients(self.vectors(), flatten(d)) is not None


def flatten(d: Sequence[Sequence]) -> list:
    return [x for row in d for x in row]


def unflatten(v: Sequence, n: int) -> DerivationMatrix:
    return tuple(tuple(v[p * n:(p + 1) * n]) for p in range(n))


def assemble(E: EvolutionAlgebra) -> LeibnizSystem:
    """Build the linear system whose solutions are exactly the derivations of ``E``."""
    n, A = E.n, E.A
    rows: List[dict] = []
    labels = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = {}
                if A[j][k]:
                    row[i * n + j] = A[j][k]
                if A[i][k]:
                    row[j * n + i] = A[i][k]
                rows.append(row)
                labels.append(("pair", i, j, k))
    for i in range(n):
        for k in range(n):
            row: dict = {}
            for p in range(n):
                if A[i][p]:
                    row[p * n + k] = A[i][p]
            if A[i][k]:
                c = i * n + i
                v = row.get(c, ZERO) - 2 * A[i][k]
                if v:
                    row[c] = v
                else:
                    row.pop(c, None)
            rows.append(row)
            labels.append(("square", i, i, k))
    return LeibnizSystem(n=n, rows=tuple(rows), labels=tuple(labels))


def nullspace(system: LeibnizSystem) -> DerivationSpace:
    """Exact basis of the solution space, in reduced echelon order."""
    vecs = linalg.nullspace_sparse(system.rows, system.num_unknowns)
    return DerivationSpace(n=system.n, basis=tuple(unflatten(v, system.n) for v in vecs))


def derivations(E: EvolutionAlgebra) -> DerivationSpace:
    return nullspace(assemble(E))


def apply(d: Sequence[Sequence], x: Sequence) -> list:
    """Image of the coordinate vector ``x`` under ``d``."""
    n = len(d)
    out = [ZERO] * n
    for p in range(n):
        if not x[p]:
            continue
        for q in range(n):
            if d[p][q]:
                out[q] = out[q] + x[p] * d[p][q]
    return out


def is_derivation(E: EvolutionAlgebra, d: Sequence[Sequence]) -> bool:
    """Check ``d(e_i e_j) = d(e_i) e_j + e_i d(e_j)`` for all ``i <= j``."""
    n = E.n
    if len(d) != n or any(len(row) != n for row in d):
        raise DimensionMismatch(f"derivation matrix is not {n}x{n}")
    for i in range(n):
        ei = E.basis_vector(i)
        dei = apply(d, ei)
        for j in range(i, n):
            ej = E.basis_vector(j)
            lhs = apply(d, multiply(ei, ej, E))
            dej = apply(d, ej)
            rhs = [x + y for x, y in zip(multiply(dei, ej, E), multiply(ei, dej, E))]
            if any(x != y for x, y in zip(lhs, rhs)):
                return False
    return True


def lie_bracket(d1: Sequence[Sequence], d2: Sequence[Sequence]) -> DerivationMatrix:
    """Matrix commutator ``D1 D2 - D2 D1``.

    Under the row convention (``x -> x @ D``) this is the operator bracket
    ``[d2, d1]``, i.e. the composition bracket up to sign; either sign is a
    derivation whenever both arguments are.
    """
    if len(d1) != len(d2):
        raise DimensionMismatch("brackets need matrices of equal size")
    ab = linalg.matmul(d1, d2)
    ba = linalg.matmul(d2, d1)
    return tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba))


@dataclass
class FloatCheckReport:
    float_nullity: int
    exact_dim: int
    residuals: List[float]
    threshold: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    @property
    def ok(self) -> bool:
        return self.float_nullity == self.exact_dim and self.max_residual <= self.threshold

    def to_dict(self) -> dict:
        return {
            "float_nullity": self.float_nullity,
            "exact_dim": self.exact_dim,
            "max_residual": self.max_residual,
            "residuals": self.residuals,
            "threshold": self.threshold,
            "ok": self.ok,
        }


def float_check(E: EvolutionAlgebra, space: DerivationSpace, threshold: float = 1e-9) -> FloatCheckReport:
    """Re-solve the system in double precision and substitute the exact basis.

    The float nullity comes from an SVD rank estimate; residuals are
    ``|M v| / (|M| |v|)`` for each exact basis vector ``v``.
    """
    system = assemble(E)
    m = np.array(
        [[complex(x) for x in row] for row in system.dense()], dtype=complex
    ).reshape(len(system.rows), system.num_unknowns)
    float_rank = int(np.linalg.matrix_rank(m)) if m.size else 0
    scale = float(np.linalg.norm(m, 2)) if m.size else 0.0
    residuals = []
    for d in space.basis:
        v = np.array([complex(x) for x in flatten(d)], dtype=complex)
        res = float(np.linalg.norm(m @ v))
        den = scale * float(np.linalg.norm(v))
        residuals.append(res / den if den else res)
    return FloatCheckReport(
        float_nullity=system.num_unknowns - float_rank,
        exact_dim=space.dim,
        residuals=residuals,
        threshold=threshold,
    )
