"""Seeded instance generators for each structural case.

Each case is built in its canonical layout and then relabelled by a random
basis permutation, so the classifier has to find the layout again. The
pseudo-random source is :class:`random.Random` (Mersenne Twister MT19937)
seeded with the caller's integer; the same ``(case, n, seed, k, rank)``
always yields the same matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from . import linalg
from .algebra import EvolutionAlgebra
from .errors import DimensionTooSmall, UnsupportedCase
from .field import ZERO, GaussianRational

GENERATOR_ID = "python random.Random (MT19937)"

POOL = (
    GaussianRational(1),
    GaussianRational(-1),
    GaussianRational(2),
    GaussianRational(-2),
    GaussianRational(0, 1),
    GaussianRational(0, -1),
    GaussianRational(1, 1),
)

SPARSE_ZERO_PROB = 0.55
MAX_ATTEMPTS = 10_000

CASES = ("nonsingular", "two-nonzero-b", "random-rank", "a1", "a2", "a3", "a4", "a5", "ek")
MIN_N = {
    "nonsingular": 1,
    "two-nonzero-b": 3,
    "random-rank": 1,
    "a1": 3,
    "a2": 4,
    "a3": 2,
    "a4": 3,
    "a5": 2,
    "ek": 1,
}


@dataclass(frozen=True)
class GeneratedInstance:
    algebra: EvolutionAlgebra
    case: str
    n: int
    seed: int
    params: Dict[str, object] = field(default_factory=dict)
    perm: Tuple[int, ...] = ()
    generator: str = GENERATOR_ID


def _pick(rng: random.Random) -> GaussianRational:
    return rng.choice(POOL)


def _sparse(rng: random.Random) -> GaussianRational:
    return ZERO if rng.random() < SPARSE_ZERO_PROB else _pick(rng)


def _zeros(n: int) -> List[list]:
    return [[ZERO] * n for _ in range(n)]


def _invertible(rng: random.Random, size: int) -> List[list]:
    for _ in range(MAX_ATTEMPTS):
        block = [[_sparse(rng) for _ in range(size)] for _ in range(size)]
        if linalg.rank(block) == size:
            return block
    raise RuntimeError("could not draw an invertible block")  # pragma: no cover


def _nonsingular(rng, n, params):
    for _ in range(MAX_ATTEMPTS):
        A = [[_sparse(rng) for _ in range(n)] for _ in range(n)]
        if linalg.rank(A) == n:
            return A
    raise RuntimeError("could not draw a nonsingular matrix")  # pragma: no cover


def _two_nonzero_b(rng, n, params):
    rows = _invertible(rng, n)[: n - 1]
    # n-1 rows of an invertible matrix are independent
    support = rng.sample(range(n - 1), rng.randint(2, n - 1))
    b = [ZERO] * (n - 1)
    for k in support:
        b[k] = _pick(rng)
    last = [ZERO] * n
    for k in support:
        last = [x + b[k] * y for x, y in zip(last, rows[k])]
    params["b"] = tuple(b)
    return rows + [last]


def _random_rank(rng, n, params):
    r = params.get("rank")
    if r is None:
        r = n - 1
        params["rank"] = r
    if not 0 <= r <= n:
        raise UnsupportedCase(f"rank {r} outside 0..{n}")
    for _ in range(MAX_ATTEMPTS):
        if r >= n - 1:
            A = [[_sparse(rng) for _ in range(n)] for _ in range(n)]
        else:
            left = [[_sparse(rng) for _ in range(r)] for _ in range(n)]
            right = [[_sparse(rng) for _ in range(n)] for _ in range(r)]
            A = linalg.matmul(left, right) if r else _zeros(n)
        if linalg.rank(A) == r:
            return A
    raise RuntimeError(f"could not draw a rank-{r} matrix")  # pragma: no cover


def _rho_and_b(rng, params):
    rho = _pick(rng)
    b = -rho * rho
    params["rho"], params["b"] = rho, b
    return rho, b


def _a1(rng, n, params):
    s = params.get("k")
    if s is None:
        s = rng.randint(1, n - 2)
    if not 1 <= s <= n - 2:
        raise UnsupportedCase(f"a1 needs 1 <= s <= n-2, got s={s}")
    params["s"] = s
    params.pop("k", None)
    rho, b = _rho_and_b(rng, params)
    A = _zeros(n)
    c1 = _pick(rng)
    A[0][s] = c1
    block = _invertible(rng, s - 1)
    for i in range(s - 1):
        for j in range(s - 1):
            A[1 + i][1 + j] = block[i][j]
    for i in range(s, n - 2):
        A[i][i + 1] = _pick(rng)
    c = _pick(rng)
    A[n - 2][n - 1] = c
    A[n - 2][0] = rho * c
    A[n - 1][s] = b * c1
    return A


def _a2(rng, n, params):
    k, m = params.get("k"), params.get("m")
    if k is None:
        k = rng.randint(2, n - 2)
    if m is None:
        m = rng.randint(k + 1, n - 1) if k + 1 <= n - 1 else k + 1
    if not 2 <= k < m <= n - 1:
        raise UnsupportedCase(f"a2 needs 2 <= k < m <= n-1, got k={k}, m={m}")
    params["k"], params["m"] = k, m
    rho, b = _rho_and_b(rng, params)
    A = _zeros(n)
    c1 = _pick(rng)
    A[0][k] = c1
    for i in range(2, k):
        A[i - 1][i] = _pick(rng)
    c = _pick(rng)
    A[k - 1][n - 1], A[k - 1][0] = c, -rho * c
    for i in range(k + 1, m):
        A[i - 1][i] = _pick(rng)
    c = _pick(rng)
    A[m - 1][n - 1], A[m - 1][0] = c, rho * c
    block = _invertible(rng, n - 1 - m)
    for i in range(n - 1 - m):
        for j in range(n - 1 - m):
            A[m + i][m + j] = block[i][j]
    A[n - 1][k] = b * c1
    return A


def _a3(rng, n, params):
    rho, b = _rho_and_b(rng, params)
    params["s"] = n - 1
    A = _zeros(n)
    c = _pick(rng)
    A[0][0], A[0][n - 1] = rho * c, c
    block = _invertible(rng, n - 2)
    for i in range(1, n - 1):
        for j in range(1, n - 1):
            A[i][j] = block[i - 1][j - 1]
        x = _sparse(rng)
        A[i][n - 1], A[i][0] = x, -rho * x
    A[n - 1] = [b * x for x in A[0]]
    return A


def _a4(rng, n, params):
    # leading block of rank n-2 with no zero entries, so no chain layout fits
    for _ in range(MAX_ATTEMPTS):
        head = [[_pick(rng) for _ in range(n - 1)] for _ in range(n - 2)]
        coeffs = [_sparse(rng) for _ in range(n - 2)]
        last = [ZERO] * (n - 1)
        for c, row in zip(coeffs, head):
            last = [x + c * y for x, y in zip(last, row)]
        B = head + [last]
        if any(not x for row in B for x in row) or linalg.rank(B) != n - 2:
            continue
        col = [_sparse(rng) for _ in range(n - 1)]
        A = [B[i] + [col[i]] for i in range(n - 1)] + [[ZERO] * n]
        if linalg.rank(A) == n - 1:
            return A
    raise RuntimeError("could not draw an a4 instance")  # pragma: no cover


def _a5(rng, n, params):
    k = params.get("k")
    if k is None:
        k = rng.randint(1, n - 2) if n >= 3 else 0
    if not 0 <= k <= n - 1:
        raise UnsupportedCase(f"a5 needs 0 <= k <= n-1, got k={k}")
    params["k"] = k
    A = _zeros(n)
    block = _invertible(rng, k)
    for i in range(k):
        for j in range(k):
            A[i][j] = block[i][j]
        A[i][n - 1] = _sparse(rng)
    if k == n - 1:
        return A
    for i in range(k, n - 2):
        A[i][i + 1] = _pick(rng)
        A[i][n - 1] = _sparse(rng)
    A[n - 2][n - 1] = _pick(rng)
    return A


def _ek(rng, n, params):
    k = params.get("k")
    if k is None:
        k = rng.randint(0, n)
    if not 0 <= k <= n:
        raise UnsupportedCase(f"ek needs 0 <= k <= n, got k={k}")
    params["k"] = k
    A = _zeros(n)
    for i in range(k):
        A[i][i] = _pick(rng)
        for j in range(i + 1, k):
            A[i][j] = _sparse(rng)
    return A


_BUILDERS: Dict[str, Callable] = {
    "nonsingular": _nonsingular,
    "two-nonzero-b": _two_nonzero_b,
    "random-rank": _random_rank,
    "a1": _a1,
    "a2": _a2,
    "a3": _a3,
    "a4": _a4,
    "a5": _a5,
    "ek": _ek,
}


def _normalize_case(case: str, params: dict) -> str:
    case = case.lower()
    if case.startswith("random-rank-"):
        params["rank"] = int(case.rsplit("-", 1)[1])
        return "random-rank"
    return case


def generate(
    case: str,
    n: int,
    seed: int,
    k: Optional[int] = None,
    rank: Optional[int] = None,
    m: Optional[int] = None,
) -> GeneratedInstance:
    """Draw a seeded instance of ``case`` and relabel it by a random permutation.

    ``k`` is the form parameter (``s`` for a1, ``k`` for a2, a5 and ek),
    ``m`` the second a2 parameter and ``rank`` the target for random-rank.
    """
    params: Dict[str, object] = {}
    if k is not None:
        params["k"] = k
    if m is not None:
        params["m"] = m
    if rank is not None:
        params["rank"] = rank
    name = _normalize_case(case, params)
    if name not in _BUILDERS:
        raise UnsupportedCase(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    if n < MIN_N[name]:
        raise DimensionTooSmall(f"case {name} needs n >= {MIN_N[name]}, got {n}")
    rng = random.Random(seed)
    A = _BUILDERS[name](rng, n, params)
    perm = list(range(n))
    rng.shuffle(perm)
    E = EvolutionAlgebra(A).permuted(perm)
    return GeneratedInstance(E, name, n, seed, params, tuple(perm))


def gen_instance(case: str, n: int, seed: int, k: Optional[int] = None) -> EvolutionAlgebra:
    return generate(case, n, seed, k=k).algebra
