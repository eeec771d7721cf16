"""Canonical forms of evolution algebras under natural-basis permutation.

Every form is a template of entry requirements (forced zero, forced nonzero,
unconstrained) plus exact side conditions checked on the permuted matrix.
Templates are searched over basis permutations by backtracking in
lexicographic order, so the reported permutation is the lexicographically
smallest witness. Positions that the template treats interchangeably are
filled in increasing order only.

Rank n-1 forms with a single nonzero b-coefficient (``e_n e_n = b e_1 e_1``)
carry the ratio ``rho = a_i1 / a_in`` read off a row touching columns 1 and n;
a nonzero derivation exists only when ``rho**2 == -b``, and then the family
parameter ``delta = rho * d_1n``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .algebra import EvolutionAlgebra, normalize_dependent_row, rank, validate_perm
from .derivations import DerivationSpace, flatten, is_derivation
from .errors import ExplicitLimit, PatternMismatch
from .field import ONE, ZERO, GaussianRational, QuadExtScalar

DEFAULT_MAX_N = 8

ZR, NZ, FR = 0, 1, 2  # entry requirements: zero, nonzero, free


class Tag(str, Enum):
    NONSINGULAR_ZERO = "NonsingularZero"
    RANK_N1_TWO_NONZERO_B = "RankN1TwoNonzeroB"
    FORM_A1 = "FormA1"
    FORM_A2 = "FormA2"
    FORM_A3 = "FormA3"
    FORM_A4 = "FormA4"
    FORM_A5 = "FormA5"
    TRIANGULAR_EK = "TriangularEk"
    GENERIC_RANK_DEFICIENT = "GenericRankDeficient"

    def __str__(self) -> str:
        return self.value


A_FORMS = frozenset({Tag.FORM_A1, Tag.FORM_A2, Tag.FORM_A3, Tag.FORM_A4, Tag.FORM_A5})
EMPTY_FAMILY_TAGS = frozenset(
    {Tag.NONSINGULAR_ZERO, Tag.RANK_N1_TWO_NONZERO_B, Tag.GENERIC_RANK_DEFICIENT}
)


@dataclass(frozen=True)
class ClassificationResult:
    tag: Tag
    perm: Tuple[int, ...]
    params: Dict[str, object] = field(default_factory=dict)
    rank: Optional[int] = None
    alternatives: Tuple["ClassificationResult", ...] = ()

    def tags(self) -> List[Tag]:
        return [self.tag] + [alt.tag for alt in self.alternatives]

    def find(self, tag: Tag) -> Optional["ClassificationResult"]:
        for res in (self,) + self.alternatives:
            if res.tag == tag:
                return res
        return None

    def matched_a_form(self) -> bool:
        return any(t in A_FORMS for t in self.tags())


def max_search_n() -> int:
    value = os.environ.get("EVODER_MAX_N")
    return int(value) if value else DEFAULT_MAX_N


# -- templates ------------------------------------------------------------------


@dataclass
class Template:
    """Entry requirements for the permuted matrix plus a side-condition hook."""

    req: List[List[int]]
    side: Callable[[List[list]], Optional[dict]]

    @property
    def n(self) -> int:
        return len(self.req)


def _blank(n: int) -> List[List[int]]:
    return [[ZR] * n for _ in range(n)]


def _template_a1(n: int, s: int) -> Template:
    # 0-based: row 0 -> col s; block rows 1..s-1; chain rows s..n-3; row n-2 -> cols 0, n-1
    req = _blank(n)
    req[0][s] = NZ
    for i in range(1, s):
        for j in range(1, s):
            req[i][j] = FR
    for i in range(s, n - 2):
        req[i][i + 1] = NZ
    req[n - 2][0] = req[n - 2][n - 1] = NZ
    req[n - 1][s] = NZ

    def side(A):
        b = A[n - 1][s] / A[0][s]
        rho = A[n - 2][0] / A[n - 2][n - 1]
        if rho * rho != -b:
            return None
        if s > 1 and not linalg.det([row[1:s] for row in A[1:s]]):
            return None
        return {"s": s, "b": b, "rho": rho}

    return Template(req, side)


def _template_a2(n: int, k: int, m: int) -> Template:
    # 1-based k, m as in the displayed form; row 1 -> col k+1, beta-row k, alpha-row m
    req = _blank(n)
    req[0][k] = NZ
    for i in range(2, k):
        req[i - 1][i] = NZ
    req[k - 1][0] = req[k - 1][n - 1] = NZ
    for i in range(k + 1, m):
        req[i - 1][i] = NZ
    req[m - 1][0] = req[m - 1][n - 1] = NZ
    for i in range(m, n - 1):
        for j in range(m, n - 1):
            req[i][j] = FR
    req[n - 1][k] = NZ

    def side(A):
        b = A[n - 1][k] / A[0][k]
        rho = A[m - 1][0] / A[m - 1][n - 1]
        if rho * rho != -b:
            return None
        if A[k - 1][0] / A[k - 1][n - 1] != -rho:
            return None
        if m < n - 1 and not linalg.det([row[m:n - 1] for row in A[m:n - 1]]):
            return None
        return {"k": k, "m": m, "b": b, "rho": rho}

    return Template(req, side)


def _template_a3(n: int) -> Template:
    req = _blank(n)
    req[0][0] = req[0][n - 1] = NZ
    for i in range(1, n - 1):
        for j in range(n):
            req[i][j] = FR
    req[n - 1][0] = req[n - 1][n - 1] = NZ

    def side(A):
        b = A[n - 1][0] / A[0][0]
        if A[n - 1][n - 1] != b * A[0][n - 1]:
            return None
        rho = A[0][0] / A[0][n - 1]
        if rho * rho != -b:
            return None
        for i in range(1, n - 1):
            if A[i][0] != -rho * A[i][n - 1]:
                return None
        if linalg.rank(A) != n - 1:
            return None
        return {"s": n - 1, "b": b, "rho": rho}

    return Template(req, side)


def _template_a4(n: int) -> Template:
    req = _blank(n)
    for i in range(n - 1):
        for j in range(n):
            req[i][j] = FR

    def side(A):
        if linalg.rank(A) != n - 1:
            return None
        kernel = linalg.nullspace([row[:n - 1] for row in A[:n - 1]], n - 1)
        if not kernel:
            return None
        return {"kernel": tuple(kernel[0])}

    return Template(req, side)


def _template_a5(n: int, k: int) -> Template:
    # k zero-diagonal block indices first; chain k+1..n-2 (1-based); row n-1 -> col n
    req = _blank(n)
    if k == n - 1:
        for i in range(n - 1):
            for j in range(n):
                req[i][j] = FR
    else:
        for i in range(k):
            for j in range(k):
                req[i][j] = FR
            req[i][n - 1] = FR
        for i in range(k, n - 2):
            req[i][i + 1] = NZ
            req[i][n - 1] = FR
        req[n - 2][n - 1] = NZ

    def side(A):
        if not linalg.det([row[:k] for row in A[:k]]):
            return None
        return {"k": k}

    return Template(req, side)


def _template_ek(n: int, k: int) -> Template:
    req = _blank(n)
    for i in range(k):
        req[i][i] = NZ
        for j in range(i + 1, k):
            req[i][j] = FR
    return Template(req, lambda A: {"k": k})


# -- permutation search ---------------------------------------------------------


def _symmetric_runs(req: List[List[int]]) -> List[int]:
    """``prev_same[p]`` is True when positions p-1 and p are interchangeable."""
    n = len(req)
    out = [False] * n
    for p in range(1, n):
        q = p - 1
        ok = req[p][p] == req[q][q] and req[p][q] == req[q][p]
        if ok:
            for x in range(n):
                if x in (p, q):
                    continue
                if req[p][x] != req[q][x] or req[x][p] != req[x][q]:
                    ok = False
                    break
        out[p] = ok
    return out


def _permuted(A, perm) -> List[list]:
    return [[A[p][q] for q in perm] for p in perm]


def search(E: EvolutionAlgebra, template: Template) -> Optional[Tuple[Tuple[int, ...], dict]]:
    """Lexicographically smallest permutation satisfying ``template`` on ``E``."""
    for perm, params in _iter_matches(E, template):
        return perm, params
    return None


def _iter_matches(E: EvolutionAlgebra, template: Template) -> Iterator[Tuple[Tuple[int, ...], dict]]:
    n = E.n
    req = template.req
    if template.n != n:
        return
    nz = [[bool(x) for x in row] for row in E.A]
    row_cnt = [sum(r) for r in nz]
    col_cnt = [sum(nz[i][j] for i in range(n)) for j in range(n)]
    candidates = []
    for pos in range(n):
        rmin = sum(1 for x in req[pos] if x == NZ)
        rmax = sum(1 for x in req[pos] if x != ZR)
        col = [req[i][pos] for i in range(n)]
        cmin = sum(1 for x in col if x == NZ)
        cmax = sum(1 for x in col if x != ZR)
        d = req[pos][pos]
        cands = [
            o
            for o in range(n)
            if rmin <= row_cnt[o] <= rmax
            and cmin <= col_cnt[o] <= cmax
            and (d == FR or nz[o][o] == (d == NZ))
        ]
        if not cands:
            return
        candidates.append(cands)
    same_as_prev = _symmetric_runs(req)
    perm: List[int] = []
    used = [False] * n

    def fits(pos: int, o: int) -> bool:
        for q in range(pos):
            oq = perm[q]
            r = req[pos][q]
            if r != FR and nz[o][oq] != (r == NZ):
                return False
            r = req[q][pos]
            if r != FR and nz[oq][o] != (r == NZ):
                return False
        return True

    def dfs(pos: int):
        if pos == n:
            params = template.side(_permuted(E.A, perm))
            if params is not None:
                yield tuple(perm), params
            return
        lower = perm[pos - 1] if pos and same_as_prev[pos] else -1
        for o in candidates[pos]:
            if used[o] or o <= lower or not fits(pos, o):
                continue
            used[o] = True
            perm.append(o)
            yield from dfs(pos + 1)
            perm.pop()
            used[o] = False

    yield from dfs(0)


def _templates_for(tag: Tag, n: int) -> Iterator[Template]:
    if tag == Tag.FORM_A1:
        for s in range(1, n - 1):
            yield _template_a1(n, s)
    elif tag == Tag.FORM_A2:
        for k in range(2, n - 1):
            for m in range(k + 1, n):
                yield _template_a2(n, k, m)
    elif tag == Tag.FORM_A3:
        if n >= 2:
            yield _template_a3(n)
    elif tag == Tag.FORM_A4:
        if n >= 2:
            yield _template_a4(n)
    elif tag == Tag.FORM_A5:
        for k in range(0, n):
            yield _template_a5(n, k)


def _match_form(E: EvolutionAlgebra, tag: Tag) -> Optional[ClassificationResult]:
    for template in _templates_for(tag, E.n):
        hit = search(E, template)
        if hit is not None:
            perm, params = hit
            return ClassificationResult(tag=tag, perm=perm, params=params)
    return None


def match_triangular(E: EvolutionAlgebra) -> Optional[ClassificationResult]:
    k = sum(1 for row in E.A if any(row))
    hit = search(E, _template_ek(E.n, k))
    if hit is None:
        return None
    return ClassificationResult(tag=Tag.TRIANGULAR_EK, perm=hit[0], params=hit[1])


def classify(E: EvolutionAlgebra, max_n: Optional[int] = None) -> ClassificationResult:
    """Decide which canonical situation ``E`` occupies up to basis permutation.

    The rank decides the primary tag. The triangular family is tested
    independently; it becomes the primary tag only when the rank cascade finds
    nothing, and is otherwise listed among ``alternatives``.
    """
    n = E.n
    cap = max_search_n() if max_n is None else max_n
    if n > cap:
        raise ExplicitLimit(f"n={n} exceeds the permutation-search cap {cap} (EVODER_MAX_N)")
    r = rank(E)
    identity = tuple(range(n))
    primary: Optional[ClassificationResult] = None
    if r == n:
        primary = ClassificationResult(Tag.NONSINGULAR_ZERO, identity)
    elif r == n - 1:
        bvec = normalize_dependent_row(E)
        nonzero = bvec.nonzero
        if len(nonzero) >= 2:
            primary = ClassificationResult(
                Tag.RANK_N1_TWO_NONZERO_B, bvec.perm, {"b": bvec.coeffs}
            )
        elif len(nonzero) == 1:
            order = (Tag.FORM_A2, Tag.FORM_A1, Tag.FORM_A3)
        else:
            order = (Tag.FORM_A5, Tag.FORM_A4)
        if primary is None:
            for tag in order:
                primary = _match_form(E, tag)
                if primary is not None:
                    break
    ek = match_triangular(E)
    if primary is None:
        primary = ek or ClassificationResult(Tag.GENERIC_RANK_DEFICIENT, identity)
        alternatives = ()
    else:
        alternatives = (ek,) if ek is not None else ()
    return ClassificationResult(
        tag=primary.tag,
        perm=primary.perm,
        params=primary.params,
        rank=r,
        alternatives=alternatives,
    )


# -- closed-form families -------------------------------------------------------


@dataclass(frozen=True)
class ClosedFormFamily:
    """Generators of a closed-form derivation family, in the algebra's own basis."""

    tag: Tag
    generators: Tuple[Tuple[tuple, ...], ...]
    free_parameter_description: str


def _zeros(n: int) -> List[list]:
    return [[ZERO] * n for _ in range(n)]


def _unpermute(d: List[list], perm: Sequence[int]) -> Tuple[tuple, ...]:
    n = len(perm)
    out = _zeros(n)
    for i in range(n):
        for j in range(n):
            out[perm[i]][perm[j]] = d[i][j]
    return tuple(tuple(row) for row in out)


def delta_candidates(b: GaussianRational) -> Tuple[QuadExtScalar, QuadExtScalar]:
    """The two square roots of ``-b``, in Q(i) when possible and in Q(i)(sqrt(-b)) otherwise."""
    root = QuadExtScalar.sqrt(-b)
    return root, -root


def _select_delta(b: GaussianRational, rho: GaussianRational):
    for cand in delta_candidates(b):
        if cand == rho:
            return cand.to_gaussian()
    raise PatternMismatch(f"no square root of {-b} matches the row ratio {rho}")


def _check_match(E: EvolutionAlgebra, res: ClassificationResult) -> List[list]:
    n = E.n
    perm = validate_perm(res.perm, n)
    Ap = _permuted(E.A, perm)
    template = _template_for_result(res, n)
    if template is None:
        return Ap
    for i in range(n):
        for j in range(n):
            r = template.req[i][j]
            if r != FR and bool(Ap[i][j]) != (r == NZ):
                raise PatternMismatch(f"{res.tag} does not fit entry ({i}, {j}) under {perm}")
    found = template.side(Ap)
    if found is None:
        raise PatternMismatch(f"{res.tag} side conditions fail under {perm}")
    if any(found[key] != res.params[key] for key in found if key in res.params):
        raise PatternMismatch(f"{res.tag} parameters {res.params} disagree with {found}")
    return Ap


def _template_for_result(res: ClassificationResult, n: int) -> Optional[Template]:
    p = res.params
    if res.tag == Tag.FORM_A1:
        return _template_a1(n, p["s"])
    if res.tag == Tag.FORM_A2:
        return _template_a2(n, p["k"], p["m"])
    if res.tag == Tag.FORM_A3:
        return _template_a3(n)
    if res.tag == Tag.FORM_A4:
        return _template_a4(n)
    if res.tag == Tag.FORM_A5:
        return _template_a5(n, p["k"])
    if res.tag == Tag.TRIANGULAR_EK:
        return _template_ek(n, p["k"])
    return None


def emit_closed_forms(res: ClassificationResult, E: EvolutionAlgebra) -> ClosedFormFamily:
    """Instantiate the derivation family attached to ``res`` with free parameters set to 1."""
    n = E.n
    tag = res.tag
    if tag in EMPTY_FAMILY_TAGS:
        return ClosedFormFamily(tag, (), "none: the derivation algebra has no closed form here")
    A = _check_match(E, res)
    p = res.params
    gens: List[List[list]] = []
    if tag in (Tag.FORM_A1, Tag.FORM_A2, Tag.FORM_A3):
        b, rho = p["b"], p["rho"]
        delta = _select_delta(b, rho)
        d = _zeros(n)
        if tag == Tag.FORM_A1:
            s = p["s"]
            d1 = delta / (2 ** (n - s) - 1)
            for i in range(s + 1, n):  # 1-based chain s+1..n-1
                d[i - 1][i - 1] = d1 * 2 ** (i - s)
            desc = "d_1n; d_11 = delta/(2^(n-s)-1) with delta = rho*d_1n, rho^2 = -b"
        elif tag == Tag.FORM_A2:
            k, m = p["k"], p["m"]
            d1 = delta / (2 ** (m - k + 1) - 1)
            for i in range(k + 1, m + 1):
                d[i - 1][i - 1] = d1 * 2 ** (i - k)
            dk = (d1 - delta) / 2
            for i in range(2, k + 1):
                d[i - 1][i - 1] = dk / 2 ** (k - i)
            desc = (
                "d_1n; d_11 = delta/(2^(m-k+1)-1), d_22 = (1-2^(m-k))/2^(k-2) d_11, "
                "delta = rho*d_1n"
            )
        else:
            d1 = delta
            desc = "d_1n; d_11 = d_nn = delta = rho*d_1n"
        d[0][0] = d1
        d[n - 1][n - 1] = d1
        d[0][n - 1] = ONE
        d[n - 1][0] = -b
        gens.append(d)
    elif tag == Tag.FORM_A4:
        d = _zeros(n)
        for i, c in enumerate(p["kernel"]):
            d[i][n - 1] = c
        gens.append(d)
        desc = "scale of the last column, a kernel vector of the leading (n-1)x(n-1) block"
    elif tag == Tag.FORM_A5:
        k = p["k"]
        d = _zeros(n)
        d[n - 1][n - 1] = ONE
        for i in range(k + 1, n):  # 1-based i = k+1..n-1
            d[i - 1][i - 1] = GaussianRational(1) / 2 ** (n - i)
        for i in range(k + 1, n - 1):  # d_{i+1,n} from row i of the chain
            factor = GaussianRational(1) / 2 ** (n - i - 1) - 1
            d[i][n - 1] = A[i - 1][n - 1] / A[i - 1][i] * factor
        if k:
            rhs = [-A[i][n - 1] for i in range(k)]
            head = linalg.solve([row[:k] for row in A[:k]], rhs)
            for i in range(k):
                d[i][n - 1] = head[i]
        gens.append(d)
        desc = "d_nn"
        if k < n - 1:
            free = _zeros(n)
            free[k][n - 1] = ONE
            gens.append(free)
            desc = "d_nn and d_{k+1,n}"
    elif tag == Tag.TRIANGULAR_EK:
        k = p["k"]
        for i in range(k, n):
            for j in range(k, n):
                unit = _zeros(n)
                unit[i][j] = ONE
                gens.append(unit)
        desc = f"the free lower-right {n - k}x{n - k} block"
    else:  # pragma: no cover
        raise PatternMismatch(f"no closed form for {tag}")
    return ClosedFormFamily(tag, tuple(_unpermute(g, res.perm) for g in gens), desc)


@dataclass
class VerificationReport:
    leibniz: List[bool]
    family_dim: int
    solver_dim: int
    span_equal: bool

    @property
    def leibniz_ok(self) -> bool:
        return all(self.leibniz)

    @property
    def ok(self) -> bool:
        return self.leibniz_ok and self.span_equal

    def to_dict(self) -> dict:
        return {
            "leibniz": self.leibniz,
            "leibniz_ok": self.leibniz_ok,
            "family_dim": self.family_dim,
            "solver_dim": self.solver_dim,
            "span_equal": self.span_equal,
            "ok": self.ok,
        }


def rationalize(generator: Sequence[Sequence]) -> List[List[list]]:
    """Split a generator over Q(i)(sqrt m) into its rational and radical parts.

    For a conjugate pair g(+delta), g(-delta) these are (g+ + g-)/2 and
    (g+ - g-)/(2 sqrt m), both with entries in Q(i).
    """
    base, radical = [], []
    has_radical = False
    for row in generator:
        brow, rrow = [], []
        for x in row:
            if isinstance(x, QuadExtScalar):
                brow.append(x.base)
                rrow.append(x.radical_coeff)
                has_radical = has_radical or bool(x.radical_coeff)
            else:
                brow.append(x)
                rrow.append(ZERO)
        base.append(brow)
        radical.append(rrow)
    return [base, radical] if has_radical else [base]


def verify_closed_forms(
    E: EvolutionAlgebra, fam: ClosedFormFamily, space: DerivationSpace
) -> VerificationReport:
    """Check each generator is a derivation and that the family spans the solver's nullspace."""
    leibniz = [is_derivation(E, g) for g in fam.generators]
    rational = [flatten(part) for g in fam.generators for part in rationalize(g)]
    solver = space.vectors()
    r_family = linalg.rank(rational) if rational else 0
    r_solver = linalg.rank(solver) if solver else 0
    r_joint = linalg.rank(rational + solver) if rational or solver else 0
    return VerificationReport(
        leibniz=leibniz,
        family_dim=r_family,
        solver_dim=space.dim,
        span_equal=r_family == r_solver == r_joint == space.dim,
    )
