"""Shared strategies and an independent oracle for the test suite."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from evoder import EvolutionAlgebra, GaussianRational

small_fractions = st.fractions(min_value=-6, max_value=6, max_denominator=6)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)
nonzero_gaussians = gaussians.filter(bool)

# entries drawn sparsely so rank-deficient shapes show up often
SPARSE_POOL = [GaussianRational(v) for v in (0, 0, 0, 1, -1, 2)] + [
    GaussianRational(0, 1),
    GaussianRational(0, -1),
    GaussianRational(1, 1),
]


@st.composite
def algebras(draw, min_n=1, max_n=4, entries=None):
    n = draw(st.integers(min_n, max_n))
    if entries is None:
        entries = st.sampled_from(SPARSE_POOL)
    rows = [[draw(entries) for _ in range(n)] for _ in range(n)]
    return EvolutionAlgebra(rows)


def to_sympy(x):
    x = GaussianRational(0) + x
    return sympy.Rational(x.re.numerator, x.re.denominator) + sympy.I * sympy.Rational(
        x.im.numerator, x.im.denominator
    )


def from_sympy(v):
    re, im = sympy.re(v), sympy.im(v)
    return GaussianRational(Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q)))


def oracle_derivation_dim(E: EvolutionAlgebra) -> int:
    """Dimension of Der(E) from the derivation identity, built symbolically in sympy.

    Unknown map ``d`` sends ``e_p`` to ``sum_q x[p][q] e_q``; the identity
    ``d(e_i e_j) = d(e_i) e_j + e_i d(e_j)`` is imposed for every pair.
    """
    n = E.n
    A = sympy.Matrix([[to_sympy(x) for x in row] for row in E.A])
    x = sympy.symbols(f"x0:{n * n}")
    D = sympy.Matrix(n, n, x)

    def mul(u, v):
        return sum((u[i] * v[i] * A.row(i) for i in range(n)), sympy.zeros(1, n))

    def image(u):
        return u * D

    basis = [sympy.eye(n).row(i) for i in range(n)]
    eqs = []
    for i in range(n):
        for j in range(i, n):
            lhs = image(mul(basis[i], basis[j]))
            rhs = mul(image(basis[i]), basis[j]) + mul(basis[i], image(basis[j]))
            eqs.extend(sympy.expand(lhs - rhs))
    eqs = [e for e in eqs if e != 0]
    if not eqs:
        return n * n
    M, _ = sympy.linear_eq_to_matrix(eqs, x)
    return n * n - M.rank()
