from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evoder.errors import MalformedScalar, RadicandMismatch
from evoder.field import (
    I,
    ONE,
    ZERO,
    GaussianRational,
    QuadExtScalar,
    as_gaussian,
    format_scalar,
    gr_arith,
    gr_sqrt,
    parse_scalar,
    qe_arith,
    rational_sqrt,
)
from helpers import gaussians, nonzero_gaussians

G = GaussianRational


# -- Gaussian rationals ---------------------------------------------------------


def test_worked_examples():
    assert gr_arith(G(1, 1), G(1, 1), "div") == ONE
    assert gr_arith(G(1, 1), G(1, -1), "mul") == G(2)
    third, half = Fraction(1, 3), Fraction(1, 2)
    assert gr_arith(G(half, third), G(third, half), "add") == G(Fraction(5, 6), Fraction(5, 6))


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_unknown_op():
    with pytest.raises(ValueError):
        gr_arith(ONE, ONE, "pow")


def test_mixed_int_and_fraction_operands():
    assert 2 * I == G(0, 2)
    assert I * I == -1
    assert 1 - I == G(1, -1)
    assert Fraction(1, 2) + I == G(Fraction(1, 2), 1)
    assert 1 / G(0, 2) == G(0, Fraction(-1, 2))


def test_equality_and_hash_agree_with_ints():
    assert G(3) == 3 and hash(G(3)) == hash(3)
    assert G(Fraction(1, 2)) == Fraction(1, 2)
    assert len({G(1), ONE, G(Fraction(2, 2))}) == 1


def test_complex_inputs_rejected():
    with pytest.raises(TypeError):
        as_gaussian(1 + 2j)


@settings(max_examples=1000)
@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a + (-a) == ZERO
    if a:
        assert a * (ONE / a) == ONE


@given(nonzero_gaussians, st.integers(-4, 4))
def test_integer_powers(a, k):
    expected = ONE
    for _ in range(abs(k)):
        expected = expected * a
    if k < 0:
        expected = ONE / expected
    assert a ** k == expected


@given(gaussians)
def test_conjugate_norm(a):
    assert a * a.conjugate() == G(a.norm())


# -- square roots ---------------------------------------------------------------


def test_sqrt_examples():
    assert gr_sqrt(-1) == I
    assert gr_sqrt(G(0, 2)) == G(1, 1)
    assert gr_sqrt(-2) is None
    assert gr_sqrt(0) == ZERO
    assert gr_sqrt(Fraction(9, 4)) == G(Fraction(3, 2))


def test_rational_sqrt():
    assert rational_sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert rational_sqrt(2) is None
    assert rational_sqrt(-4) is None


@given(gaussians)
def test_sqrt_of_square_is_a_root(a):
    root = gr_sqrt(a * a)
    assert root is not None
    assert root * root == a * a
    assert root in (a, -a)


# -- quadratic extensions -------------------------------------------------------


def test_quad_ext_examples():
    r = QuadExtScalar.sqrt(-5)
    assert r * r == -5
    one = QuadExtScalar(1, 0, -5)
    assert (one + r) / (one + r) == 1
    assert (one + r) * (one - r) == 6


def test_quad_ext_collapses_on_square_radicand():
    x = QuadExtScalar(1, 1, 4)
    assert x.is_rational() and x == 3
    assert QuadExtScalar.sqrt(-1).to_gaussian() == I


def test_radicand_mismatch():
    with pytest.raises(RadicandMismatch):
        QuadExtScalar.sqrt(2) + QuadExtScalar.sqrt(3)


def test_quad_ext_mixes_with_gaussians():
    r = QuadExtScalar.sqrt(2)
    assert (I * r) * r == G(0, 2)
    assert (r + I) - I == r
    assert qe_arith(r, r, "mul") == 2


quad_ext = st.builds(lambda a, b: QuadExtScalar(a, b, 3), gaussians, gaussians)


@given(quad_ext, quad_ext, quad_ext)
def test_quad_ext_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    if b:
        assert (a / b) * b == a


@given(quad_ext)
def test_galois_norm_is_in_base_field(a):
    assert (a * a.conjugate_radical()).is_rational()


# -- text grammar ---------------------------------------------------------------


@pytest.mark.parametrize(
    "text, value",
    [
        ("3", G(3)),
        ("-1/2", G(Fraction(-1, 2))),
        ("1/2+3/4i", G(Fraction(1, 2), Fraction(3, 4))),
        ("-1i", G(0, -1)),
        ("2-1/3i", G(2, Fraction(-1, 3))),
    ],
)
def test_parse(text, value):
    assert parse_scalar(text) == value
    assert format_scalar(value) == text


@pytest.mark.parametrize("text", ["", "i", "1.5", "1/0", "1+-2i", "2 + i", "abc", "1//2"])
def test_parse_rejects(text):
    with pytest.raises(MalformedScalar):
        parse_scalar(text)


def test_parse_rejects_non_string():
    with pytest.raises(MalformedScalar):
        parse_scalar(3)


@given(gaussians)
def test_format_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a
