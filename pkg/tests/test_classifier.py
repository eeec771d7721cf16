import itertools

import pytest
from hypothesis import given, settings

from evoder import EvolutionAlgebra
from evoder.classifier import (
    A_FORMS,
    ClassificationResult,
    Tag,
    classify,
    delta_candidates,
    emit_closed_forms,
    rationalize,
    verify_closed_forms,
)
from evoder.derivations import derivations, is_derivation
from evoder.errors import ExplicitLimit, PatternMismatch
from evoder.field import ONE, ZERO, GaussianRational, QuadExtScalar
from helpers import algebras

G = GaussianRational

CHAIN_A1 = [[0, 1, 0], [1, 0, 1], [0, -1, 0]]


def family_ok(E, res):
    space = derivations(E)
    return verify_closed_forms(E, emit_closed_forms(res, E), space)


# -- tags on worked examples ----------------------------------------------------


def test_nonsingular():
    res = classify(EvolutionAlgebra([[1, 2], [3, 4]]))
    assert res.tag == Tag.NONSINGULAR_ZERO and res.rank == 2


def test_two_nonzero_b():
    res = classify(EvolutionAlgebra([[1, 0, 0], [0, 1, 0], [1, 1, 0]]))
    assert res.tag == Tag.RANK_N1_TWO_NONZERO_B
    assert res.params["b"] == (1, 1)


def test_a1_chain_example():
    E = EvolutionAlgebra(CHAIN_A1)
    res = classify(E)
    assert res.tag == Tag.FORM_A1
    assert res.params["s"] == 1 and res.params["b"] == -1
    assert res.perm == (0, 1, 2)


def test_a5_example():
    res = classify(EvolutionAlgebra([[1, 0, 0], [0, 0, 1], [0, 0, 0]]))
    assert res.tag == Tag.FORM_A5 and res.params["k"] == 1


def test_a4_example():
    E = EvolutionAlgebra([[1, 2, 0], [2, 4, 1], [0, 0, 0]])
    res = classify(E)
    assert res.tag == Tag.FORM_A4
    fam = emit_closed_forms(res, E)
    (gen,) = fam.generators
    last = [row[2] for row in gen]
    # kernel of the leading block, proportional to (2, -1)
    assert last[0] == -2 * last[1] and last[2] == 0


def test_dependent_row_not_zero_is_not_a4():
    # rows 1 and 2 are dependent but e3 e3 is nonzero: one nonzero b, no derivations
    E = EvolutionAlgebra([[1, 2, 0], [2, 4, 0], [0, 0, 1]])
    assert classify(E).tag == Tag.GENERIC_RANK_DEFICIENT
    assert derivations(E).dim == 0


def test_triangular_primary_when_rank_is_low():
    E = EvolutionAlgebra([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    res = classify(E)
    assert res.tag == Tag.TRIANGULAR_EK and res.params["k"] == 1


def test_triangular_listed_as_alternative():
    res = classify(EvolutionAlgebra([[1, 1], [0, 1]]))
    assert res.tag == Tag.NONSINGULAR_ZERO
    assert res.find(Tag.TRIANGULAR_EK).params["k"] == 2


def test_zero_algebra_is_triangular_k0():
    res = classify(EvolutionAlgebra([[0] * 3] * 3))
    assert res.tag == Tag.TRIANGULAR_EK and res.params["k"] == 0


def test_search_cap():
    E = EvolutionAlgebra([[0] * 3] * 3)
    with pytest.raises(ExplicitLimit):
        classify(E, max_n=2)


def test_search_cap_env_override(monkeypatch):
    monkeypatch.setenv("EVODER_MAX_N", "2")
    with pytest.raises(ExplicitLimit):
        classify(EvolutionAlgebra([[0] * 3] * 3))


# -- closed forms ---------------------------------------------------------------


def test_a1_chain_closed_form():
    E = EvolutionAlgebra(CHAIN_A1)
    fam = emit_closed_forms(classify(E), E)
    third = G(1) / 3
    assert fam.generators == (
        ((third, 0, 1), (0, 2 * third, 0), (1, 0, third)),
    )
    assert family_ok(E, classify(E)).ok


def test_a1_only_one_delta_sign_is_a_derivation():
    E = EvolutionAlgebra(CHAIN_A1)
    third = G(1) / 3
    plus = [[third, ZERO, ONE], [ZERO, 2 * third, ZERO], [ONE, ZERO, third]]
    minus = [[-third, ZERO, ONE], [ZERO, -2 * third, ZERO], [ONE, ZERO, -third]]
    assert is_derivation(E, plus)
    assert not is_derivation(E, minus)


def test_a1_dimension_is_one():
    assert derivations(EvolutionAlgebra(CHAIN_A1)).dim == 1


def test_delta_candidates():
    assert set(delta_candidates(G(-1))) == {QuadExtScalar(1, 0, 1), QuadExtScalar(-1, 0, 1)}
    r, s = delta_candidates(G(-2))
    assert not r.is_rational() and r * r == 2 and s == -r


def test_rationalize_splits_radical_part():
    r = QuadExtScalar.sqrt(3)
    parts = rationalize([[r + 1, ZERO], [ZERO, QuadExtScalar(2, 0, 3)]])
    assert parts == [[[1, 0], [0, 2]], [[1, 0], [0, 0]]]


def test_triangular_emission_units():
    E = EvolutionAlgebra([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    fam = emit_closed_forms(classify(E), E)
    positions = sorted(
        (i, j) for g in fam.generators for i in range(3) for j in range(3) if g[i][j]
    )
    assert positions == [(1, 1), (1, 2), (2, 1), (2, 2)]
    assert family_ok(E, classify(E)).ok


def test_empty_family_for_nonsingular():
    E = EvolutionAlgebra([[1, 2], [3, 4]])
    res = classify(E)
    report = family_ok(E, res)
    assert emit_closed_forms(res, E).generators == ()
    assert report.ok and report.solver_dim == 0


def test_corrupted_generator_fails():
    E = EvolutionAlgebra([[1, 0, 0], [0, 0, 1], [0, 0, 0]])
    res = classify(E)
    fam = emit_closed_forms(res, E)
    gen = [list(row) for row in fam.generators[0]]
    i, j = next((i, j) for i in range(3) for j in range(3) if gen[i][j])
    gen[i][j] = -gen[i][j]
    bad = type(fam)(fam.tag, (tuple(map(tuple, gen)),) + fam.generators[1:], "")
    report = verify_closed_forms(E, bad, derivations(E))
    assert not report.leibniz_ok and not report.ok


def test_mismatched_result_rejected():
    E = EvolutionAlgebra([[1, 0, 0], [0, 0, 1], [0, 0, 0]])
    wrong = ClassificationResult(Tag.FORM_A5, (2, 1, 0), {"k": 1})
    with pytest.raises(PatternMismatch):
        emit_closed_forms(wrong, E)


# -- completeness and determinism -----------------------------------------------


def test_rank_n_minus_one_exhaustive_n3():
    """Every 3x3 matrix over {0, 1, -1} of rank 2 either matches a form or has no derivations."""
    values = [G(0), G(1), G(-1)]
    seen = set()
    for entries in itertools.product(values, repeat=9):
        E = EvolutionAlgebra([entries[0:3], entries[3:6], entries[6:9]])
        res = classify(E)
        if res.rank != 2:
            continue
        space = derivations(E)
        if space.dim:
            assert res.matched_a_form(), E
        if res.tag == Tag.GENERIC_RANK_DEFICIENT:
            assert space.dim == 0, E
        for match in (res,) + res.alternatives:
            assert verify_closed_forms(E, emit_closed_forms(match, E), space).ok, E
        seen.add(res.tag)
    assert {Tag.FORM_A1, Tag.FORM_A3, Tag.FORM_A4, Tag.FORM_A5} <= seen


@settings(max_examples=100, deadline=None)
@given(algebras(min_n=2, max_n=5))
def test_tag_is_permutation_invariant(E):
    perm = list(range(1, E.n)) + [0]
    a, b = classify(E), classify(E.permuted(perm))
    assert a.tag == b.tag and set(a.tags()) == set(b.tags())


@settings(max_examples=100, deadline=None)
@given(algebras(min_n=2, max_n=4))
def test_reported_perm_is_lexicographically_smallest(E):
    res = classify(E)
    if res.tag not in A_FORMS | {Tag.TRIANGULAR_EK}:
        return
    for perm in itertools.permutations(range(E.n)):
        if perm >= res.perm:
            break
        candidate = ClassificationResult(res.tag, perm, res.params)
        with pytest.raises(PatternMismatch):
            emit_closed_forms(candidate, E)
