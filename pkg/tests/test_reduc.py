import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TOY_H, TOY_REDUCED, TOY_REDUCED_SPLIT, x
from deducreduc.deduction import Provenance, make_deduction, zero_product
from deducreduc.encoder import encode, hamiltonian_from_equations
from deducreduc.errors import InapplicableDeduction, NegativeLambda, PositiveCoefficientPresent
from deducreduc.pbf import Polynomial, degree_profile, evaluate, zero_indices
from deducreduc.reduc import (Mode, ReductionConfig, apply_deductions, deduc_reduc,
                              divide_by_monomial, reduce_pipeline, split_termwise,
                              straight_substitute_nonpositive, sufficient_lambda)
from deducreduc.textio import parse_inline
from deducreduc.verify import compare_reduced, lambda_holds
from systems import random_system

polys = st.dictionaries(
    st.lists(st.integers(1, 5), max_size=4).map(lambda vs: tuple(sorted(set(vs)))),
    st.integers(-20, 20), max_size=10,
).map(Polynomial)
monos = st.lists(st.integers(1, 5), min_size=1, max_size=3).map(lambda vs: tuple(sorted(set(vs))))


def zero(*mono):
    return zero_product(mono, Provenance.USER_SUPPLIED)


@given(polys, monos)
def test_division_reconstructs(h, mono):
    div = divide_by_monomial(h, mono)
    assert div.q * Polynomial.term(1, mono) + div.r == h
    assert not any(set(mono) <= set(m) for m in div.r.terms)


def test_division_examples(toy_equations):
    h = parse_inline(TOY_H)
    div = divide_by_monomial(h, (1, 2))
    assert div.q == parse_inline("2 x4 x5 + 6")
    assert divide_by_monomial(Polynomial.const(5), (1,)).q == Polynomial()
    assert divide_by_monomial(parse_inline("-2 x1 x3 x4"), (1, 3)).q == parse_inline("-2 x4")


def test_global_step_on_single_term():
    h, step = deduc_reduc(parse_inline("2 x1 x2 x4 x5"), zero(1, 2))
    assert h == parse_inline("2 x1 x2")
    assert step.lam == 2 and step.mode is Mode.ERROR_TERM


def test_inapplicable_and_negative_lambda():
    with pytest.raises(InapplicableDeduction):
        deduc_reduc(parse_inline("3 x3"), zero(1, 2))
    with pytest.raises(NegativeLambda):
        deduc_reduc(parse_inline("2 x1 x2 x4 x5"), zero(1, 2), lam=1)
    with pytest.raises(NegativeLambda):
        deduc_reduc(parse_inline("2 x1 x2 x4"), zero(1, 2), lam=-1)


def test_split_then_straight_substitution(toy_deductions):
    h = parse_inline(TOY_H)
    steps = []
    for d in toy_deductions:
        h, more = split_termwise(h, d)
        steps += more
    assert h == parse_inline(TOY_REDUCED_SPLIT)
    assert [(s.target, s.lam) for s in steps] == [((1, 2, 4, 5), 2), ((2, 3, 5), 0), ((1, 3, 4), 0)]
    h, step = straight_substitute_nonpositive(h, zero(2, 3))
    assert h == parse_inline(TOY_REDUCED)
    assert degree_profile(h).counts == {2: 5, 1: 3, 0: 1}


def test_apply_deductions_does_both(toy_deductions):
    h, steps, used = apply_deductions(parse_inline(TOY_H), toy_deductions)
    assert h == parse_inline(TOY_REDUCED)
    assert used == 3
    assert [s.lam for s in steps] == [2, 0, 0, 0]


def test_straight_substitution_rules():
    h, _ = straight_substitute_nonpositive(parse_inline("-2 x1 x3 x4"), zero(1, 3))
    assert h == Polynomial()
    with pytest.raises(PositiveCoefficientPresent):
        straight_substitute_nonpositive(parse_inline("3 x1 x2"), zero(1, 2))
    with pytest.raises(InapplicableDeduction):
        straight_substitute_nonpositive(parse_inline("-3 x1 x2"), make_deduction(x(1) * x(2), x(3)))


def test_split_with_no_match_is_empty():
    h = parse_inline("x3 x4 + 1")
    assert split_termwise(h, zero(1, 2)) == (h, [])


@given(polys, monos)
def test_straight_substitution_never_lowers(h, mono):
    neg = Polynomial({m: -abs(c) if set(mono) <= set(m) else c for m, c in h.terms.items()})
    d = zero(*mono) if len(mono) > 1 else None
    if d is None:
        return
    out, _ = straight_substitute_nonpositive(neg, d)
    for bits in itertools.product((0, 1), repeat=5):
        a = dict(zip(range(1, 6), bits))
        assert evaluate(out, a) >= evaluate(neg, a)


@given(polys, monos, polys)
def test_lambda_and_degree_drop(h, mono, g):
    if len(mono) < 2:
        return
    g = Polynomial({m: c for m, c in g.terms.items() if len(m) < len(mono)})
    d = make_deduction(Polynomial.term(1, mono), g)
    if not divide_by_monomial(h, mono).q:
        return
    out, step = deduc_reduc(h, d)
    assert lambda_holds(step)
    assert step.lam >= sufficient_lambda(step.q, d)
    # nothing of degree >= deg f contains f unless the error term put it there
    new = [m for m in out.terms if set(mono) < set(m) and m not in d.error.terms]
    assert new == []


def test_pipeline_toy_without_judgments(toy_equations, toy_deductions):
    h0 = hamiltonian_from_equations(toy_equations)
    cfg = ReductionConfig(states=0, judgments=False, user_deductions=toy_deductions)
    result = reduce_pipeline(h0, toy_equations, cfg)
    assert result.hamiltonian == parse_inline(TOY_REDUCED)
    assert zero_indices(result.hamiltonian, [1, 2, 3, 4, 5]) == [10]
    assert [s.name for s in result.stages] == ["Original", "Reduction"]


def test_pipeline_stage_names(toy_equations):
    h0 = hamiltonian_from_equations(toy_equations)
    result = reduce_pipeline(h0, toy_equations, ReductionConfig(states=100))
    assert [s.name for s in result.stages] == ["Original", "SimpleJudgments", "Reduction(100)"]
    assert result.substitution == {v: Polynomial.const(c)
                                   for v, c in {1: 0, 2: 1, 3: 0, 4: 1, 5: 0}.items()}


def test_pipeline_143_decodes():
    inst = encode(143, 4, 4)
    h0 = inst.hamiltonian()
    for cfg in [ReductionConfig(), ReductionConfig(states=2, judgments=False),
                ReductionConfig(states=8, global_lambda=True, pattern_degree=3)]:
        result = reduce_pipeline(h0, inst.equations, cfg)
        assert compare_reduced(h0, result.hamiltonian, result.substitution).equivalent


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_pipeline_preserves_ground_states(seed):
    rng = random.Random(seed)
    eqs = random_system(rng, rng.randint(4, 12), rng.randint(2, 6), max_degree=rng.choice([2, 3]),
                        max_terms=5)
    h0 = hamiltonian_from_equations(eqs)
    cfg = ReductionConfig(states=rng.choice([1, 3, 16]), pattern_degree=rng.choice([2, 3]),
                          judgments=rng.random() < 0.5, global_lambda=rng.random() < 0.3)
    result = reduce_pipeline(h0, eqs, cfg)
    assert compare_reduced(h0, result.hamiltonian, result.substitution).equivalent
    assert all(lambda_holds(s) for s in result.steps)


def test_pipeline_is_deterministic():
    inst = encode(56153, 8, 8)
    a = reduce_pipeline(inst.hamiltonian(), inst.equations, ReductionConfig(states=50))
    b = reduce_pipeline(inst.hamiltonian(), inst.equations, ReductionConfig(states=50))
    assert a.hamiltonian == b.hamiltonian
    assert a.substitution == b.substitution
