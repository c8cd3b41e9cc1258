import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lmpkit.bisim import event_bisimilarity
from lmpkit.errors import FormulaSyntaxError, LabelError, ThresholdRangeError
from lmpkit.gallery import GalleryConfig, build_s3
from lmpkit.lmp import SymbolicLMP
from lmpkit.logic import (TOP, And, Diamond, Top, enumerate_formulas, eval_formula,
                          logical_equivalence, modal_depth, parse_formula, render_formula,
                          stabilization_depth)
from lmpkit.random_models import random_lmp
from lmpkit.sigma import discrete_space

S3 = build_s3(GalleryConfig(n_generators=2))
seeds = st.integers(0, 2**32)


def test_parse_examples():
    assert parse_formula("T") == Top()
    assert parse_formula("<inf>_{1/2} T") == Diamond("inf", F(1, 2), TOP)
    assert parse_formula(" ( <a>_{1} T &T ) ") == And(Diamond("a", F(1), TOP), TOP)


def test_threshold_above_one_is_a_range_error():
    with pytest.raises(ThresholdRangeError):
        parse_formula("<0>_{3/2} T")
    with pytest.raises(ThresholdRangeError):
        Diamond("a", F(-1, 2), TOP)


@pytest.mark.parametrize("text,pos", [("(T & T", 6), ("<a>_{1/2}", 9), ("T T", 2),
                                      ("<a>{1} T", 3), ("(T | T)", 3)])
def test_syntax_errors_carry_positions(text, pos):
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula(text)
    assert info.value.position == pos


def formulas(depth=3):
    leaf = st.just(TOP)
    if depth == 0:
        return leaf
    sub = formulas(depth - 1)
    q = st.fractions(0, 1, max_denominator=12)
    return st.one_of(leaf, st.builds(And, sub, sub),
                     st.builds(Diamond, st.sampled_from(["0", "inf", "a.b"]), q, sub))


@given(formulas())
def test_render_then_parse_is_identity(f):
    assert parse_formula(render_formula(f)) == f


def test_render_of_parse_is_canonical_text():
    assert render_formula(parse_formula("(  <inf>_{2/4}T&T)")) == "(<inf>_{1/2} T & T)"


def test_eval_examples_on_s3():
    assert eval_formula(TOP, S3) == frozenset(S3.regions)
    assert eval_formula(parse_formula("<inf>_{1/2} T"), S3) == {"s", "t"}
    jumps = eval_formula(parse_formula("<0>_{1} T"), S3)
    assert jumps and all(S3.space[r].intervals for r in jumps)
    assert S3.space["x"].points and "x" not in jumps


def test_unknown_label_is_rejected():
    with pytest.raises(LabelError):
        eval_formula(parse_formula("<zz>_{0} T"), S3)


@settings(max_examples=40, deadline=None)
@given(seeds, st.fractions(0, 1, max_denominator=6))
def test_diamond_is_monotone(seed, q):
    rng = random.Random(seed)
    m = random_lmp(rng, 4, 2)
    phi = Diamond("a1", F(1, 3), TOP)
    psi = And(phi, Diamond("a0", F(1, 4), TOP))   # psi entails phi
    assert eval_formula(psi, m) <= eval_formula(phi, m)
    assert eval_formula(Diamond("a0", q, psi), m) <= eval_formula(Diamond("a0", q, phi), m)


def test_small_enumerations():
    assert list(enumerate_formulas(["a"], [F(1, 2)], 0)) == [TOP]
    assert list(enumerate_formulas(["a"], [F(1, 2)], 1)) == [TOP, Diamond("a", F(1, 2), TOP)]
    out = list(enumerate_formulas(["a"], [F(1, 2), 1], 2))
    # T plus one conjunction per non-empty set of the 8 depth-two diamonds
    # (2 thresholds x 4 canonical bodies of depth <= 1)
    assert len(out) == len(set(out)) == 2 ** 8
    assert max(modal_depth(f) for f in out) == 2


def raw_formulas(labels, thresholds, depth):
    """Every formula with binary conjunctions of up to two levels, no canonicalisation."""
    base = [TOP]
    if depth > 0:
        base += [Diamond(a, q, b) for a in labels for q in thresholds
                 for b in raw_formulas(labels, thresholds, depth - 1)]
    pairs = [And(x, y) for x in base for y in base]
    return base + pairs + [And(p, x) for p in pairs[:200] for x in base]


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_depth_two_canonical_enumeration_matches_raw_generator(seed):
    m = random_lmp(random.Random(seed), 4, 1)
    thresholds = [F(1, 2)]
    canon = {eval_formula(f, m) for f in enumerate_formulas(["a0"], thresholds, 2)}
    memo: dict = {}
    raw = {eval_formula(f, m, memo) for f in raw_formulas(["a0"], thresholds, 2)}
    assert canon == raw


def test_all_zero_kernels_give_total_relation():
    m = SymbolicLMP(discrete_space(["p", "q", "r"]), ("a",))
    assert logical_equivalence(m).classes == (frozenset({"p", "q", "r"}),)


def test_s3_keeps_s_and_t_together_at_every_depth():
    for depth in range(4):
        assert logical_equivalence(S3, depth).related("s", "t")


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_agrees_with_event_bisimilarity(seed):
    m = random_lmp(random.Random(seed), 4, 2)
    assert logical_equivalence(m) == event_bisimilarity(m)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_achieved_thresholds_suffice(seed):
    m = random_lmp(random.Random(seed), 5, 2)
    # kernel masses have denominators dividing 12; steps of 1/24 include every midpoint
    grid = [F(k, 24) for k in range(25)]
    assert logical_equivalence(m) == logical_equivalence(m, thresholds=grid)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_refinement_is_monotone_and_stabilises(seed):
    m = random_lmp(random.Random(seed), random.Random(seed).randint(1, 6), 2)
    depth = stabilization_depth(m)
    assert depth <= len(m.regions)
    rels = [logical_equivalence(m, k) for k in range(depth + 3)]
    for coarse, fine in zip(rels, rels[1:]):
        assert fine.refines(coarse)
    assert rels[depth] == rels[-1]
