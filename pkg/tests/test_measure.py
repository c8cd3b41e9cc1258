import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lmpkit.errors import (InvalidMeasureError, MeasurableSetError, NotMeasurableError,
                           ProfileViolationError)
from lmpkit.measure import (BaseMeasure, MeasureValue, VMassProfile, disagreeing_extensions,
                            inner_measure, lebesgue, lower_extension, outer_measure,
                            upper_extension)
from lmpkit.random_models import random_extension_instance
from lmpkit.sigma import CarrierDescriptor, extend_by_abstract_set, sigma_closure

UNIT_V = extend_by_abstract_set(sigma_closure([], CarrierDescriptor()), "V")
IN, OUT = "(0,1)&V", "(0,1)&~V"


def unit_profile(inner, outer):
    return lebesgue(UNIT_V), VMassProfile.from_space(UNIT_V, {"(0,1)": (inner, outer)})


def test_full_atom_has_base_mass():
    mu, prof = unit_profile(0, 1)
    assert inner_measure(mu, prof, {IN, OUT}) == 1 == outer_measure(mu, prof, {IN, OUT})


def test_v_has_inner_zero_outer_one():
    mu, prof = unit_profile(0, 1)
    assert inner_measure(mu, prof, {IN}) == 0
    assert outer_measure(mu, prof, {IN}) == 1
    assert outer_measure(mu, prof, set()) == 0
    assert inner_measure(mu, prof, {IN}) + outer_measure(mu, prof, {OUT}) == 1


def test_unknown_atom_is_not_measurable():
    mu, prof = unit_profile(0, 1)
    with pytest.raises(NotMeasurableError):
        inner_measure(mu, prof, {"(0,1)"})


def test_extension_examples():
    mu, prof = unit_profile(0, 1)
    lo, up = lower_extension(mu, prof), upper_extension(mu, prof)
    assert lo({IN}) == 0 and up({IN}) == 1
    assert lo({IN, OUT}) == up({IN, OUT}) == 1
    mu, prof = unit_profile(F(1, 4), F(1, 2))
    m0, m1 = disagreeing_extensions(mu, prof)
    assert (m0({IN}), m1({IN})) == (F(1, 4), F(1, 2))


def test_measurable_v_collapses_extensions():
    mu, prof = unit_profile(F(1, 3), F(1, 3))
    assert lower_extension(mu, prof) == upper_extension(mu, prof)
    with pytest.raises(MeasurableSetError):
        disagreeing_extensions(mu, prof)


def test_profile_bounds_are_enforced():
    with pytest.raises(ProfileViolationError):
        lower_extension(*unit_profile(F(1, 2), F(1, 4)))
    with pytest.raises(ProfileViolationError):
        upper_extension(*unit_profile(0, 2))
    with pytest.raises(ProfileViolationError):
        VMassProfile.from_space(UNIT_V, {})


def test_base_measure_total_is_bounded():
    with pytest.raises(InvalidMeasureError):
        BaseMeasure.of({"a": F(3, 4), "b": F(1, 2)})
    with pytest.raises(InvalidMeasureError):
        MeasureValue.of({"a": -1})


def test_blend_is_convex_combination():
    mu, prof = unit_profile(0, 1)
    lo, up = lower_extension(mu, prof), upper_extension(mu, prof)
    half = lo.blend(up, F(1, 2))
    assert half({IN}) == F(1, 2) and half.total == 1
    with pytest.raises(InvalidMeasureError):
        lo.blend(up, 2)


# -- properties on random instances ----------------------------------------


def per_atom_oracle(space, mu, prof, event):
    """inner/outer as the least/greatest value any extension gives, atom by atom.

    Extensions of mu may pick the mass of C & V anywhere in [inner(C), outer(C)]
    independently per atom; the extremes of an affine function lie at the ends.
    """
    event = frozenset(event)
    lo_total = hi_total = F(0)
    pairs = space.split_pairs()
    for a in space.atoms:
        if a.split is None and a.id in event:
            lo_total += mu.mass[a.id]
            hi_total += mu.mass[a.id]
    for parent, (vin, vout) in pairs.items():
        m, e = mu.mass[parent], prof.by_parent[parent]
        values = [(vin in event) * x + (vout in event) * (m - x) for x in (e.inner, e.outer)]
        lo_total += min(values)
        hi_total += max(values)
    return lo_total, hi_total


instances = st.integers(min_value=0, max_value=2**32).map(
    lambda seed: random_extension_instance(random.Random(seed), max_base=4))


def all_events(space):
    ids = space.ids
    for k in range(len(ids) + 1):
        yield from itertools.combinations(ids, k)


@settings(max_examples=60, deadline=None)
@given(instances)
def test_inner_outer_match_extension_extremes(inst):
    space, mu, prof = inst
    for ev in all_events(space):
        assert (inner_measure(mu, prof, ev), outer_measure(mu, prof, ev)) == \
            per_atom_oracle(space, mu, prof, ev)


@settings(max_examples=60, deadline=None)
@given(instances)
def test_complement_identity_and_monotonicity(inst):
    space, mu, prof = inst
    events = [frozenset(e) for e in all_events(space)]
    for e in events:
        assert inner_measure(mu, prof, e) + outer_measure(mu, prof, space.complement(e)) == mu.total
    rng = random.Random(len(events))
    for _ in range(50):
        e = rng.choice(events)
        f = e | rng.choice(events)
        assert inner_measure(mu, prof, e) <= inner_measure(mu, prof, f)
        assert outer_measure(mu, prof, e) <= outer_measure(mu, prof, f)


@settings(max_examples=60, deadline=None)
@given(instances)
def test_extensions_extend_and_pin_v(inst):
    space, mu, prof = inst
    lo, up = lower_extension(mu, prof), upper_extension(mu, prof)
    v = space.abstract_event(True)
    assert lo(v) == prof.inner_total == inner_measure(mu, prof, v)
    assert up(v) == prof.outer_total == outer_measure(mu, prof, v)
    assert up(v) - lo(v) == sum((e.outer - e.inner for e in prof.entries), F(0))
    for ev in all_events(space):
        base = space.base_event(ev)
        if base is not None:
            assert lo(ev) == up(ev) == mu(base)
    assert lo.to_base(space) == up.to_base(space)


@settings(max_examples=60, deadline=None)
@given(instances, st.data())
def test_measure_values_are_additive(inst, data):
    space, mu, prof = inst
    lo = lower_extension(mu, prof)
    ev = frozenset(data.draw(st.lists(st.sampled_from(space.ids))))
    cut = frozenset(data.draw(st.lists(st.sampled_from(space.ids))))
    assert lo(ev) == lo(ev & cut) + lo(ev - cut)
    assert lo(ev) == sum((lo({a}) for a in ev), F(0))
