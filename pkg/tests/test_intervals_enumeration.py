import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lmpkit.enumeration import (RATIONAL_INTERVALS, SeparatingFamilyDescriptor, interval_at,
                                interval_index, rational_rank, rational_unrank, separation_witness,
                                simplest_between)
from lmpkit.errors import NoWitnessError
from lmpkit.intervals import Interval, IntervalSet, parse_interval


def brute_rationals(limit):
    """0, 1, then p/q in lowest terms by denominator then numerator."""
    out = [F(0), F(1)]
    q = 2
    while len(out) < limit:
        out += [F(p, q) for p in range(1, q) if F(p, q).denominator == q]
        q += 1
    return out[:limit]


def test_rational_order_matches_brute_force_listing():
    expected = brute_rationals(400)
    assert [rational_unrank(k) for k in range(400)] == expected
    assert [rational_rank(q) for q in expected] == list(range(400))


def test_first_intervals_are_fixed():
    assert [interval_at(i) for i in range(8)] == [
        (0, 1), (0, F(1, 2)), (F(1, 2), 1), (0, F(1, 3)), (F(1, 3), 1),
        (F(1, 3), F(1, 2)), (0, F(2, 3)), (F(2, 3), 1)]


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_interval_index_round_trip(i):
    assert interval_index(*interval_at(i)) == i


def test_interval_enumeration_is_injective_on_a_prefix():
    seen = [interval_at(i) for i in range(3000)]
    assert len(set(seen)) == len(seen)
    assert all(lo < hi for lo, hi in seen)


def scan_for_witness(p, q):
    """Oracle: first interval in the enumeration containing p but not q."""
    i = 0
    while True:
        lo, hi = interval_at(i)
        if lo < p < hi and not lo < q < hi:
            return i
        i += 1


def test_quarter_pair_matches_scan():
    a = separation_witness(F(1, 4), F(3, 4))
    assert a == scan_for_witness(F(1, 4), F(3, 4)) == 1
    assert interval_at(a) == (0, F(1, 2))


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=40),
       st.fractions(min_value=0, max_value=1, max_denominator=40))
def test_witness_is_the_first_separating_interval(p, q):
    if p == q or p in (0, 1) or q in (0, 1):
        return
    assert separation_witness(p, q) == scan_for_witness(p, q)


def test_ten_thousand_random_pairs_are_separated():
    rng = random.Random(7)
    for _ in range(10_000):
        d1, d2 = rng.randint(2, 10**5), rng.randint(2, 10**5)
        p, q = F(rng.randint(1, d1 - 1), d1), F(rng.randint(1, d2 - 1), d2)
        if p == q:
            continue
        a = separation_witness(p, q)
        member = RATIONAL_INTERVALS.member(a)
        assert p in member and q not in member


def test_swapped_pairs_separate_on_opposite_sides():
    a, b = separation_witness(F(1, 4), F(3, 4)), separation_witness(F(3, 4), F(1, 4))
    assert F(1, 4) in RATIONAL_INTERVALS.member(a) and F(3, 4) not in RATIONAL_INTERVALS.member(a)
    assert F(3, 4) in RATIONAL_INTERVALS.member(b) and F(1, 4) not in RATIONAL_INTERVALS.member(b)


@pytest.mark.parametrize("p,q", [(F(1, 2), F(1, 2)), (F(0), F(1, 2)), (F(1, 2), F(1))])
def test_witness_errors(p, q):
    with pytest.raises(NoWitnessError):
        separation_witness(p, q)


def test_family_without_members_has_no_witness():
    with pytest.raises(NoWitnessError):
        separation_witness(F(1, 4), F(1, 2), SeparatingFamilyDescriptor("none"))


@settings(max_examples=200, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=60),
       st.fractions(min_value=0, max_value=1, max_denominator=60))
def test_simplest_between_is_lowest_ranked_in_open_interval(a, b):
    lo, hi = sorted((a, b))
    if lo == hi:
        return
    m = simplest_between(lo, hi)
    assert lo < m < hi
    # no rational of smaller denominator fits
    for d in range(1, m.denominator):
        assert not any(lo < F(n, d) < hi for n in range(0, d + 1))


def test_interval_set_algebra():
    a = IntervalSet.parse(["(0,1/2)"])
    b = IntervalSet.parse(["[1/4,3/4]"])
    assert (a & b).render() == "[1/4,1/2)"
    assert (a | b).render() == "(0,3/4]"
    assert (a - b).render() == "(0,1/4)"
    assert (IntervalSet.parse(["(0,1)"]) - a).render() == "[1/2,1)"
    assert IntervalSet.parse(["(0,1/2)", "{1/2}", "(1/2,1)"]) == IntervalSet.open(0, 1)
    assert parse_interval("{1/3}") == Interval(F(1, 3), F(1, 3), True, True)
    assert (a & IntervalSet.open(F(1, 2), 1)).render() == "{}"


pieces = st.builds(lambda lo, hi, lc, hc: (lo, hi, lc, hc),
                   st.fractions(0, 1, max_denominator=8), st.fractions(0, 1, max_denominator=8),
                   st.booleans(), st.booleans())


def to_set(raw):
    out = []
    for lo, hi, lc, hc in raw:
        lo, hi = sorted((lo, hi))
        if lo == hi:
            lc = hc = True
        out.append(Interval(lo, hi, lc, hc))
    return IntervalSet(out)


@settings(max_examples=150, deadline=None)
@given(st.lists(pieces, max_size=3), st.lists(pieces, max_size=3),
       st.fractions(0, 1, max_denominator=16))
def test_set_operations_agree_pointwise(ra, rb, x):
    a, b = to_set(ra), to_set(rb)
    assert (x in (a & b)) == (x in a and x in b)
    assert (x in (a | b)) == (x in a or x in b)
    assert (x in (a - b)) == (x in a and x not in b)
    assert IntervalSet.parse((a | b).to_json()) == a | b
