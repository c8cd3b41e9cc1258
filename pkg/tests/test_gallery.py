import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from lmpkit.bisim import event_bisimilarity
from lmpkit.certificate import prove_not_state_bisimilar
from lmpkit.errors import InvalidMeasureError, NoGapError, UnsupportedDropError
from lmpkit.fullmodel import FullModel
from lmpkit.gallery import (GalleryConfig, build_full_s3, build_s3, build_s3_minus,
                            build_sum_example, build_T, build_unclosable_cospan, build_Tprime,
                            is_sum_shape)
from lmpkit.lmp import validate_lmp
from lmpkit.measure import MeasureValue
from lmpkit.random_models import random_profile_pair
from lmpkit.sigma import r_closed_sets

CFG = GalleryConfig(n_generators=2)


def test_s3_shape_and_kernels():
    m = build_s3(CFG)
    interval = [r for r in m.regions if m.space[r].intervals]
    assert len(m.regions) == 3 + len(interval)
    assert all(m.space[r].split is not None for r in interval)
    assert m.labels == ("0", "1", "inf")
    everything = m.space.full_event()
    for a in m.labels:
        assert m.tau("x", a, everything) == 0
    assert m.tau("s", "inf", everything) == 1 == m.tau("t", "inf", everything)
    assert validate_lmp(m).ok


def test_interval_atom_mass_is_its_length():
    m = build_s3(CFG)
    lower = m.row("s", "inf")
    for parent, (inside, outside) in m.space.split_pairs().items():
        atom = m.space[inside]
        assert lower({inside, outside}) == atom.intervals.length


def test_full_mode_returns_descriptor():
    assert isinstance(build_s3(GalleryConfig(mode="full-descriptor")), FullModel)


def test_config_rejects_inverted_profile():
    with pytest.raises(InvalidMeasureError):
        GalleryConfig(inner=F(1, 2), outer=F(1, 3))


def test_dropping_states():
    full = build_s3(CFG)
    minus_s, minus_t = build_s3_minus(CFG, "s"), build_s3_minus(CFG, "t")
    assert set(full.regions) - set(minus_s.regions) == {"s"}
    assert [r for r in minus_t.regions if minus_t.row(r, "inf").items] == ["s"]
    assert validate_lmp(minus_s).ok and validate_lmp(minus_t).ok
    with pytest.raises(UnsupportedDropError):
        build_s3_minus(CFG, "x")


def test_T_and_Tprime():
    t, tp = build_T(CFG), build_Tprime(CFG)
    assert t.space.symbol is None and not t.space.split_pairs()
    assert t.row("t", "inf").total == 1
    assert "t'" in tp.regions and "t" not in tp.regions
    assert validate_lmp(t).ok and validate_lmp(tp).ok


def test_sum_relation_members_have_sum_shape():
    m, rel = build_sum_example(CFG)
    assert validate_lmp(m).ok
    algebra = r_closed_sets(m.space, rel)
    for k in range(len(algebra.blocks) + 1):
        for combo in itertools.combinations(algebra.blocks, k):
            assert is_sum_shape(m, frozenset().union(*combo))
    one_half = next(r for r in m.regions if r.startswith("1.") and m.space[r].split is True)
    assert not is_sum_shape(m, {one_half})


def test_cospan_kernels():
    c = build_unclosable_cospan(CFG)
    for r in c.left.regions:
        if r != "0":
            assert c.left.row(r, "a") == MeasureValue.dirac("0")
    v = c.left.space.abstract_event(True)
    assert (c.left.tau("0", "a", v), c.right.tau("0", "a", v)) == (0, 1)
    for m in (c.left, c.right, c.target):
        assert validate_lmp(m).ok


def test_dyadic_preset_builds():
    m = build_s3(GalleryConfig(n_generators=3, preset="dyadic"))
    assert validate_lmp(m).ok and event_bisimilarity(m).related("s", "t")


profiles = st.integers(0, 2**32).map(lambda s: random_profile_pair(random.Random(s)))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([1, 2, 4, 8]), profiles)
def test_s_and_t_merge_at_every_truncation(n, profile):
    m = build_s3(GalleryConfig(n_generators=n, inner=profile[0], outer=profile[1]))
    assert validate_lmp(m).ok
    rel = event_bisimilarity(m)
    assert rel.related("s", "t") and frozenset({"x"}) in rel.classes


@settings(max_examples=30, deadline=None)
@given(profiles)
def test_refutation_exists_iff_profile_has_a_gap(profile):
    cfg = GalleryConfig(inner=profile[0], outer=profile[1])
    if profile[0] < profile[1]:
        assert prove_not_state_bisimilar(build_full_s3(cfg), "s", "t", samples=10)
    else:
        with pytest.raises(NoGapError):
            prove_not_state_bisimilar(build_full_s3(cfg), "s", "t")
