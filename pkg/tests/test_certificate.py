import json
from fractions import Fraction as F

import pytest

from lmpkit.certificate import load_certificate, prove_not_state_bisimilar, verify_certificate
from lmpkit.errors import NoGapError
from lmpkit.fullmodel import FullEvent, IPoint, v_values_by_extension
from lmpkit.gallery import (GalleryConfig, build_full_pair_sum, build_full_s3,
                            build_full_triple_sum)


def canonical(samples=200):
    return prove_not_state_bisimilar(build_full_s3(), "s", "t", samples=samples)


def edited(cert, edit):
    data = json.loads(cert.dumps())
    edit(data)
    return load_certificate(json.dumps(data))


def test_canonical_certificate_has_gap_zero_one():
    cert = canonical()
    gap = cert.steps[-1]
    assert (F(gap.left), F(gap.right)) == (0, 1)
    assert [type(s).__name__ for s in cert.steps] == \
        ["NullStateStep", "SeparationStep", "VClosednessStep", "GapStep"]


def test_round_trip_verifies():
    cert = canonical()
    report = verify_certificate(cert)
    assert report.ok and report.passed_steps == (1, 2, 3, 4)
    again = load_certificate(cert.dumps())
    assert again.dumps() == cert.dumps()
    assert verify_certificate(again).ok


@pytest.mark.parametrize("digit", "123456789")
def test_tampered_gap_fails_at_gap_step(digit):
    cert = edited(canonical(), lambda d: d["steps"][3].update(left=digit))
    report = verify_certificate(cert)
    assert not report.ok and report.failed_step == 4


def test_unknown_label_fails_at_step_one():
    cert = edited(canonical(), lambda d: d["steps"][0]["witnesses"][1].__setitem__(1, "zz"))
    report = verify_certificate(cert)
    assert not report.ok and report.failed_step == 1


def test_wrong_separating_index_fails_at_step_two():
    cert = edited(canonical(), lambda d: d["steps"][1]["explicit"][0].update(index=2))
    report = verify_certificate(cert)
    assert not report.ok and report.failed_step == 2


def test_truncated_certificate_is_incomplete():
    cert = edited(canonical(), lambda d: d["steps"].pop())
    assert not verify_certificate(cert).ok


def test_measurable_v_has_no_gap():
    with pytest.raises(NoGapError):
        prove_not_state_bisimilar(build_full_s3(GalleryConfig(inner=F(1, 3), outer=F(1, 3))), "s", "t")


def test_quarter_half_profile():
    cfg = GalleryConfig(inner=F(1, 4), outer=F(1, 2))
    cert = prove_not_state_bisimilar(build_full_s3(cfg), "s", "t", samples=100)
    gap = cert.steps[-1]
    assert (F(gap.left), F(gap.right)) == (F(1, 4), F(1, 2)) == v_values_by_extension(cfg.inner, cfg.outer)
    assert verify_certificate(cert).ok


def test_pair_sum_refutation_verifies():
    cert = prove_not_state_bisimilar(build_full_pair_sum(), "1.s", "2.t", samples=200)
    assert verify_certificate(cert).ok


def test_triple_sum_fails_at_v_closedness():
    cert = prove_not_state_bisimilar(build_full_triple_sum(), "1.s", "2.t", samples=200)
    report = verify_certificate(cert)
    assert not report.ok and report.failed_step == 3
    assert "3" in report.reason


def test_full_model_kernel_examples():
    model = build_full_s3()
    nulls = FullEvent.of(["x"])
    assert model.tau(IPoint("", F(1, 4)), "1", nulls) == 1    # index 1 is (0, 1/2)
    assert model.tau(IPoint("", F(3, 4)), "1", nulls) == 0
    v = FullEvent.of(v=[""])
    assert (model.tau("s", "inf", v), model.tau("t", "inf", v)) == (0, 1)
    assert model.tau("x", "inf", model.everything()) == 0
