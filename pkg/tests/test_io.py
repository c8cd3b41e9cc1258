import json
import random
from fractions import Fraction as F

import pytest

from lmpkit import io
from lmpkit.bisim import smallest_stable_algebra
from lmpkit.errors import ShapeError
from lmpkit.fullmodel import FullModel
from lmpkit.gallery import (GalleryConfig, build_full_triple_sum, build_s3, build_s3_minus,
                            build_sum_example, build_T, build_unclosable_cospan)
from lmpkit.lmp import quotient_by_subalgebra
from lmpkit.measure import lower_extension
from lmpkit.random_models import random_extension_instance, random_lmp

CFG = GalleryConfig(n_generators=3)


def round_trip(m):
    text = io.dumps(io.lmp_to_json(m))
    back = io.lmp_from_json(json.loads(text))
    assert back == m
    assert io.dumps(io.lmp_to_json(back)) == text


@pytest.mark.parametrize("build", [
    lambda: build_s3(CFG),
    lambda: build_s3_minus(CFG, "t"),
    lambda: build_T(CFG),
    lambda: build_sum_example(CFG)[0],
    lambda: build_unclosable_cospan(CFG).left,
    lambda: build_unclosable_cospan(CFG).target,
    lambda: random_lmp(random.Random(5), 4, 2),
])
def test_models_round_trip(build):
    round_trip(build())


def test_quotient_round_trips():
    m = build_s3(CFG)
    q, _ = quotient_by_subalgebra(m, smallest_stable_algebra(m))
    round_trip(q)


def test_changed_atom_list_is_rejected():
    data = io.lmp_to_json(build_s3(CFG))
    data["space"]["atoms"] = data["space"]["atoms"][1:]
    with pytest.raises(ShapeError):
        io.lmp_from_json(data)


def test_measure_round_trip():
    space, mu, prof = random_extension_instance(random.Random(11))
    data = json.loads(io.dumps(io.measure_to_json(mu, prof)))
    mu2, prof2 = io.measure_from_json(data, space)
    assert mu2 == mu and prof2 == prof
    assert lower_extension(mu2, prof2) == lower_extension(mu, prof)


def test_relation_formats():
    regions = ["a", "b", "c"]
    by_classes = io.relation_from_json([["a", "b"]], regions)
    assert by_classes == io.relation_from_json({"classes": [["a", "b"], ["c"]]}, regions)
    assert by_classes == io.relation_from_json({"pairs": [["b", "a"]]}, regions)


def test_full_model_round_trip():
    model = build_full_triple_sum(GalleryConfig(inner=F(1, 4), outer=F(1, 2)))
    assert FullModel.from_json(json.loads(io.dumps(model.to_json()))) == model
