"""JSON files for spaces, models, measures, relations and region maps.

Rationals are written as ``"p/q"`` strings in lowest terms (integers as
``"n"``). A space is stored as the recipe that rebuilds it, plus its atom
ids, which are checked on load.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .errors import ShapeError
from .intervals import Interval, IntervalSet, format_fraction, parse_interval, to_fraction
from .lmp import SymbolicLMP, quotient_space
from .measure import BaseMeasure, MeasureValue, VMassProfile
from .sigma import (EMPTY_SPACE, AtomPartition, CarrierDescriptor, GeneratorSet,
                    PartitionRelation, extend_by_abstract_set, restrict, sigma_closure,
                    sum_spaces)


def dumps(data: Any) -> str:
    """Deterministic JSON text (sorted keys, fixed indentation)."""
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


# -- spaces -----------------------------------------------------------------


def _carrier_json(c: CarrierDescriptor) -> dict:
    return {"interval": c.interval.render() if c.interval_part else None,
            "points": list(c.discrete_points)}


def _generator_json(g: GeneratorSet) -> dict:
    out: dict = {"name": g.name}
    if g.intervals:
        out["intervals"] = g.intervals.to_json()
    if g.points:
        out["points"] = sorted(g.points)
    if g.abstract is not None:
        out["abstract"] = g.abstract
    return out


def _recipe_json(r: Mapping) -> dict:
    if "empty" in r:
        return {"empty": True}
    if "carrier" in r:
        return {"carrier": _carrier_json(r["carrier"]),
                "generators": [_generator_json(g) for g in r["generators"]]}
    if "extend" in r:
        inner = _recipe_json(r["extend"])
        if "carrier" in inner:
            # flat form: closure followed by one extension
            inner.update(abstract_symbol=r["abstract_symbol"], split_scope=list(r["split_scope"]))
            return inner
        return {"extend": inner, "abstract_symbol": r["abstract_symbol"],
                "split_scope": list(r["split_scope"])}
    if "sum" in r:
        return {"sum": [_recipe_json(x) for x in r["sum"]], "tags": list(r["tags"])}
    if "restrict" in r:
        return {"restrict": _recipe_json(r["restrict"]), "keep": list(r["keep"])}
    if "quotient" in r:
        return {"quotient": _recipe_json(r["quotient"]), "blocks": [list(b) for b in r["blocks"]]}
    raise ShapeError("space has no recorded recipe")


def space_to_json(space: AtomPartition) -> dict:
    out = _recipe_json(space.recipe)
    out["atoms"] = list(space.ids)
    return out


def _carrier_from(d: Mapping) -> CarrierDescriptor:
    iv = d.get("interval")
    return CarrierDescriptor(iv is not None, tuple(d.get("points", ())),
                             parse_interval(iv) if iv is not None else Interval(0, 1))


def _generator_from(d: Mapping) -> GeneratorSet:
    return GeneratorSet(d["name"], IntervalSet.parse(d.get("intervals", ())),
                        frozenset(d.get("points", ())), d.get("abstract"))


def _space_from(d: Mapping) -> AtomPartition:
    if d.get("empty"):
        return EMPTY_SPACE
    if "carrier" in d:
        space = sigma_closure([_generator_from(g) for g in d.get("generators", ())],
                              _carrier_from(d["carrier"]))
        if d.get("abstract_symbol") and space.symbol is None:
            space = extend_by_abstract_set(space, d["abstract_symbol"], d.get("split_scope"))
        return space
    if "extend" in d:
        return extend_by_abstract_set(_space_from(d["extend"]), d["abstract_symbol"],
                                      d.get("split_scope"))
    if "sum" in d:
        a, b = (_space_from(x) for x in d["sum"])
        tags = tuple(d.get("tags", (None, None)))
        return sum_spaces(a, b, tags)
    if "restrict" in d:
        return restrict(_space_from(d["restrict"]), d["keep"])
    if "quotient" in d:
        return quotient_space(_space_from(d["quotient"]), d["blocks"])
    raise ShapeError(f"unrecognised space description with keys {sorted(d)}")


def space_from_json(d: Mapping) -> AtomPartition:
    space = _space_from(d)
    if "atoms" in d and list(d["atoms"]) != list(space.ids):
        raise ShapeError(f"rebuilt atoms {list(space.ids)} differ from recorded {d['atoms']}")
    return space


# -- models -----------------------------------------------------------------


def lmp_to_json(m: SymbolicLMP) -> dict:
    kernel: dict = {}
    for (region, label), mv in sorted(m.kernel.items()):
        kernel.setdefault(region, {})[label] = mv.to_json()
    return {"space": space_to_json(m.space), "labels": list(m.labels), "kernel": kernel}


def lmp_from_json(d: Mapping) -> SymbolicLMP:
    space = space_from_json(d["space"])
    kernel = {}
    for region, rows in d.get("kernel", {}).items():
        for label, mass in rows.items():
            kernel[(region, label)] = MeasureValue.of({k: to_fraction(v) for k, v in mass.items()})
    return SymbolicLMP(space, tuple(d["labels"]), kernel)


# -- measures ---------------------------------------------------------------


def measure_to_json(mu: BaseMeasure, profile: VMassProfile | None = None) -> dict:
    out: dict = {k: format_fraction(v) for k, v in mu.items}
    if profile is not None:
        out["profile"] = {e.parent: {"inner": format_fraction(e.inner),
                                     "outer": format_fraction(e.outer)} for e in profile.entries}
    return out


def measure_from_json(d: Mapping, space: AtomPartition) -> tuple[BaseMeasure, VMassProfile]:
    """``{atom: "p/q", ..., "profile": {atom: {inner, outer}}}``."""
    mass = {k: to_fraction(v) for k, v in d.items() if k != "profile"}
    prof = d.get("profile", {})
    profile = VMassProfile.from_space(
        space, {k: (to_fraction(v["inner"]), to_fraction(v["outer"])) for k, v in prof.items()})
    return BaseMeasure.of(mass), profile


# -- relations and maps -----------------------------------------------------


def relation_from_json(d: Any, regions) -> PartitionRelation:
    """A list of classes, or ``{"pairs": [[a, b], ...]}`` closed to an equivalence."""
    if isinstance(d, Mapping) and "pairs" in d:
        return PartitionRelation.from_pairs(regions, [tuple(p) for p in d["pairs"]])
    if isinstance(d, Mapping) and "classes" in d:
        d = d["classes"]
    classes = [list(c) for c in d]
    seen = {x for c in classes for x in c}
    classes += [[r] for r in regions if r not in seen]
    return PartitionRelation(classes)


def fractions_json(values: Mapping[str, Fraction]) -> dict:
    return {k: format_fraction(v) for k, v in values.items()}
