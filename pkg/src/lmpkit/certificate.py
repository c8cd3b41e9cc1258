"""Checkable refutations of state bisimilarity in the full model.

A certificate has four steps, each a list of local obligations that the
verifier replays with exact arithmetic:

1. null states: every non-null state has a label with total mass 1 while
   the null states have none, so the null states form a closed class;
2. separation: any two distinct rational points are split by an interval of
   the family, and the matching label reaches the null states from one and
   not the other (explicit pairs plus sampled pairs);
3. V-closedness: given 1 and 2, related interval points share their
   coordinate, and discrete states are never related to interval points,
   so ``V`` (taken in every copy) is a union of classes;
4. gap: the two states give ``V`` different mass under ``inf``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .enumeration import ENUMERATION_NAME, separation_witness
from .errors import LmpError, NoGapError, ShapeError
from .fullmodel import INF, FullEvent, FullModel, IPoint, v_values_by_extension
from .intervals import format_fraction, to_fraction

SEPARATION_SCHEMA = "every pair of distinct rational points is separated"
DEFAULT_SAMPLES = 1000
_EXPLICIT = ((Fraction(1, 4), Fraction(3, 4)), (Fraction(3, 4), Fraction(1, 4)),
             (Fraction(1, 3), Fraction(1, 2)), (Fraction(2, 5), Fraction(3, 7)),
             (Fraction(99, 100), Fraction(1, 100)))


@dataclass(frozen=True)
class NullStateStep:
    null_states: tuple[str, ...]
    # (state, label) pairs; state "interval:<copy>" stands for every interval point of that copy
    witnesses: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class SeparationStep:
    explicit: tuple[tuple[IPoint, IPoint, int], ...]
    schema: str = SEPARATION_SCHEMA
    enumeration: str = ENUMERATION_NAME


@dataclass(frozen=True)
class VClosednessStep:
    v_copies: tuple[str, ...]
    depends_on: tuple[int, ...] = (1, 2)
    # discrete state, label with full mass there and none at interval points
    discrete_witnesses: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class GapStep:
    label: str
    v_copies: tuple[str, ...]
    states: tuple[str, str]
    left: Fraction | str  # text when loaded, so malformed values fail at this step
    right: Fraction | str


Step = NullStateStep | SeparationStep | VClosednessStep | GapStep


@dataclass(frozen=True)
class Certificate:
    model: FullModel
    states: tuple[str, str]
    steps: tuple[Step, ...]
    samples: int = DEFAULT_SAMPLES
    seed: int = 0

    def to_json(self) -> dict:
        return {"kind": "not-state-bisimilar", "model": self.model.to_json(),
                "states": list(self.states), "samples": self.samples, "seed": self.seed,
                "steps": [_step_json(s) for s in self.steps]}

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if data.get("kind") != "not-state-bisimilar":
            raise ShapeError("not a certificate")
        return cls(FullModel.from_json(data["model"]), tuple(data["states"]),
                   tuple(_step_from_json(s) for s in data["steps"]),
                   int(data.get("samples", DEFAULT_SAMPLES)), int(data.get("seed", 0)))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def _point_json(p: IPoint) -> dict:
    return {"copy": p.copy, "value": format_fraction(p.value)}


def _step_json(s: Step) -> dict:
    if isinstance(s, NullStateStep):
        return {"step": "null-state", "null_states": list(s.null_states),
                "witnesses": [list(w) for w in s.witnesses]}
    if isinstance(s, SeparationStep):
        return {"step": "separation", "schema": s.schema, "enumeration": s.enumeration,
                "explicit": [{"p": _point_json(p), "q": _point_json(q), "index": a}
                             for p, q, a in s.explicit]}
    if isinstance(s, VClosednessStep):
        return {"step": "v-closed", "v_copies": list(s.v_copies), "depends_on": list(s.depends_on),
                "discrete_witnesses": [list(w) for w in s.discrete_witnesses]}
    return {"step": "gap", "label": s.label, "v_copies": list(s.v_copies),
            "states": list(s.states), "left": _text(s.left), "right": _text(s.right)}


def _text(v) -> str:
    return v if isinstance(v, str) else format_fraction(v)


def _step_from_json(d: dict) -> Step:
    kind = d.get("step")
    if kind == "null-state":
        return NullStateStep(tuple(d["null_states"]), tuple(tuple(w) for w in d["witnesses"]))
    if kind == "separation":
        explicit = tuple((IPoint(e["p"]["copy"], to_fraction(e["p"]["value"])),
                          IPoint(e["q"]["copy"], to_fraction(e["q"]["value"])), int(e["index"]))
                         for e in d["explicit"])
        return SeparationStep(explicit, d["schema"], d["enumeration"])
    if kind == "v-closed":
        return VClosednessStep(tuple(d["v_copies"]), tuple(d["depends_on"]),
                               tuple(tuple(w) for w in d["discrete_witnesses"]))
    if kind == "gap":
        return GapStep(d["label"], tuple(d["v_copies"]), tuple(d["states"]), d["left"], d["right"])
    raise ShapeError(f"unknown step kind {kind!r}")


# -- construction -----------------------------------------------------------


def prove_not_state_bisimilar(model: FullModel, s: str, t: str, samples: int = DEFAULT_SAMPLES,
                              seed: int = 0) -> Certificate:
    roles = {s: model.role(s), t: model.role(t)}
    if set(roles.values()) != {"lower", "upper"}:
        raise ShapeError(f"expected one lower and one upper state, got roles {roles}")
    if model.inner == model.outer:
        raise NoGapError(
            f"inner and outer mass of V agree ({model.inner}); the two states are bisimilar")
    nulls = model.null_states
    witnesses = []
    for c in model.copies:
        witnesses.append((f"interval:{c.tag}", "0"))
        witnesses += [(n, INF) for n, r in c.states if r != "null"]
    tags = [c.tag for c in model.copies]
    explicit = []
    for k, (p, q) in enumerate(_EXPLICIT):
        cp, cq = tags[k % len(tags)], tags[(k + 1) % len(tags)]
        explicit.append((IPoint(cp, p), IPoint(cq, q), separation_witness(p, q, model.family)))
    discrete = tuple((n, INF) for c in model.copies for n, r in c.states if r != "null")
    left, right = (model.v_mass(roles[s]), model.v_mass(roles[t]))
    steps = (
        NullStateStep(nulls, tuple(witnesses)),
        SeparationStep(tuple(explicit)),
        VClosednessStep(model.v_copies, (1, 2), discrete),
        GapStep(INF, model.v_copies, (s, t), left, right),
    )
    return Certificate(model, (s, t), steps, samples, seed)


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failed_step: int | None = None
    reason: str = ""
    obligations: int = 0
    passed_steps: tuple[int, ...] = field(default_factory=tuple)


class _Failure(Exception):
    pass


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise _Failure(msg)


def _random_point(rng: random.Random, tags: list[str], max_den: int) -> IPoint:
    d = rng.randrange(2, max_den + 1)
    return IPoint(rng.choice(tags), Fraction(rng.randrange(1, d), d))


def _check_null(model: FullModel, step: NullStateStep, rng, samples) -> int:
    _require(tuple(step.null_states) == model.null_states, "null states do not match the model")
    everything = model.everything()
    count = 0
    covered = set()
    for state, label in step.witnesses:
        model.check_label(label)
        if state.startswith("interval:"):
            tag = state.split(":", 1)[1]
            model.copy(tag)
            member = model.family.member(int(label)) if label != INF else None
            _require(member is not None and member.render() == "(0,1)",
                     f"label {label} does not cover every interval point of copy {tag!r}")
            pts = [IPoint(tag, Fraction(1, 2))] + [_random_point(rng, [tag], 1000)
                                                   for _ in range(max(1, samples // 100))]
            for p in pts:
                _require(model.tau(p, label, everything) == 1, f"tau_{label}({p}, S) != 1")
                count += 1
            covered.add(("interval", tag))
        else:
            _require(model.role(state) != "null", f"{state} is a null state")
            _require(model.tau(state, label, everything) == 1, f"tau_{label}({state}, S) != 1")
            covered.add(state)
            count += 1
        for x in model.null_states:
            _require(model.tau(x, label, everything) == 0, f"tau_{label}({x}, S) != 0")
            count += 1
    needed = {("interval", c.tag) for c in model.copies}
    needed |= {n for c in model.copies for n, r in c.states if r != "null"}
    _require(needed <= covered, f"no witness for {sorted(map(str, needed - covered))}")
    return count


def _check_pair(model: FullModel, p: IPoint, q: IPoint, a: int, nulls: FullEvent) -> None:
    label = str(a)
    member = model.family.member(a)
    _require(p.value in member and q.value not in member,
             f"interval {a} = {member.render()} does not separate {p} from {q}")
    _require(model.tau(p, label, nulls) == 1, f"tau_{a}({p}, N) != 1")
    _require(model.tau(q, label, nulls) == 0, f"tau_{a}({q}, N) != 0")


def _check_separation(model: FullModel, step: SeparationStep, rng, samples) -> int:
    _require(step.schema == SEPARATION_SCHEMA, "unknown separation schema")
    _require(step.enumeration == ENUMERATION_NAME, f"unknown enumeration {step.enumeration!r}")
    nulls = FullEvent.of(model.null_states)
    for p, q, a in step.explicit:
        _check_pair(model, p, q, a, nulls)
    tags = [c.tag for c in model.copies]
    done = 0
    while done < samples:
        p, q = _random_point(rng, tags, 10_000), _random_point(rng, tags, 10_000)
        if p.value == q.value:
            continue
        _check_pair(model, p, q, separation_witness(p.value, q.value, model.family), nulls)
        done += 1
    return len(step.explicit) + samples


def _check_closed(model: FullModel, step: VClosednessStep, passed: set) -> int:
    for k in step.depends_on:
        _require(k in passed, f"depends on step {k}, which did not pass")
    _require(set(step.depends_on) >= {1, 2}, "V-closedness needs the null and separation steps")
    _require(tuple(step.v_copies) == model.v_copies, "V must be taken in every copy that has it")
    lacking = [c.tag for c in model.copies if not c.has_v]
    _require(not lacking, f"copies {lacking} have points related to V-points but no V; "
                          f"V is not a union of classes")
    everything = model.everything()
    covered = set()
    probe = IPoint(model.copies[0].tag, Fraction(1, 2))
    for state, label in step.discrete_witnesses:
        model.check_label(label)
        _require(model.tau(state, label, everything) == 1, f"tau_{label}({state}, S) != 1")
        _require(label == INF, "only the inf label vanishes on all interval points")
        for c in model.copies:
            _require(model.tau(IPoint(c.tag, probe.value), label, everything) == 0,
                     f"interval points of copy {c.tag!r} have mass under {label}")
        covered.add(state)
    needed = {n for c in model.copies for n, r in c.states if r != "null"}
    _require(needed <= covered, f"discrete states not told apart from interval points: "
                                f"{sorted(needed - covered)}")
    return len(covered)


def _pair(values) -> str:
    return "(" + ", ".join(format_fraction(v) for v in values) + ")"


def _check_gap(model: FullModel, cert: Certificate, step: GapStep, passed: set) -> int:
    _require({1, 2, 3} <= passed, "gap step needs the previous steps")
    _require(step.label == INF, "gap must be measured under inf")
    _require(tuple(step.states) == tuple(cert.states), "gap refers to other states")
    _require(tuple(step.v_copies) == model.v_copies, "gap event differs from the closed V")
    try:
        left, right = to_fraction(step.left), to_fraction(step.right)
    except (ValueError, ZeroDivisionError) as exc:
        raise _Failure(f"malformed gap value: {exc}") from None
    v = FullEvent.of(v=step.v_copies)
    s, t = step.states
    got = (model.tau(s, INF, v), model.tau(t, INF, v))
    m0, m1 = v_values_by_extension(model.inner, model.outer)
    ext = {"lower": m0, "upper": m1}
    expected = (ext[model.role(s)], ext[model.role(t)])
    _require(got == expected, f"kernel gives {_pair(got)}, extensions give {_pair(expected)}")
    _require((left, right) == expected,
             f"recorded values {_pair((left, right))} != recomputed {_pair(expected)}")
    _require(left != right, "no gap: both states weigh V equally")
    return 3


def verify_certificate(cert: Certificate, model: FullModel | None = None,
                       samples: int | None = None, seed: int | None = None) -> VerificationReport:
    """Replay every obligation; report the first failing step (1-based)."""
    model = cert.model if model is None else model
    samples = cert.samples if samples is None else samples
    rng = random.Random(cert.seed if seed is None else seed)
    passed: set[int] = set()
    total = 0
    kinds = (NullStateStep, SeparationStep, VClosednessStep, GapStep)
    for k, step in enumerate(cert.steps, start=1):
        try:
            _require(k <= len(kinds) and isinstance(step, kinds[k - 1]),
                     f"step {k} has the wrong kind {type(step).__name__}")
            if isinstance(step, NullStateStep):
                total += _check_null(model, step, rng, samples)
            elif isinstance(step, SeparationStep):
                total += _check_separation(model, step, rng, samples)
            elif isinstance(step, VClosednessStep):
                total += _check_closed(model, step, passed)
            else:
                total += _check_gap(model, cert, step, passed)
        except (_Failure, LmpError) as exc:
            return VerificationReport(False, k, str(exc), total, tuple(sorted(passed)))
        passed.add(k)
    if len(passed) != len(kinds):
        return VerificationReport(False, len(cert.steps) + 1, "certificate is incomplete", total,
                                  tuple(sorted(passed)))
    return VerificationReport(True, None, "", total, tuple(sorted(passed)))


def load_certificate(text: str) -> Certificate:
    return Certificate.from_json(json.loads(text))

