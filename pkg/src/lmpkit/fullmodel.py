"""Pointwise descriptor of the full three-state counterexample and its sums.

The finite truncations lose the distinction between the two states fed by
the disagreeing extensions. The descriptor here keeps the whole countable
family of rational intervals: every rational point of the unit interval is a
state, and label ``a`` (a natural number written in decimal) moves a point
of the ``a``-th interval to the null state of its copy. The ``inf`` label
sends the two special states to the lower and upper extension of Lebesgue
measure along the abstract set ``V``.

Events are described by which discrete states they contain and, per copy,
whether they contain ``V``, its complement, or both.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .enumeration import RATIONAL_INTERVALS, SeparatingFamilyDescriptor
from .errors import LabelError, NotMeasurableError, ShapeError
from .intervals import format_fraction, to_fraction
from .measure import ZERO, VMassProfile, lebesgue, lower_extension, upper_extension
from .sigma import CarrierDescriptor, extend_by_abstract_set, sigma_closure

INF = "inf"
ROLES = ("null", "lower", "upper", "base")


@dataclass(frozen=True)
class Copy:
    """One copy of the unit interval together with its discrete states.

    ``states`` maps each discrete state to its role: ``null`` (no
    transitions), ``lower``/``upper`` (``inf`` jumps by the lower/upper
    extension), or ``base`` (``inf`` jumps by plain Lebesgue measure, for
    which ``V`` is not an event).
    """

    tag: str
    has_v: bool
    states: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(sorted(dict(self.states).items())))
        roles = dict(self.states)
        if list(roles.values()).count("null") != 1:
            raise ShapeError(f"copy {self.tag!r} needs exactly one null state")
        for name, role in roles.items():
            if role not in ROLES:
                raise ShapeError(f"unknown role {role!r} for state {name!r}")
            if role in ("lower", "upper") and not self.has_v:
                raise ShapeError(f"state {name!r} needs V, which copy {self.tag!r} lacks")

    @property
    def roles(self) -> dict[str, str]:
        return dict(self.states)

    @property
    def null(self) -> str:
        return next(n for n, r in self.states if r == "null")


@dataclass(frozen=True, order=True)
class IPoint:
    """A rational point of the interval part of one copy."""

    copy: str
    value: Fraction

    def __post_init__(self):
        v = to_fraction(self.value)
        if not 0 < v < 1:
            raise ShapeError(f"interval point {v} lies outside (0, 1)")
        object.__setattr__(self, "value", v)

    def __str__(self):
        return f"{self.copy}:{format_fraction(self.value)}" if self.copy else format_fraction(self.value)


State = str | IPoint


@dataclass(frozen=True)
class FullEvent:
    """Discrete states plus, per copy, the parts of the interval included."""

    points: frozenset = frozenset()
    v: frozenset = frozenset()           # copies whose V part is included
    v_complement: frozenset = frozenset()

    @classmethod
    def of(cls, points: Iterable[str] = (), v: Iterable[str] = (), v_complement: Iterable[str] = (),
           interval: Iterable[str] = ()) -> "FullEvent":
        iv = frozenset(interval)
        return cls(frozenset(points), frozenset(v) | iv, frozenset(v_complement) | iv)


@dataclass(frozen=True)
class FullModel:
    copies: tuple[Copy, ...]
    inner: Fraction
    outer: Fraction
    family: SeparatingFamilyDescriptor = RATIONAL_INTERVALS

    def __post_init__(self):
        i, o = Fraction(self.inner), Fraction(self.outer)
        if not 0 <= i <= o <= 1:
            raise ShapeError(f"need 0 <= inner <= outer <= 1, got {i}, {o}")
        object.__setattr__(self, "inner", i)
        object.__setattr__(self, "outer", o)
        names = [n for c in self.copies for n, _ in c.states]
        if len(set(names)) != len(names):
            raise ShapeError("discrete state names must be unique across copies")
        tags = [c.tag for c in self.copies]
        if len(set(tags)) != len(tags):
            raise ShapeError("copy tags must be unique")

    # -- lookup -------------------------------------------------------------

    def copy(self, tag: str) -> Copy:
        for c in self.copies:
            if c.tag == tag:
                return c
        raise ShapeError(f"unknown copy {tag!r}")

    def copy_of(self, state: State) -> Copy:
        if isinstance(state, IPoint):
            return self.copy(state.copy)
        for c in self.copies:
            if state in c.roles:
                return c
        raise ShapeError(f"unknown state {state!r}")

    def role(self, state: State) -> str:
        if isinstance(state, IPoint):
            self.copy(state.copy)
            return "interval"
        return self.copy_of(state).roles[state]

    @property
    def discrete_states(self) -> tuple[str, ...]:
        return tuple(n for c in self.copies for n, _ in c.states)

    @property
    def null_states(self) -> tuple[str, ...]:
        return tuple(c.null for c in self.copies)

    @property
    def v_copies(self) -> tuple[str, ...]:
        return tuple(c.tag for c in self.copies if c.has_v)

    def check_label(self, label: str) -> None:
        if label == INF:
            return
        if not (label.isdigit() and (label == "0" or not label.startswith("0"))):
            raise LabelError(f"unknown label {label!r}; labels are naturals or 'inf'")

    def everything(self) -> FullEvent:
        tags = [c.tag for c in self.copies]
        return FullEvent.of(self.discrete_states, interval=tags)

    # -- kernels ------------------------------------------------------------

    def v_mass(self, role: str) -> Fraction:
        """Mass of ``V`` under the ``inf`` jump of a discrete state with ``role``."""
        if role == "lower":
            return self.inner
        if role == "upper":
            return self.outer
        raise NotMeasurableError(f"V is not measurable for a state of role {role!r}")

    def tau(self, state: State, label: str, event: FullEvent) -> Fraction:
        self.check_label(label)
        role = self.role(state)
        c = self.copy_of(state)
        if role == "interval":
            if label == INF:
                return ZERO
            member = self.family.member(int(label))
            if state.value in member and c.null in event.points:
                return Fraction(1)
            return ZERO
        if role == "null" or label != INF:
            return ZERO
        has_v, has_vc = c.tag in event.v, c.tag in event.v_complement
        if has_v and has_vc:
            return Fraction(1)
        if not (has_v or has_vc):
            return ZERO
        if not c.has_v:
            raise NotMeasurableError(f"copy {c.tag!r} has no V")
        vm = self.v_mass(role)
        return vm if has_v else 1 - vm

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "kind": "full-lmp",
            "family": self.family.to_json(),
            "profile": {"inner": format_fraction(self.inner), "outer": format_fraction(self.outer)},
            "copies": [{"tag": c.tag, "has_v": c.has_v, "states": dict(c.states)}
                       for c in self.copies],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FullModel":
        if data.get("kind") != "full-lmp":
            raise ShapeError("not a full model descriptor")
        fam = SeparatingFamilyDescriptor.from_json(data["family"])
        copies = tuple(Copy(c["tag"], bool(c["has_v"]), tuple(c["states"].items()))
                       for c in data["copies"])
        prof = data["profile"]
        return cls(copies, to_fraction(prof["inner"]), to_fraction(prof["outer"]), fam)


def v_values_by_extension(inner, outer) -> tuple[Fraction, Fraction]:
    """``(m0(V), m1(V))`` recomputed on a one-atom space with the measure module."""
    space = sigma_closure([], CarrierDescriptor())
    space = extend_by_abstract_set(space, "V")
    mu = lebesgue(space)
    (parent,) = space.split_pairs()
    profile = VMassProfile.from_space(space, {parent: (inner, outer)})
    v = space.abstract_event(True)
    return lower_extension(mu, profile)(v), upper_extension(mu, profile)(v)
