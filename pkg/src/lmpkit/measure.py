"""Exact measures on symbolic spaces and their extensions by an abstract set.

A :class:`BaseMeasure` lives on the unsplit atoms. A :class:`VMassProfile`
records, for every atom ``C`` that was split by the abstract set ``V``, the
inner and outer mass of ``C & V``. Global inner/outer measures are sums of
these per-atom values, which is how the sup/inf definitions become
computable without point sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Mapping

from .errors import (InvalidMeasureError, MeasurableSetError, NotMeasurableError,
                     ProfileViolationError)
from .sigma import AtomPartition

ZERO = Fraction(0)


def _frac_items(mass: Mapping[str, object]) -> tuple[tuple[str, Fraction], ...]:
    items = []
    for k, v in mass.items():
        v = Fraction(v)
        if v < 0:
            raise InvalidMeasureError(f"negative mass {v} on {k!r}")
        items.append((k, v))
    return tuple(sorted(items))


@dataclass(frozen=True)
class MeasureValue:
    """Finite measure given by its mass on atoms; absent atoms carry 0."""

    items: tuple[tuple[str, Fraction], ...] = ()

    @classmethod
    def of(cls, mass: Mapping[str, object]) -> "MeasureValue":
        return cls(tuple((k, v) for k, v in _frac_items(mass) if v != 0))

    @classmethod
    def dirac(cls, atom: str) -> "MeasureValue":
        return cls(((atom, Fraction(1)),))

    @cached_property
    def mass(self) -> dict[str, Fraction]:
        return dict(self.items)

    def __call__(self, event: Iterable[str]) -> Fraction:
        m = self.mass
        return sum((m[i] for i in frozenset(event) if i in m), ZERO)

    @property
    def total(self) -> Fraction:
        return sum((v for _, v in self.items), ZERO)

    @property
    def support(self) -> frozenset:
        return frozenset(k for k, _ in self.items)

    def scale(self, w) -> "MeasureValue":
        w = Fraction(w)
        return MeasureValue.of({k: v * w for k, v in self.items})

    def __add__(self, other: "MeasureValue") -> "MeasureValue":
        out = dict(self.mass)
        for k, v in other.items:
            out[k] = out.get(k, ZERO) + v
        return MeasureValue.of(out)

    def blend(self, other: "MeasureValue", weight) -> "MeasureValue":
        """Convex combination ``(1 - weight) * self + weight * other``."""
        w = Fraction(weight)
        if not 0 <= w <= 1:
            raise InvalidMeasureError("blend weight must lie in [0, 1]")
        return self.scale(1 - w) + other.scale(w)

    def to_base(self, space: AtomPartition) -> "BaseMeasure":
        """Restriction to events that do not cut any atom by ``V``."""
        out: dict[str, Fraction] = {}
        for k, v in self.items:
            b = space[k].base_id
            out[b] = out.get(b, ZERO) + v
        for a in space.atoms:
            out.setdefault(a.base_id, ZERO)
        return BaseMeasure.of(out)

    def to_json(self) -> dict[str, str]:
        from .intervals import format_fraction
        return {k: format_fraction(v) for k, v in self.items}


@dataclass(frozen=True)
class BaseMeasure:
    """Mass on unsplit atoms (split atoms are addressed through their parent)."""

    items: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        if self.total > 1:
            raise InvalidMeasureError(f"total mass {self.total} exceeds 1")

    @classmethod
    def of(cls, mass: Mapping[str, object]) -> "BaseMeasure":
        return cls(_frac_items(mass))

    @cached_property
    def mass(self) -> dict[str, Fraction]:
        return dict(self.items)

    @property
    def total(self) -> Fraction:
        return sum((v for _, v in self.items), ZERO)

    def __call__(self, base_event: Iterable[str]) -> Fraction:
        m = self.mass
        return sum((m[i] for i in frozenset(base_event)), ZERO)


def lebesgue(space: AtomPartition) -> BaseMeasure:
    """Length of each unsplit atom's interval body; discrete atoms weigh 0."""
    mass = {}
    for a in space.atoms:
        mass[a.base_id] = a.intervals.length
    return BaseMeasure.of(mass)


@dataclass(frozen=True)
class ProfileEntry:
    parent: str
    inside: str
    outside: str
    inner: Fraction
    outer: Fraction


@dataclass(frozen=True)
class VMassProfile:
    """Inner and outer mass of ``C & V`` for each split atom ``C``."""

    entries: tuple[ProfileEntry, ...]

    @classmethod
    def from_space(cls, space: AtomPartition,
                   values: Mapping[str, tuple[object, object]]) -> "VMassProfile":
        pairs = space.split_pairs()
        missing = set(pairs) - set(values)
        extra = set(values) - set(pairs)
        if missing or extra:
            raise ProfileViolationError(
                f"profile must cover exactly the split atoms; missing {sorted(missing)}, "
                f"unexpected {sorted(extra)}")
        return cls(tuple(
            ProfileEntry(p, pairs[p][0], pairs[p][1], Fraction(values[p][0]), Fraction(values[p][1]))
            for p in sorted(pairs)))

    @classmethod
    def proportional(cls, space: AtomPartition, mu: BaseMeasure,
                     inner_fraction, outer_fraction) -> "VMassProfile":
        """inner(C) = inner_fraction * mu(C), outer(C) = outer_fraction * mu(C)."""
        i, o = Fraction(inner_fraction), Fraction(outer_fraction)
        return cls.from_space(space, {p: (i * mu.mass[p], o * mu.mass[p])
                                      for p in space.split_pairs()})

    @cached_property
    def by_parent(self) -> dict[str, ProfileEntry]:
        return {e.parent: e for e in self.entries}

    @property
    def inner_total(self) -> Fraction:
        return sum((e.inner for e in self.entries), ZERO)

    @property
    def outer_total(self) -> Fraction:
        return sum((e.outer for e in self.entries), ZERO)

    def is_measurable(self) -> bool:
        return all(e.inner == e.outer for e in self.entries)


def check_profile(mu: BaseMeasure, profile: VMassProfile) -> None:
    for e in profile.entries:
        if e.parent not in mu.mass:
            raise ProfileViolationError(f"base measure has no mass for split atom {e.parent!r}")
        m = mu.mass[e.parent]
        if not 0 <= e.inner <= e.outer <= m:
            raise ProfileViolationError(
                f"need 0 <= inner <= outer <= mu(C) on {e.parent!r}; "
                f"got inner={e.inner}, outer={e.outer}, mu={m}")


@dataclass(frozen=True)
class InnerOuterTable:
    """Inner and outer measure of one (measure, profile) pair, precompiled.

    Masses are scaled to integers by a common denominator, so evaluating an
    event is a table lookup per split atom. Build one with ``inner_outer``
    when many events are evaluated against the same pair.
    """

    scale: int
    full: dict            # atom id -> scaled mass, for unsplit atoms
    half: dict            # atom id -> (parent index, side bit)
    inner_tab: tuple      # per parent: contributions indexed by side bits
    outer_tab: tuple

    def _evaluate(self, event: Iterable[str], table: tuple) -> Fraction:
        total = 0
        bits: dict[int, int] = {}
        for i in event if isinstance(event, (set, frozenset)) else frozenset(event):
            if i in self.full:
                total += self.full[i]
            elif i in self.half:
                p, b = self.half[i]
                bits[p] = bits.get(p, 0) | b
            else:
                raise NotMeasurableError(f"{i!r} is not an atom of the extended algebra")
        for p, b in bits.items():
            total += table[p][b]
        return Fraction(total, self.scale)

    def inner(self, event: Iterable[str]) -> Fraction:
        return self._evaluate(event, self.inner_tab)

    def outer(self, event: Iterable[str]) -> Fraction:
        return self._evaluate(event, self.outer_tab)


@lru_cache(maxsize=256)
def inner_outer(mu: BaseMeasure, profile: VMassProfile) -> InnerOuterTable:
    check_profile(mu, profile)
    dens = [v.denominator for _, v in mu.items]
    dens += [x.denominator for e in profile.entries for x in (e.inner, e.outer)]
    scale = math.lcm(*dens) if dens else 1

    def s(q: Fraction) -> int:
        return q.numerator * (scale // q.denominator)

    parents = {e.parent for e in profile.entries}
    full = {k: s(v) for k, v in mu.items if k not in parents}
    half, inner_tab, outer_tab = {}, [], []
    for idx, e in enumerate(profile.entries):
        m = s(mu.mass[e.parent])
        half[e.inside] = (idx, 1)
        half[e.outside] = (idx, 2)
        # bits: 1 = part inside V present, 2 = part outside V present
        inner_tab.append((0, s(e.inner), m - s(e.outer), m))
        outer_tab.append((0, s(e.outer), m - s(e.inner), m))
    return InnerOuterTable(scale, full, half, tuple(inner_tab), tuple(outer_tab))


def inner_measure(mu: BaseMeasure, profile: VMassProfile, event: Iterable[str]) -> Fraction:
    """Largest base-measurable mass inside ``event``."""
    return inner_outer(mu, profile).inner(event)


def outer_measure(mu: BaseMeasure, profile: VMassProfile, event: Iterable[str]) -> Fraction:
    """Smallest base-measurable mass covering ``event``."""
    return inner_outer(mu, profile).outer(event)


def _extension(mu: BaseMeasure, profile: VMassProfile, upper: bool) -> MeasureValue:
    check_profile(mu, profile)
    mass: dict[str, Fraction] = {}
    parents = profile.by_parent
    for k, v in mu.items:
        if k not in parents:
            mass[k] = v
    for e in profile.entries:
        vin = e.outer if upper else e.inner
        mass[e.inside] = vin
        mass[e.outside] = mu.mass[e.parent] - vin
    return MeasureValue.of(mass)


def lower_extension(mu: BaseMeasure, profile: VMassProfile) -> MeasureValue:
    """Extension giving ``V`` its inner measure: ``E -> inner(E & V) + outer(E - V)``."""
    return _extension(mu, profile, upper=False)


def upper_extension(mu: BaseMeasure, profile: VMassProfile) -> MeasureValue:
    """Extension giving ``V`` its outer measure: ``E -> outer(E & V) + inner(E - V)``."""
    return _extension(mu, profile, upper=True)


def disagreeing_extensions(mu: BaseMeasure, profile: VMassProfile) -> tuple[MeasureValue, MeasureValue]:
    if profile.is_measurable():
        raise MeasurableSetError(
            "inner and outer mass agree on every split atom; all extensions coincide on V")
    return lower_extension(mu, profile), upper_extension(mu, profile)
