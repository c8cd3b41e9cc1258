"""Labelled Markov processes over symbolic spaces.

States are grouped into regions, which are exactly the atoms of the space,
and every kernel is constant on a region. That makes each ``tau_a(., X)`` a
step function over atoms, so measurability holds by construction and only
the sub-probability side has to be checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (InvalidKernelError, LabelError, LabelMismatchError,
                     NotStableError, ShapeError)
from .intervals import IntervalSet
from .measure import ZERO, MeasureValue
from .sigma import Atom, AtomPartition, SigmaSubalgebra, body_id, restrict, sum_spaces

RegionMap = Mapping[str, str]


@dataclass(frozen=True, eq=False)
class SymbolicLMP:
    space: AtomPartition
    labels: tuple[str, ...]
    kernel: Mapping[tuple[str, str], MeasureValue] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise LabelError("duplicate labels")
        kernel = {k: v for k, v in dict(self.kernel).items() if v.items}
        object.__setattr__(self, "kernel", kernel)

    @property
    def regions(self) -> tuple[str, ...]:
        return self.space.ids

    def row(self, region: str, label: str) -> MeasureValue:
        return self.kernel.get((region, label), _ZERO_MEASURE)

    def tau(self, region: str, label: str, event: Iterable[str]) -> Fraction:
        return self.row(region, label)(event)

    def check_label(self, label: str) -> None:
        if label not in self.labels:
            raise LabelError(f"unknown label {label!r}")

    def __eq__(self, other):
        return (isinstance(other, SymbolicLMP) and self.space == other.space
                and self.labels == other.labels and self.kernel == other.kernel)

    def __repr__(self):
        return f"SymbolicLMP({len(self.regions)} regions, labels={list(self.labels)})"


_ZERO_MEASURE = MeasureValue()


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    regions: int
    labels: tuple[str, ...]
    achieved: Mapping[str, tuple[Fraction, ...]]
    notes: tuple[str, ...] = ()


def validate_lmp(m: SymbolicLMP, strict_probability: bool = False) -> ValidationReport:
    """Check every kernel row is a sub-probability measure on the space's atoms.

    ``achieved`` lists, per label, the distinct masses a row puts on single
    atoms together with the row totals; any event mass is a sum of these, and
    since rows are constant on regions every threshold preimage is a union
    of regions. ``strict_probability`` additionally demands each non-zero row
    to have total mass exactly 1.
    """
    atoms = m.space.by_id
    for (region, label), mv in m.kernel.items():
        if region not in atoms:
            raise ShapeError(f"kernel row for unknown region {region!r}")
        if label not in m.labels:
            raise LabelError(f"kernel row uses undeclared label {label!r}")
        stray = mv.support - atoms.keys()
        if stray:
            raise ShapeError(f"row ({region}, {label}) puts mass on unknown atoms {sorted(stray)}")
        total = mv.total
        if total > 1:
            raise InvalidKernelError(f"row ({region}, {label}) has total mass {total} > 1")
        if strict_probability and total != 1:
            raise InvalidKernelError(f"row ({region}, {label}) has total mass {total} != 1")
    achieved = {}
    for label in m.labels:
        vals = {ZERO}
        for region in m.regions:
            row = m.row(region, label)
            vals.update(row.mass.values())
            vals.add(row.total)
        achieved[label] = tuple(sorted(vals))
    notes = ("threshold preimages are unions of regions: kernels are constant on atoms",)
    return ValidationReport(True, len(m.regions), m.labels, achieved, notes)


def _retag_measure(mv: MeasureValue, tag: str | None) -> MeasureValue:
    if not tag:
        return mv
    return MeasureValue(tuple(sorted((f"{tag}.{k}", v) for k, v in mv.items)))


def lmp_sum(a: SymbolicLMP, b: SymbolicLMP,
            tags: tuple[str | None, str | None] = (None, None)) -> SymbolicLMP:
    """Direct sum; a state of one summand never reaches the other."""
    if set(a.labels) != set(b.labels) and a.regions and b.regions:
        raise LabelMismatchError(f"labels differ: {list(a.labels)} vs {list(b.labels)}")
    labels = a.labels if a.regions or not b.regions else b.labels
    space = sum_spaces(a.space, b.space, tags)
    kernel = {}
    for src, tag in ((a, tags[0]), (b, tags[1])):
        for (region, label), mv in src.kernel.items():
            rid = f"{tag}.{region}" if tag else region
            kernel[(rid, label)] = _retag_measure(mv, tag)
    return SymbolicLMP(space, labels, kernel)


def restrict_lmp(m: SymbolicLMP, keep: Iterable[str]) -> SymbolicLMP:
    """Sub-LMP on the regions ``keep``; mass leaving them is dropped."""
    space = restrict(m.space, keep)
    kept = space.by_id.keys()
    kernel = {}
    for (region, label), mv in m.kernel.items():
        if region in kept:
            kernel[(region, label)] = MeasureValue(tuple((k, v) for k, v in mv.items if k in kept))
    return SymbolicLMP(space, m.labels, kernel)


def rename_regions(m: SymbolicLMP, renaming: Mapping[str, str], space: AtomPartition) -> SymbolicLMP:
    """Carry ``m`` over to ``space`` along a bijective renaming of regions."""
    kernel = {}
    for (region, label), mv in m.kernel.items():
        kernel[(renaming[region], label)] = MeasureValue.of(
            {renaming[k]: v for k, v in mv.items})
    return SymbolicLMP(space, m.labels, kernel)


@dataclass(frozen=True)
class ZigzagReport:
    ok: bool
    reason: str = ""
    witness: tuple | None = None   # (src region, label, dst atom, lhs, rhs)


def preimage(f: RegionMap, event: Iterable[str]) -> frozenset:
    ev = frozenset(event)
    return frozenset(r for r, img in f.items() if img in ev)


def compose(f: RegionMap, g: RegionMap) -> dict[str, str]:
    """``g`` after ``f``."""
    return {r: g[img] for r, img in f.items()}


def check_zigzag(f: RegionMap, src: SymbolicLMP, dst: SymbolicLMP) -> ZigzagReport:
    """Check surjectivity, measurability and the transfer equation on dst atoms.

    Equality on single target atoms is enough: both sides are measures in
    the target event, so they agree on every finite union as well.
    """
    missing = set(src.regions) - set(f)
    if missing:
        raise ShapeError(f"map is not total; missing {sorted(missing)}")
    unknown_src = set(f) - set(src.regions)
    unknown_dst = set(f.values()) - set(dst.regions)
    if unknown_src or unknown_dst:
        raise ShapeError(f"map mentions unknown regions {sorted(unknown_src | unknown_dst)}")
    if set(src.labels) != set(dst.labels):
        raise LabelMismatchError("zig-zag needs equal label sets")
    uncovered = set(dst.regions) - set(f.values())
    if uncovered:
        return ZigzagReport(False, f"not surjective: {sorted(uncovered)} not hit")
    pre = {q: preimage(f, [q]) for q in dst.regions}
    # measurability: each preimage is a union of src atoms, i.e. an event of src
    for q, p in pre.items():
        src.space.event(p)
    for r in src.regions:
        fr = f[r]
        for a in src.labels:
            row, drow = src.row(r, a), dst.row(fr, a)
            for q in dst.regions:
                lhs, rhs = row(pre[q]), drow.mass.get(q, ZERO)
                if lhs != rhs:
                    return ZigzagReport(False, "transfer equation fails", (r, a, q, lhs, rhs))
    return ZigzagReport(True)


def merged_atom(space: AtomPartition, block: frozenset) -> Atom:
    members = [space[i] for i in sorted(block)]
    if len(members) == 1:
        return members[0]
    pairs = space.split_pairs()
    halves = [a for a in members if a.split is not None]
    whole = all(pairs[a.parent][0] in block and pairs[a.parent][1] in block for a in halves)
    copies = {a.copy for a in members if a.intervals}
    if whole and len(copies) <= 1 and not any(a.opaque for a in members):
        iv = IntervalSet()
        for a in members:
            iv = iv | a.intervals
        pts = frozenset().union(*(a.points for a in members))
        copy = copies.pop() if copies else ""
        bid = body_id(iv, pts)
        if copy and iv:
            bid = f"{copy}.{bid}"
        return Atom(bid, (), iv, pts, copy=copy)
    bid = "<" + "|".join(a.id for a in members) + ">"
    return Atom(bid, (), IntervalSet(), frozenset(), opaque=True)


def quotient_space(space: AtomPartition, blocks) -> AtomPartition:
    """One atom per block, in block order."""
    blocks = [frozenset(b) for b in blocks]
    atoms = tuple(merged_atom(space, b) for b in blocks)
    symbol = space.symbol if any(a.split is not None for a in atoms) else None
    recipe = {"quotient": space.recipe, "blocks": tuple(tuple(sorted(b)) for b in blocks)}
    return AtomPartition(atoms, (), symbol, recipe=recipe)


def quotient_by_subalgebra(m: SymbolicLMP, sub: SigmaSubalgebra) -> tuple[SymbolicLMP, dict[str, str]]:
    """Coarsen ``m`` onto the atoms of a stable sub-algebra.

    Returns the quotient LMP and the projection of old regions onto blocks.
    """
    from .bisim import is_stable

    sub.check_over(m.space)
    report = is_stable(m, sub)
    if not report.stable:
        raise NotStableError(f"sub-algebra is not stable: {report.witness}", report.witness)
    space = quotient_space(m.space, sub.blocks)
    new_atoms = space.atoms
    projection = {r: new_atoms[k].id for k, b in enumerate(sub.blocks) for r in b}
    kernel = {}
    for k, b in enumerate(sub.blocks):
        rep = min(b)
        for a in m.labels:
            row = m.row(rep, a)
            kernel[(new_atoms[k].id, a)] = MeasureValue.of(
                {nb.id: row(sub.blocks[j]) for j, nb in enumerate(new_atoms)})
    return SymbolicLMP(space, m.labels, kernel), projection


@dataclass(frozen=True, eq=False)
class Cospan:
    """Two LMPs with maps into a common target."""

    left: SymbolicLMP
    right: SymbolicLMP
    target: SymbolicLMP
    left_map: Mapping[str, str]
    right_map: Mapping[str, str]
