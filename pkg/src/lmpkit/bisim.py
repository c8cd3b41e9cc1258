"""Stability, event and state bisimilarity on finite symbolic LMPs.

On a finite symbolic LMP both notions reduce to the same partition
refinement: the coarsest partition of regions in which related regions give
equal mass to every class, for every label. Two independent refinement
procedures are provided (signature refinement and splitter refinement) and
a brute-force oracle checks both on small instances.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import TooManyRegionsError, UnsupportedCospanError
from .lmp import Cospan, SymbolicLMP, check_zigzag
from .measure import ZERO
from .sigma import PartitionRelation, SigmaSubalgebra, relation_of_family

MAX_BRUTE_FORCE_REGIONS = 6


@dataclass(frozen=True)
class StabilityWitness:
    event: frozenset
    label: str
    threshold: Fraction
    above: str      # region with mass > threshold
    below: str      # region of the same block with mass <= threshold


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    witness: StabilityWitness | None = None


def _block_masses(m: SymbolicLMP, blocks: tuple[frozenset, ...]) -> dict:
    """mass[(region, label)] -> tuple of masses on each block."""
    where = {x: k for k, b in enumerate(blocks) for x in b}
    out = {}
    for r in m.regions:
        for a in m.labels:
            vec = [ZERO] * len(blocks)
            for atom, v in m.row(r, a).items:
                vec[where[atom]] += v
            out[(r, a)] = tuple(vec)
    return out


def is_stable(m: SymbolicLMP, sub: SigmaSubalgebra) -> StabilityReport:
    """Is ``{r : tau_a(r, A) > t}`` in ``sub`` for every A in ``sub``, label, threshold?

    Reduction used: this holds iff regions sharing a block give equal mass
    to every single block. The whole space is tried first as the witness
    event, then each block.
    """
    sub.check_over(m.space)
    blocks = sub.blocks
    masses = _block_masses(m, blocks)
    full = m.space.full_event()
    candidates = [(full, None)] + [(b, k) for k, b in enumerate(blocks)]
    for event, k in candidates:
        for a in m.labels:
            for b in blocks:
                vals = {}
                for r in sorted(b):
                    vec = masses[(r, a)]
                    vals[r] = sum(vec, ZERO) if k is None else vec[k]
                hi = max(vals, key=lambda r: (vals[r], r))
                lo = min(vals, key=lambda r: (vals[r], r))
                if vals[hi] != vals[lo]:
                    t = (vals[hi] + vals[lo]) / 2
                    return StabilityReport(False, StabilityWitness(event, a, t, hi, lo))
    return StabilityReport(True)


def smallest_stable_algebra(m: SymbolicLMP) -> SigmaSubalgebra:
    """Coarsest stable partition, by refining on block-mass signatures."""
    blocks = (frozenset(m.regions),) if m.regions else ()
    while True:
        masses = _block_masses(m, blocks)
        where = {x: k for k, b in enumerate(blocks) for x in b}
        groups: dict[tuple, list] = defaultdict(list)
        for r in m.regions:
            key = (where[r],) + tuple(masses[(r, a)] for a in m.labels)
            groups[key].append(r)
        new = tuple(frozenset(g) for g in groups.values())
        if len(new) == len(blocks):
            return SigmaSubalgebra(blocks)
        blocks = new


def event_bisimilarity(m: SymbolicLMP) -> PartitionRelation:
    return relation_of_family(m.space, smallest_stable_algebra(m))


def largest_state_bisimulation(m: SymbolicLMP) -> PartitionRelation:
    """Greatest state bisimulation, by splitter-driven refinement.

    Each class serves as a splitter: every class is cut by the value of
    ``tau_a(., splitter)``. Pieces produced by a cut are queued as new
    splitters until nothing changes.
    """
    if not m.regions:
        return PartitionRelation([])
    classes: list[frozenset] = [frozenset(m.regions)]
    queue: list[frozenset] = [classes[0]]
    while queue:
        splitter = queue.pop()
        for a in m.labels:
            value = {r: m.tau(r, a, splitter) for r in m.regions}
            nxt = []
            for c in classes:
                parts: dict[Fraction, set] = defaultdict(set)
                for r in c:
                    parts[value[r]].add(r)
                if len(parts) == 1:
                    nxt.append(c)
                    continue
                pieces = [frozenset(p) for p in parts.values()]
                nxt.extend(pieces)
                queue.extend(pieces)
            classes = nxt
    return PartitionRelation(classes)


@dataclass(frozen=True)
class StateBisimReport:
    ok: bool
    witness: tuple | None = None    # (s, t, label, event Q, tau(s,Q), tau(t,Q))


def check_state_bisimulation(m: SymbolicLMP, rel: PartitionRelation | Iterable[tuple[str, str]]
                             ) -> StateBisimReport:
    """Do related regions agree on every measurable ``rel``-closed event?

    Closed events are the unions of classes, so by additivity it suffices to
    compare related regions on single classes. A plain pair list is accepted
    and closed under equivalence first.
    """
    if not isinstance(rel, PartitionRelation):
        rel = PartitionRelation.from_pairs(m.regions, rel)
    if rel.universe != frozenset(m.regions):
        rel = PartitionRelation.from_pairs(m.regions, rel.pairs())
    masses = _block_masses(m, rel.classes)
    for k, q in enumerate(rel.classes):
        for c in rel.classes:
            members = sorted(c)
            first = members[0]
            for a in m.labels:
                v0 = masses[(first, a)][k]
                for other in members[1:]:
                    v = masses[(other, a)][k]
                    if v != v0:
                        return StateBisimReport(False, (first, other, a, q, v0, v))
    return StateBisimReport(True)


def _set_partitions(items: list) -> Iterator[list[list]]:
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1:]
        yield [[head]] + part


def brute_force_largest_bisimulation(m: SymbolicLMP) -> PartitionRelation:
    """Join of all equivalences passing the state-bisimulation check (testing oracle)."""
    if len(m.regions) > MAX_BRUTE_FORCE_REGIONS:
        raise TooManyRegionsError(
            f"{len(m.regions)} regions; brute force is limited to {MAX_BRUTE_FORCE_REGIONS}")
    joined = PartitionRelation.discrete(m.regions)
    for part in _set_partitions(list(m.regions)):
        rel = PartitionRelation(part)
        if check_state_bisimulation(m, rel).ok:
            joined = joined.join(rel)
    if not check_state_bisimulation(m, joined).ok:
        raise AssertionError("join of state bisimulations is not a state bisimulation")
    return joined


# -- semi-pullback obstruction ----------------------------------------------


@dataclass(frozen=True)
class Obstruction:
    event: frozenset
    region: str
    label: str
    left_value: Fraction
    right_value: Fraction
    explanation: str


def _identity_carried(f, src: SymbolicLMP, dst: SymbolicLMP) -> bool:
    for r, img in f.items():
        if img != src.space[r].base_id or img not in dst.space:
            return False
    return True


def semipullback_obstruction(cospan: Cospan) -> Obstruction | None:
    """Certify that no span of zig-zags can close an identity-carried cospan.

    Both legs carry each point to itself, so any completing span has equal
    legs ``f = g``. A state ``u`` over a region ``r`` then satisfies
    ``left(r, V) = rho(u, f^-1 V) = rho(u, g^-1 V) = right(r, V)``; a region
    where the two kernels weigh ``V`` differently contradicts this. Returns
    None when no region does.
    """
    left, right, target = cospan.left, cospan.right, cospan.target
    if left.space.ids != right.space.ids:
        raise UnsupportedCospanError("both sources must share one base space")
    for f, src in ((cospan.left_map, left), (cospan.right_map, right)):
        if not _identity_carried(f, src, target):
            raise UnsupportedCospanError("legs must be identity-carried")
        report = check_zigzag(f, src, target)
        if not report.ok:
            raise UnsupportedCospanError(f"a leg is not a zig-zag: {report.reason} {report.witness}")
    v_event = left.space.abstract_event(True)
    if not v_event:
        return None
    for r in left.regions:
        for a in left.labels:
            lv, rv = left.tau(r, a, v_event), right.tau(r, a, v_event)
            if lv != rv:
                why = (f"legs agree pointwise, so f = g; a state over {r} would need "
                       f"mass {lv} and {rv} on the same preimage of V")
                return Obstruction(v_event, r, a, lv, rv, why)
    return None
