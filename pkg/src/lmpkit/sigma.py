"""Symbolic measurable spaces over finite generator families.

A space is represented by its minterm atoms. Atoms carry a concrete body
(a union of subintervals plus named discrete points) unless they come from
splitting by an abstract set ``V``, in which case only the enclosing atom is
known and the flag ``split`` says which side of ``V`` they lie on.

Every value here is immutable; every operation returns a new value.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .errors import (InvalidGeneratorError, NameCollisionError, ShapeError,
                     UnsupportedNestingError)
from .intervals import Interval, IntervalSet

OPEN_UNIT = Interval(0, 1)


@dataclass(frozen=True)
class CarrierDescriptor:
    """A subinterval part (the open unit interval by default) plus named points."""

    interval_part: bool = True
    discrete_points: tuple[str, ...] = ()
    interval: Interval = OPEN_UNIT

    def __post_init__(self):
        object.__setattr__(self, "discrete_points", tuple(self.discrete_points))
        if len(set(self.discrete_points)) != len(self.discrete_points):
            raise InvalidGeneratorError("discrete point names must be unique")
        if not self.interval_part and not self.discrete_points:
            raise InvalidGeneratorError("carrier has no points at all")

    @property
    def interval_set(self) -> IntervalSet:
        return IntervalSet([self.interval]) if self.interval_part else IntervalSet()


@dataclass(frozen=True)
class GeneratorSet:
    """A generating set: interval union and/or points, or an abstract symbol."""

    name: str
    intervals: IntervalSet = field(default_factory=IntervalSet)
    points: frozenset = frozenset()
    abstract: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "points", frozenset(self.points))
        if self.abstract is not None and (self.intervals or self.points):
            raise InvalidGeneratorError(
                f"abstract generator {self.name!r} cannot have a pointwise body")

    @classmethod
    def interval(cls, name: str, *pieces: str) -> "GeneratorSet":
        return cls(name, IntervalSet.parse(pieces))


@dataclass(frozen=True)
class Atom:
    id: str
    signature: tuple
    intervals: IntervalSet
    points: frozenset
    split: bool | None = None
    parent: str | None = None
    copy: str = ""
    opaque: bool = False

    @property
    def is_abstract(self) -> bool:
        return self.split is not None or self.opaque

    @property
    def is_discrete(self) -> bool:
        return not self.intervals and not self.is_abstract

    @property
    def concrete_body(self) -> tuple[IntervalSet, frozenset] | None:
        if self.is_abstract:
            return None
        return self.intervals, self.points

    @property
    def base_id(self) -> str:
        """Id of the unsplit atom this one came from."""
        return self.parent if self.parent is not None else self.id

    def tagged(self, tag: str) -> "Atom":
        return replace(
            self,
            id=f"{tag}.{self.id}",
            points=frozenset(f"{tag}.{p}" for p in self.points),
            parent=None if self.parent is None else f"{tag}.{self.parent}",
            copy=tag if not self.copy else f"{tag}.{self.copy}",
        )


def body_id(intervals: IntervalSet, points: Iterable[str]) -> str:
    pts = sorted(points)
    ptxt = (pts[0] if len(pts) == 1 else "{" + ",".join(pts) + "}") if pts else ""
    if intervals and pts:
        return f"{intervals.render()}+{ptxt}"
    return intervals.render() if intervals else ptxt


@dataclass(frozen=True)
class AtomPartition:
    atoms: tuple[Atom, ...]
    generators: tuple[str, ...] = ()
    symbol: str | None = None
    recipe: Mapping = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        ids = [a.id for a in self.atoms]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise NameCollisionError(f"duplicate atom ids {dupes}")

    @cached_property
    def by_id(self) -> dict[str, Atom]:
        return {a.id: a for a in self.atoms}

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __getitem__(self, atom_id: str) -> Atom:
        try:
            return self.by_id[atom_id]
        except KeyError:
            raise ShapeError(f"unknown atom {atom_id!r}") from None

    def __contains__(self, atom_id) -> bool:
        return atom_id in self.by_id

    @property
    def points(self) -> frozenset:
        return frozenset(p for a in self.atoms for p in a.points)

    @property
    def copies(self) -> frozenset:
        return frozenset(a.copy for a in self.atoms if a.intervals or a.split is not None)

    def event(self, ids: Iterable[str]) -> frozenset:
        """Validate an atom-id collection and return it as an event."""
        ev = frozenset(ids)
        unknown = ev - self.by_id.keys()
        if unknown:
            raise ShapeError(f"unknown atoms {sorted(unknown)}")
        return ev

    def full_event(self) -> frozenset:
        return frozenset(self.by_id)

    def abstract_event(self, inside: bool = True, copy: str | None = None) -> frozenset:
        """All atoms on one side of the abstract set (optionally in one copy)."""
        return frozenset(a.id for a in self.atoms
                         if a.split is inside and (copy is None or a.copy == copy))

    def complement(self, event: Iterable[str]) -> frozenset:
        return self.full_event() - frozenset(event)

    def split_pairs(self) -> dict[str, tuple[str, str]]:
        """Map each split parent to its (inside, outside) atom ids."""
        out: dict[str, list] = {}
        for a in self.atoms:
            if a.split is not None:
                out.setdefault(a.parent, [None, None])[0 if a.split else 1] = a.id
        return {k: (v[0], v[1]) for k, v in out.items()}

    def base_event(self, event: Iterable[str]) -> frozenset | None:
        """Rewrite ``event`` over unsplit atoms, or None if it cuts some atom by V."""
        ev = frozenset(event)
        out = set()
        for parent, (vin, vout) in self.split_pairs().items():
            has = (vin in ev, vout in ev)
            if has == (True, True):
                out.add(parent)
            elif has != (False, False):
                return None
        out.update(i for i in ev if self[i].split is None)
        return frozenset(out)


EMPTY_SPACE = AtomPartition((), recipe={"empty": True})


def _check_generator(g: GeneratorSet, carrier: CarrierDescriptor) -> None:
    unknown = g.points - set(carrier.discrete_points)
    if unknown:
        raise InvalidGeneratorError(f"generator {g.name!r} names unknown points {sorted(unknown)}")
    if g.intervals and not g.intervals.issubset(carrier.interval_set):
        raise InvalidGeneratorError(f"generator {g.name!r} leaves the carrier interval")


def sigma_closure(generators: Iterable[GeneratorSet], carrier: CarrierDescriptor) -> AtomPartition:
    """Minterm atoms of the algebra generated by ``generators`` over ``carrier``.

    Empty minterms are dropped. An abstract generator splits every
    interval-only atom of the concrete closure.
    """
    generators = list(generators)
    concrete = [g for g in generators if g.abstract is None]
    symbols = sorted({g.abstract for g in generators if g.abstract is not None})
    if len(symbols) > 1:
        raise UnsupportedNestingError(f"at most one abstract symbol per space, got {symbols}")
    for g in concrete:
        _check_generator(g, carrier)

    cells = [(carrier.interval_set, frozenset(carrier.discrete_points), ())]
    for g in concrete:
        nxt = []
        for iv, pts, sig in cells:
            for inside in (True, False):
                niv = iv & g.intervals if inside else iv - g.intervals
                npts = pts & g.points if inside else pts - g.points
                if niv or npts:
                    nxt.append((niv, npts, sig + (inside,)))
        cells = nxt

    atoms = tuple(Atom(body_id(iv, pts), sig, iv, pts) for iv, pts, sig in cells)
    recipe = {
        "carrier": carrier,
        "generators": tuple(concrete),
    }
    space = AtomPartition(atoms, tuple(g.name for g in concrete), recipe=recipe)
    if symbols:
        space = extend_by_abstract_set(space, symbols[0])
    return space


def discrete_space(names: Iterable[str]) -> AtomPartition:
    """Every named point is its own atom."""
    names = tuple(names)
    return sigma_closure([GeneratorSet(n, points={n}) for n in names],
                         CarrierDescriptor(False, names))


def extend_by_abstract_set(space: AtomPartition, symbol: str,
                           split_scope: Iterable[str] | None = None) -> AtomPartition:
    """Split each atom of ``split_scope`` into its parts inside and outside ``symbol``.

    ``split_scope`` defaults to every interval-only atom that is not yet split.
    """
    if space.symbol is not None and space.symbol != symbol:
        raise UnsupportedNestingError(
            f"space already extended by {space.symbol!r}; cannot add {symbol!r}")
    if split_scope is None:
        scope = [a.id for a in space.atoms if a.intervals and not a.points and not a.is_abstract]
    else:
        scope = list(split_scope)
    for i in scope:
        a = space[i]
        if a.is_abstract:
            raise UnsupportedNestingError(f"atom {i!r} is already abstract")
        if a.points or not a.intervals:
            raise InvalidGeneratorError(f"atom {i!r} has discrete points and cannot be split")
    if not scope:
        return space
    scope_set = set(scope)
    atoms = []
    for a in space.atoms:
        if a.id in scope_set:
            atoms.append(replace(a, id=f"{a.id}&{symbol}", split=True, parent=a.id))
            atoms.append(replace(a, id=f"{a.id}&~{symbol}", split=False, parent=a.id))
        else:
            atoms.append(a)
    recipe = {"extend": space.recipe, "abstract_symbol": symbol, "split_scope": tuple(scope)}
    return AtomPartition(tuple(atoms), space.generators, symbol, recipe=recipe)


def sum_spaces(a: AtomPartition, b: AtomPartition,
               tags: tuple[str | None, str | None] = (None, None)) -> AtomPartition:
    """Disjoint union of two spaces; ``tags`` prefix names of either side."""
    ta, tb = tags
    left = tuple(x.tagged(ta) for x in a.atoms) if ta else a.atoms
    right = tuple(x.tagged(tb) for x in b.atoms) if tb else b.atoms
    left_sp = AtomPartition(left)
    right_sp = AtomPartition(right)
    clash = left_sp.points & right_sp.points
    if clash:
        raise NameCollisionError(f"point names collide: {sorted(clash)}")
    copies = left_sp.copies & right_sp.copies
    if copies:
        raise NameCollisionError(
            f"both summands have an interval part in copy {sorted(copies)}; tag them")
    ids = set(left_sp.ids) & set(right_sp.ids)
    if ids:
        raise NameCollisionError(f"atom ids collide: {sorted(ids)}")
    if a.symbol and b.symbol and a.symbol != b.symbol:
        raise UnsupportedNestingError("summands use different abstract symbols")

    # Signatures: left generators, right generators, then one bit for the side.
    na, nb = len(a.generators), len(b.generators)
    gens = tuple(f"{ta}.{g}" if ta else g for g in a.generators) + \
        tuple(f"{tb}.{g}" if tb else g for g in b.generators) + ("<left>",)
    atoms = tuple(replace(x, signature=tuple(x.signature) + (False,) * nb + (True,)) for x in left) + \
        tuple(replace(x, signature=(False,) * na + tuple(x.signature) + (False,)) for x in right)
    if not a.atoms:
        atoms, gens = right, b.generators
    elif not b.atoms:
        atoms, gens = left, a.generators
    recipe = {"sum": (a.recipe, b.recipe), "tags": (ta, tb)}
    return AtomPartition(atoms, gens, a.symbol or b.symbol, recipe=recipe)


def restrict(space: AtomPartition, keep: Iterable[str]) -> AtomPartition:
    """The subspace made of the atoms in ``keep`` with the trace algebra."""
    keep_set = space.event(keep)
    atoms = tuple(a for a in space.atoms if a.id in keep_set)
    symbol = space.symbol if any(a.split is not None for a in atoms) else None
    recipe = {"restrict": space.recipe, "keep": tuple(a.id for a in atoms)}
    return AtomPartition(atoms, space.generators, symbol, recipe=recipe)


def restrict_to_abstract(space: AtomPartition, inside: bool = True) -> AtomPartition:
    """The trace of the space on ``V`` (or on its complement)."""
    return restrict(space, [a.id for a in space.atoms if a.split is inside])


# -- sub-algebras and relations ----------------------------------------------


class _Blocks:
    """A partition of a finite id set, stored canonically."""

    __slots__ = ("parts", "_index")

    def __init__(self, parts: Iterable[Iterable[str]]):
        canon = sorted((frozenset(p) for p in parts), key=lambda p: sorted(p))
        if any(not p for p in canon):
            raise ShapeError("partition blocks must be non-empty")
        index: dict[str, int] = {}
        for k, p in enumerate(canon):
            for x in p:
                if x in index:
                    raise ShapeError(f"{x!r} lies in two blocks")
                index[x] = k
        self.parts: tuple[frozenset, ...] = tuple(canon)
        self._index = index

    @classmethod
    def discrete(cls, ids: Iterable[str]):
        return cls([x] for x in ids)

    @classmethod
    def trivial(cls, ids: Iterable[str]):
        ids = list(ids)
        return cls([ids] if ids else [])

    @classmethod
    def from_pairs(cls, ids: Iterable[str], pairs: Iterable[tuple[str, str]]):
        """Equivalence closure of a (symmetric or not) relation."""
        ids = list(ids)
        parent = {x: x for x in ids}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s, t in pairs:
            if s not in parent or t not in parent:
                raise ShapeError(f"pair ({s!r}, {t!r}) mentions an unknown id")
            parent[find(s)] = find(t)
        groups: dict[str, list] = {}
        for x in ids:
            groups.setdefault(find(x), []).append(x)
        return cls(groups.values())

    @property
    def universe(self) -> frozenset:
        return frozenset(self._index)

    def index_of(self, x: str) -> int:
        return self._index[x]

    def part_of(self, x: str) -> frozenset:
        return self.parts[self._index[x]]

    def related(self, x: str, y: str) -> bool:
        return self._index[x] == self._index[y]

    def is_union_of_parts(self, event: Iterable[str]) -> bool:
        ev = frozenset(event)
        return all(self.part_of(x) <= ev for x in ev)

    def refines(self, other: "_Blocks") -> bool:
        """True if every part of self lies inside one part of ``other``."""
        return all(len({other.index_of(x) for x in p}) == 1 for p in self.parts)

    def join(self, other: "_Blocks"):
        pairs = [(min(p), x) for q in (self, other) for p in q.parts for x in p]
        return type(self).from_pairs(self.universe | other.universe, pairs)

    def unions(self) -> Iterator[frozenset]:
        """Every union of parts (exponential; for small partitions)."""
        n = len(self.parts)
        for mask in range(1 << n):
            yield frozenset().union(*(self.parts[i] for i in range(n) if mask >> i & 1))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __eq__(self, other):
        return isinstance(other, _Blocks) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        inner = ", ".join("{" + ", ".join(sorted(p)) + "}" for p in self.parts)
        return f"{type(self).__name__}([{inner}])"

    def to_json(self) -> list[list[str]]:
        return [sorted(p) for p in self.parts]


class SigmaSubalgebra(_Blocks):
    """A finite sub-algebra, given by the partition of atoms into its atoms."""

    __slots__ = ()

    @property
    def blocks(self) -> tuple[frozenset, ...]:
        return self.parts

    def contains(self, event: Iterable[str]) -> bool:
        return self.is_union_of_parts(event)

    def check_over(self, space: AtomPartition) -> "SigmaSubalgebra":
        if self.universe != space.full_event():
            raise ShapeError("blocks do not partition the atoms of the space")
        return self


class PartitionRelation(_Blocks):
    """An equivalence relation on regions, stored as its classes."""

    __slots__ = ()

    @property
    def classes(self) -> tuple[frozenset, ...]:
        return self.parts

    def pairs(self) -> Iterator[tuple[str, str]]:
        for c in self.parts:
            for x in sorted(c):
                for y in sorted(c):
                    yield x, y

    def to_dot(self, name: str = "partition") -> str:
        lines = [f"digraph {name} {{"]
        for k, c in enumerate(self.parts):
            lines.append(f"  subgraph cluster_{k} {{")
            lines.append(f'    label="class {k}";')
            for x in sorted(c):
                esc = x.replace('"', '\\"')
                lines.append(f'    "{esc}";')
            lines.append("  }")
        lines.append("}")
        return "\n".join(lines) + "\n"


def relation_of_family(space: AtomPartition, sub: SigmaSubalgebra) -> PartitionRelation:
    """Atoms are related iff no member of ``sub`` separates them."""
    sub.check_over(space)
    return PartitionRelation(sub.blocks)


def relation_of_sets(space: AtomPartition, family: Iterable[Iterable[str]]) -> PartitionRelation:
    """Relation induced by an arbitrary family of events (not necessarily an algebra)."""
    events = [space.event(e) for e in family]
    groups: dict[tuple, list] = {}
    for i in space.ids:
        groups.setdefault(tuple(i in e for e in events), []).append(i)
    return PartitionRelation(groups.values())


def r_closed_sets(space: AtomPartition, rel: PartitionRelation) -> SigmaSubalgebra:
    """The algebra of events that are unions of classes of ``rel``."""
    sub = SigmaSubalgebra(rel.classes)
    return sub.check_over(space)


def generator_events(space: AtomPartition) -> list[frozenset]:
    """Each generator (and the abstract set, if any) as an event of ``space``."""
    events = [frozenset(a.id for a in space.atoms if a.signature[k])
              for k in range(len(space.generators))]
    if space.symbol is not None:
        events.append(space.abstract_event(True))
    return events
