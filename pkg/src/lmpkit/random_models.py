"""Seeded random instances for property tests and the acceptance corpus."""

from __future__ import annotations

import random
from fractions import Fraction

from .intervals import Interval, IntervalSet
from .lmp import SymbolicLMP
from .measure import BaseMeasure, MeasureValue, VMassProfile
from .sigma import (AtomPartition, CarrierDescriptor, GeneratorSet, SigmaSubalgebra,
                    discrete_space, extend_by_abstract_set, sigma_closure)

# few distinct values, so that ties (and hence non-trivial bisimulations) are common
MASSES = (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))


def _row(rng: random.Random, atoms, values=MASSES) -> MeasureValue:
    mass, left = {}, Fraction(1)
    for a in rng.sample(list(atoms), len(atoms)):
        v = rng.choice([x for x in values if x <= left])
        if v:
            mass[a] = v
            left -= v
    return MeasureValue.of(mass)


def region_names(n: int) -> list[str]:
    return [f"r{i}" for i in range(n)]


def random_lmp(rng: random.Random, n_regions: int, n_labels: int) -> SymbolicLMP:
    """Sub-probability kernels on ``n_regions`` discrete points."""
    space = discrete_space(region_names(n_regions))
    labels = tuple(f"a{k}" for k in range(n_labels))
    kernel = {}
    for r in space.ids:
        for a in labels:
            if rng.random() < 0.2:
                continue
            kernel[(r, a)] = _row(rng, space.ids)
    return SymbolicLMP(space, labels, kernel)


def random_lumpable_lmp(rng: random.Random, n_regions: int, n_labels: int
                        ) -> tuple[SymbolicLMP, SigmaSubalgebra]:
    """An LMP together with a stable partition, built block by block.

    Regions of one block share the mass they send to each block; inside the
    target block that mass is split at random.
    """
    names = region_names(n_regions)
    rng.shuffle(names)
    cuts = sorted(rng.sample(range(1, n_regions), rng.randint(0, n_regions - 1)))
    blocks = [names[i:j] for i, j in zip([0] + cuts, cuts + [n_regions])]
    space = discrete_space(region_names(n_regions))
    labels = tuple(f"a{k}" for k in range(n_labels))
    kernel = {}
    for a in labels:
        for src in blocks:
            to_block = _row(rng, range(len(blocks)))
            for r in src:
                mass = {}
                for k, v in to_block.items:
                    for atom, w in _split(rng, v, blocks[k]).items():
                        mass[atom] = mass.get(atom, Fraction(0)) + w
                kernel[(r, a)] = MeasureValue.of(mass)
    return SymbolicLMP(space, labels, kernel), SigmaSubalgebra(blocks)


def _split(rng: random.Random, total: Fraction, atoms) -> dict:
    weights = [rng.randint(0, 3) for _ in atoms]
    if not any(weights):
        weights[0] = 1
    s = sum(weights)
    return {a: total * w / s for a, w in zip(atoms, weights) if w}


def random_lift(rng: random.Random, m: SymbolicLMP, max_copies: int = 2
                ) -> tuple[SymbolicLMP, dict[str, str]]:
    """A larger LMP with a zig-zag onto ``m``: every region becomes 1..max_copies copies."""
    copies = {r: [f"{r}#{k}" for k in range(rng.randint(1, max_copies))] for r in m.regions}
    names = [c for r in m.regions for c in copies[r]]
    space = discrete_space(names)
    f = {c: r for r, cs in copies.items() for c in cs}
    kernel = {}
    for c in names:
        for a in m.labels:
            mass = {}
            for target, v in m.row(f[c], a).items:
                mass.update(_split(rng, v, copies[target]))
            kernel[(c, a)] = MeasureValue.of(mass)
    return SymbolicLMP(space, m.labels, kernel), f


def random_fraction(rng: random.Random, max_den: int = 12) -> Fraction:
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(0, d), d)


def random_profile_pair(rng: random.Random, strict: bool = False) -> tuple[Fraction, Fraction]:
    """``inner <= outer`` in [0, 1]; ``strict`` forces ``inner < outer``."""
    while True:
        a, b = sorted((random_fraction(rng), random_fraction(rng)))
        if not strict or a < b:
            return a, b


def random_extension_instance(rng: random.Random, max_base: int = 8
                              ) -> tuple[AtomPartition, BaseMeasure, VMassProfile]:
    """Up to ``max_base`` interval atoms of (0,1), a random subset split by V.

    Base masses are arbitrary (total at most 1), profiles satisfy
    ``0 <= inner <= outer <= mu(C)``.
    """
    k = rng.randint(1, max_base)
    cuts = sorted(rng.sample([Fraction(i, 4 * max_base) for i in range(1, 4 * max_base)], k - 1))
    gens = [GeneratorSet(f"g{i}", IntervalSet([Interval(0, c, False, True)]))
            for i, c in enumerate(cuts)]
    base = sigma_closure(gens, CarrierDescriptor())
    scope = [a.id for a in base.atoms if rng.random() < 0.5]
    space = extend_by_abstract_set(base, "V", scope) if scope else base
    raw = [Fraction(rng.randint(0, 6)) for _ in base.atoms]
    total = sum(raw) or Fraction(1)
    scale = Fraction(rng.randint(1, 4), 4)
    mu = BaseMeasure.of({a.id: w / total * scale for a, w in zip(base.atoms, raw)})
    values = {}
    for c in scope:
        m = mu.mass[c]
        x, y = sorted((m * random_fraction(rng), m * random_fraction(rng)))
        values[c] = (x, y)
    return space, mu, VMassProfile.from_space(space, values)
