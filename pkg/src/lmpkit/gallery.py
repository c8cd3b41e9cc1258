"""Builders for the counterexample LMPs, their variants, and the cospan.

Finite builders truncate the interval family to its first ``n`` members and
return :class:`SymbolicLMP` values. ``build_full_s3`` and
``build_full_pair_sum`` return pointwise descriptors for certificate mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .enumeration import interval_at
from .errors import InvalidMeasureError, ShapeError, UnsupportedDropError
from .fullmodel import INF, Copy, FullModel
from .intervals import Interval, IntervalSet, format_fraction
from .lmp import Cospan, SymbolicLMP, lmp_sum, restrict_lmp
from .measure import (MeasureValue, VMassProfile, lebesgue, lower_extension,
                      upper_extension)
from .sigma import (AtomPartition, CarrierDescriptor, GeneratorSet, PartitionRelation,
                    discrete_space, extend_by_abstract_set, sigma_closure, sum_spaces)

V = "V"
PRESETS = ("enumeration", "dyadic")


@dataclass(frozen=True)
class GalleryConfig:
    """Truncation size, the V profile and the generator preset.

    ``inner``/``outer`` are the global inner and outer mass of ``V``, spread
    over the split atoms in proportion to their length. ``per_atom`` overrides
    this with explicit ``{atom: (inner, outer)}`` values.
    """

    n_generators: int = 2
    inner: Fraction = Fraction(0)
    outer: Fraction = Fraction(1)
    per_atom: Mapping[str, tuple] | None = field(default=None, compare=False)
    mode: str = "finite"
    preset: str = "enumeration"

    def __post_init__(self):
        i, o = Fraction(self.inner), Fraction(self.outer)
        object.__setattr__(self, "inner", i)
        object.__setattr__(self, "outer", o)
        if not 0 <= i <= o <= 1:
            raise InvalidMeasureError(f"need 0 <= inner <= outer <= 1, got {i}, {o}")
        if self.mode not in ("finite", "full-descriptor"):
            raise ShapeError(f"unknown mode {self.mode!r}")
        if self.mode == "finite" and self.n_generators < 1:
            raise ShapeError("finite mode needs at least one generator")
        if self.preset not in PRESETS:
            raise ShapeError(f"unknown preset {self.preset!r}")

    def to_json(self) -> dict:
        out = {"n_generators": self.n_generators, "inner": format_fraction(self.inner),
               "outer": format_fraction(self.outer), "mode": self.mode, "preset": self.preset}
        if self.per_atom is not None:
            out["per_atom"] = {k: [format_fraction(Fraction(i)), format_fraction(Fraction(o))]
                               for k, (i, o) in sorted(self.per_atom.items())}
        return out


def dyadic_interval(index: int) -> tuple[Fraction, Fraction]:
    """(0,1/2), (1/2,1), (0,1/4), (1/4,1/2), ... by level, then left to right."""
    level, start = 1, 0
    while index >= start + 2 ** level:
        start += 2 ** level
        level += 1
    k = index - start
    return Fraction(k, 2 ** level), Fraction(k + 1, 2 ** level)


def generator_interval(cfg: GalleryConfig, index: int) -> tuple[Fraction, Fraction]:
    return dyadic_interval(index) if cfg.preset == "dyadic" else interval_at(index)


def _interval_generators(cfg: GalleryConfig) -> list[GeneratorSet]:
    return [GeneratorSet(str(a), IntervalSet.open(*generator_interval(cfg, a)))
            for a in range(cfg.n_generators)]


def _labels(cfg: GalleryConfig) -> tuple[str, ...]:
    return tuple(str(a) for a in range(cfg.n_generators)) + (INF,)


def _profile(cfg: GalleryConfig, space: AtomPartition, mu) -> VMassProfile:
    if cfg.per_atom is not None:
        return VMassProfile.from_space(space, cfg.per_atom)
    total = sum((mu.mass[p] for p in space.split_pairs()), Fraction(0))
    if total == 0:
        return VMassProfile.from_space(space, {})
    return VMassProfile.proportional(space, mu, cfg.inner / total, cfg.outer / total)


def _jumps_to(space: AtomPartition, labels, target: str) -> dict:
    """``tau_a(r) = delta_target`` for interval regions inside the a-th generator."""
    kernel = {}
    delta = MeasureValue.dirac(target)
    for atom in space.atoms:
        if not atom.intervals:
            continue
        for k, a in enumerate(labels):
            if a != INF and atom.signature[k]:
                kernel[(atom.id, a)] = delta
    return kernel


def s3_space(cfg: GalleryConfig) -> AtomPartition:
    interval = extend_by_abstract_set(sigma_closure(_interval_generators(cfg), CarrierDescriptor()), V)
    return sum_spaces(interval, discrete_space(("s", "t", "x")))


def extensions(cfg: GalleryConfig, space: AtomPartition) -> tuple[MeasureValue, MeasureValue]:
    """Lower and upper extension of length measure for the configured profile."""
    mu = lebesgue(space)
    profile = _profile(cfg, space, mu)
    return lower_extension(mu, profile), upper_extension(mu, profile)


def build_s3(cfg: GalleryConfig = GalleryConfig()):
    """The three-state counterexample (finite truncation or full descriptor)."""
    if cfg.mode == "full-descriptor":
        return build_full_s3(cfg)
    space = s3_space(cfg)
    labels = _labels(cfg)
    kernel = _jumps_to(space, labels, "x")
    m0, m1 = extensions(cfg, space)
    kernel[("s", INF)] = m0
    kernel[("t", INF)] = m1
    return SymbolicLMP(space, labels, kernel)


def build_s3_minus(cfg: GalleryConfig, dropped: str) -> SymbolicLMP:
    if dropped == "x":
        raise UnsupportedDropError("dropping the null state x changes the null-state structure")
    if dropped not in ("s", "t"):
        raise ShapeError(f"can only drop 's' or 't', not {dropped!r}")
    m = build_s3(cfg)
    return restrict_lmp(m, [r for r in m.regions if r != dropped])


def build_T(cfg: GalleryConfig = GalleryConfig(), state: str = "t") -> SymbolicLMP:
    """Length measure at ``state`` on the unsplit space; V is not an event here."""
    interval = sigma_closure(_interval_generators(cfg), CarrierDescriptor())
    space = sum_spaces(interval, discrete_space((state, "x")))
    labels = _labels(cfg)
    kernel = _jumps_to(space, labels, "x")
    kernel[(state, INF)] = MeasureValue.of(lebesgue(space).mass)
    return SymbolicLMP(space, labels, kernel)


def build_Tprime(cfg: GalleryConfig = GalleryConfig()) -> SymbolicLMP:
    return build_T(cfg, "t'")


def zigzag_maps(cfg: GalleryConfig = GalleryConfig()):
    """``(S3 - s, S3 - t, T, Id, F)``: both maps send split halves to their atom.

    ``Id`` is the identity on points of ``S3 - s``; ``F`` sends ``s`` to ``t``.
    """
    minus_s, minus_t, target = build_s3_minus(cfg, "s"), build_s3_minus(cfg, "t"), build_T(cfg)
    ident = {r: minus_s.space[r].base_id for r in minus_s.regions}
    f = {r: ("t" if r == "s" else minus_t.space[r].base_id) for r in minus_t.regions}
    return minus_s, minus_t, target, ident, f


SUM_TAGS = ("1", "2", "3")


def build_sum_example(cfg: GalleryConfig = GalleryConfig()):
    """``(S3 - t) + (S3 - s) + T'`` and the relation matching corresponding points.

    Returns ``(lmp, relation)``; the relation puts ``s``, ``t``, ``t'`` in one
    class, the three null states in another, and for each atom of the
    interval algebra both halves of it in the first two copies together with
    the atom itself in the third.
    """
    a, b, c = build_s3_minus(cfg, "t"), build_s3_minus(cfg, "s"), build_Tprime(cfg)
    t1, t2, t3 = SUM_TAGS
    m = lmp_sum(lmp_sum(a, b, (t1, t2)), c, (None, t3))
    classes = [{f"{t1}.s", f"{t2}.t", f"{t3}.t'"}, {f"{t1}.x", f"{t2}.x", f"{t3}.x"}]
    for atom in c.space.atoms:
        if atom.intervals:
            cls = {f"{t3}.{atom.id}"}
            for tag, part in ((t1, a), (t2, b)):
                cls |= {f"{tag}.{h}" for h in part.regions if part.space[h].base_id == atom.id}
            classes.append(cls)
    return m, PartitionRelation(classes)


def pair_sum_relation(cfg: GalleryConfig = GalleryConfig()):
    """``(S3 - t) + (S3 - s)`` with corresponding points related, V kept apart from its complement."""
    m, rel = build_sum_example(cfg)
    t1, t2, t3 = SUM_TAGS
    pair = restrict_lmp(m, [r for r in m.regions if not r.startswith(f"{t3}.")])
    classes = []
    for cls in rel.classes:
        kept = {r for r in cls if not r.startswith(f"{t3}.")}
        sides: dict = {}
        for r in kept:
            atom = pair.space[r]
            sides.setdefault(atom.split, set()).add(r)
        classes.extend(sides.values())
    return pair, PartitionRelation(classes)


def is_sum_shape(m: SymbolicLMP, event) -> bool:
    """Is ``event`` of the form ``(B + B + B) u F``, with B from the interval algebra?

    ``B`` must be the same union of unsplit interval atoms in all three copies
    and ``F`` a set of discrete states.
    """
    t1, t2, t3 = SUM_TAGS
    ev = frozenset(event)
    base = m.space.base_event(ev)
    if base is None:
        return False
    per_copy = []
    for tag in (t1, t2, t3):
        per_copy.append(frozenset(i[len(tag) + 1:] for i in base
                                  if i.startswith(f"{tag}.") and m.space[_any_part(m, i)].intervals))
    return per_copy[0] == per_copy[1] == per_copy[2]


def _any_part(m: SymbolicLMP, base_id: str) -> str:
    if base_id in m.space:
        return base_id
    inside, _ = m.space.split_pairs()[base_id]
    return inside


def build_unclosable_cospan(cfg: GalleryConfig = GalleryConfig(), swap: bool = False) -> Cospan:
    """Two V-extended LMPs on ``{0} + (0,1]`` over a common unsplit target.

    Interval regions jump to the point ``0``; from ``0`` the left process
    moves by the lower extension, the right one by the upper extension, and
    the target by length measure. ``swap`` exchanges the two sources.
    """
    carrier = CarrierDescriptor(True, ("0",), Interval(0, 1, False, True))
    gens = _interval_generators(cfg) + [GeneratorSet("zero", points={"0"})]
    base = sigma_closure(gens, carrier)
    space = extend_by_abstract_set(base, V)
    label = "a"
    mu = lebesgue(space)
    profile = _profile(cfg, space, mu)
    lower, upper = lower_extension(mu, profile), upper_extension(mu, profile)
    if swap:
        lower, upper = upper, lower

    def jumps(sp: AtomPartition, at_zero: MeasureValue) -> dict:
        k = {(r.id, label): MeasureValue.dirac("0") for r in sp.atoms if r.intervals}
        k[("0", label)] = at_zero
        return k

    left = SymbolicLMP(space, (label,), jumps(space, lower))
    right = SymbolicLMP(space, (label,), jumps(space, upper))
    target = SymbolicLMP(base, (label,), jumps(base, MeasureValue.of(lebesgue(base).mass)))
    leg = {r: space[r].base_id for r in space.ids}
    return Cospan(left, right, target, dict(leg), dict(leg))


build_theorem3_cospan = build_unclosable_cospan


def build_full_s3(cfg: GalleryConfig = GalleryConfig()) -> FullModel:
    return FullModel((Copy("", True, (("s", "lower"), ("t", "upper"), ("x", "null"))),),
                     cfg.inner, cfg.outer)


def build_full_pair_sum(cfg: GalleryConfig = GalleryConfig()) -> FullModel:
    """Pointwise ``(S3 - t) + (S3 - s)``; the states are ``1.s`` and ``2.t``."""
    t1, t2, _ = SUM_TAGS
    return FullModel((Copy(t1, True, ((f"{t1}.s", "lower"), (f"{t1}.x", "null"))),
                      Copy(t2, True, ((f"{t2}.t", "upper"), (f"{t2}.x", "null")))),
                     cfg.inner, cfg.outer)


def build_full_triple_sum(cfg: GalleryConfig = GalleryConfig()) -> FullModel:
    """Pointwise triple sum; its third copy has no V, so no gap can be measured there."""
    t1, t2, t3 = SUM_TAGS
    return FullModel((Copy(t1, True, ((f"{t1}.s", "lower"), (f"{t1}.x", "null"))),
                      Copy(t2, True, ((f"{t2}.t", "upper"), (f"{t2}.x", "null"))),
                      Copy(t3, False, ((f"{t3}.t'", "base"), (f"{t3}.x", "null")))),
                     cfg.inner, cfg.outer)
