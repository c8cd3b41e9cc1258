"""The positive modal logic with ``T``, conjunction and ``<a>_q`` diamonds.

Concrete syntax::

    T
    (phi & psi)
    <label>_{p/q} phi

``<a>_q phi`` holds at a region when the kernel for ``a`` gives mass at
least ``q`` to the regions satisfying ``phi``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import FormulaSyntaxError, ThresholdRangeError
from .intervals import format_fraction
from .lmp import SymbolicLMP
from .sigma import PartitionRelation, relation_of_sets


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(("and", self.left, self.right)))

    def __hash__(self):
        # cached: evaluation memoizes on deep formulas
        return self._hash

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Diamond:
    label: str
    q: Fraction
    body: "Formula"

    def __post_init__(self):
        q = Fraction(self.q)
        if not 0 <= q <= 1:
            raise ThresholdRangeError(f"threshold {q} lies outside [0, 1]")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "_hash", hash(("dia", self.label, q, self.body)))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return render_formula(self)


Formula = Top | And | Diamond
TOP = Top()


def render_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "T"
    if isinstance(f, And):
        return f"({render_formula(f.left)} & {render_formula(f.right)})"
    return f"<{f.label}>_{{{format_fraction(f.q)}}} {render_formula(f.body)}"


def modal_depth(f: Formula) -> int:
    if isinstance(f, Top):
        return 0
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)


def labels_of(f: Formula) -> frozenset:
    if isinstance(f, Top):
        return frozenset()
    if isinstance(f, And):
        return labels_of(f.left) | labels_of(f.right)
    return labels_of(f.body) | {f.label}


# -- parser -----------------------------------------------------------------

_LABEL = re.compile(r"[A-Za-z0-9_.'\-]+")
_NUMBER = re.compile(r"-?\d+(?:/\d+)?")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise FormulaSyntaxError(f"expected {ch!r}, found {got!r}", self.pos)
        self.pos += 1

    def match(self, rx: re.Pattern, what: str) -> str:
        self.skip()
        m = rx.match(self.text, self.pos)
        if not m:
            raise FormulaSyntaxError(f"expected {what}", self.pos)
        self.pos = m.end()
        return m.group(0)

    def formula(self) -> Formula:
        ch = self.peek()
        if ch == "T":
            self.pos += 1
            return TOP
        if ch == "(":
            self.pos += 1
            left = self.formula()
            self.expect("&")
            right = self.formula()
            self.expect(")")
            return And(left, right)
        if ch == "<":
            self.pos += 1
            label = self.match(_LABEL, "a label")
            self.expect(">")
            self.expect("_")
            self.expect("{")
            start = self.pos
            num = self.match(_NUMBER, "a rational threshold")
            try:
                q = Fraction(num)
            except ZeroDivisionError:
                raise FormulaSyntaxError("zero denominator", start) from None
            self.expect("}")
            if not 0 <= q <= 1:
                raise ThresholdRangeError(f"threshold {num} at position {start} lies outside [0, 1]")
            return Diamond(label, q, self.formula())
        raise FormulaSyntaxError(f"unexpected {ch or 'end of input'!r}", self.pos)


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    if p.peek():
        raise FormulaSyntaxError(f"trailing input {p.text[p.pos:]!r}", p.pos)
    return f


# -- semantics --------------------------------------------------------------


def eval_formula(f: Formula, m: SymbolicLMP, _memo: dict | None = None) -> frozenset:
    """Regions satisfying ``f``."""
    memo = {} if _memo is None else _memo
    if f in memo:
        return memo[f]
    if isinstance(f, Top):
        out = frozenset(m.regions)
    elif isinstance(f, And):
        out = eval_formula(f.left, m, memo) & eval_formula(f.right, m, memo)
    else:
        m.check_label(f.label)
        inner = eval_formula(f.body, m, memo)
        out = frozenset(r for r in m.regions if m.tau(r, f.label, inner) >= f.q)
    memo[f] = out
    return out


# -- enumeration ------------------------------------------------------------


def conjunction(parts: Sequence[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``T``."""
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def _diamonds(labels, thresholds, depth) -> list[Diamond]:
    """Distinct diamonds whose bodies are canonical formulas of depth < ``depth``."""
    below = list(_canonical(labels, thresholds, depth - 1))
    return sorted({Diamond(a, q, psi) for a in labels for q in thresholds for psi in below},
                  key=render_formula)


def _canonical(labels, thresholds, depth) -> Iterator[Formula]:
    yield TOP
    if depth == 0:
        return
    diamonds = _diamonds(labels, thresholds, depth)
    for k in range(1, len(diamonds) + 1):
        for combo in itertools.combinations(diamonds, k):
            yield conjunction(combo)


def enumerate_formulas(labels: Iterable[str], thresholds: Iterable, depth: int) -> Iterator[Formula]:
    """Canonical formulas of modal depth at most ``depth``, generated lazily.

    A canonical formula is ``T`` or a left-nested conjunction of a set of
    distinct diamonds in rendering order, with canonical bodies. Every
    formula is equivalent to exactly one of these up to reordering and
    duplicating conjuncts and dropping ``T`` conjuncts.
    """
    labels = sorted(set(labels))
    thresholds = sorted({Fraction(q) for q in thresholds})
    for q in thresholds:
        if not 0 <= q <= 1:
            raise ThresholdRangeError(f"threshold {q} lies outside [0, 1]")
    return _canonical(labels, thresholds, depth)


# -- logical equivalence ----------------------------------------------------


def _intersection_closure(sets: Iterable[frozenset], universe: frozenset) -> frozenset:
    closed = {universe}
    frontier = list({s for s in sets} - closed)
    closed.update(frontier)
    while frontier:
        new = []
        for a in frontier:
            for b in list(closed):
                c = a & b
                if c not in closed:
                    closed.add(c)
                    new.append(c)
        frontier = new
    return frozenset(closed)


def denotation_layers(m: SymbolicLMP, thresholds: Iterable | None = None
                      ) -> Iterator[frozenset]:
    """Denotation families of formulas of depth 0, 1, 2, ...

    Each family is closed under intersection, as the formulas are under
    conjunction. Without explicit ``thresholds`` a diamond over a denotation
    ``E`` uses the masses ``tau_a(r, E)`` actually reached by some region;
    every other threshold defines one of those sets or the empty set. The
    iterator stops after the first family equal to its predecessor.
    """
    universe = frozenset(m.regions)
    fixed = None if thresholds is None else sorted({Fraction(q) for q in thresholds})
    layer = frozenset({universe})
    yield layer
    while True:
        modal = set()
        for e in layer:
            for a in m.labels:
                value = {r: m.tau(r, a, e) for r in m.regions}
                qs = fixed if fixed is not None else sorted(set(value.values()))
                for q in qs:
                    modal.add(frozenset(r for r in m.regions if value[r] >= q))
        nxt = _intersection_closure(modal, universe)
        if nxt == layer:
            return
        layer = nxt
        yield layer


def logical_equivalence(m: SymbolicLMP, depth: int | None = None,
                        thresholds: Iterable | None = None) -> PartitionRelation:
    """Regions satisfying the same formulas of depth at most ``depth``.

    ``depth=None`` runs to stabilization.
    """
    last = None
    for k, layer in enumerate(denotation_layers(m, thresholds)):
        last = layer
        if depth is not None and k >= depth:
            break
    return relation_of_sets(m.space, last)


def stabilization_depth(m: SymbolicLMP, thresholds: Iterable | None = None) -> int:
    """Least depth after which ``logical_equivalence`` no longer changes."""
    rels = [relation_of_sets(m.space, layer) for layer in denotation_layers(m, thresholds)]
    k = len(rels) - 1
    while k > 0 and rels[k - 1] == rels[k]:
        k -= 1
    return k
