"""Finite unions of real intervals with rational endpoints.

Sets are kept in normal form: sorted, pairwise disjoint, non-empty and with
touching pieces merged, so structural equality is set equality.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable


def to_fraction(value) -> Fraction:
    """Parse ``"p/q"``, an int or a Fraction. Floats are rejected."""
    if isinstance(value, float):
        raise TypeError("floats are not accepted; use 'p/q' strings")
    return Fraction(value)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.is_empty():
            raise ValueError(f"empty interval {self!r}")

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def render(self) -> str:
        if self.lo == self.hi:
            return "{" + format_fraction(self.lo) + "}"
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_fraction(self.lo)},{format_fraction(self.hi)}{right}"


_INTERVAL_RE = re.compile(r"^\s*([\[(])\s*([-0-9/]+)\s*,\s*([-0-9/]+)\s*([\])])\s*$")
_POINT_RE = re.compile(r"^\s*\{\s*([-0-9/]+)\s*\}\s*$")


def parse_interval(text: str) -> Interval:
    m = _POINT_RE.match(text)
    if m:
        p = to_fraction(m.group(1))
        return Interval(p, p, True, True)
    m = _INTERVAL_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse interval {text!r}")
    return Interval(to_fraction(m.group(2)), to_fraction(m.group(3)),
                    m.group(1) == "[", m.group(4) == "]")


class IntervalSet:
    """Normalized finite union of intervals."""

    __slots__ = ("pieces", "_hash")

    def __init__(self, pieces: Iterable[Interval] = ()):
        pieces = list(pieces)
        if pieces:
            pieces = list(_combine([tuple(pieces)], lambda bits: bits[0]))
        self.pieces: tuple[Interval, ...] = tuple(pieces)
        self._hash = hash(self.pieces)

    @classmethod
    def _raw(cls, pieces: tuple[Interval, ...]) -> "IntervalSet":
        obj = cls.__new__(cls)
        obj.pieces = pieces
        obj._hash = hash(pieces)
        return obj

    @classmethod
    def open(cls, lo, hi) -> "IntervalSet":
        return cls([Interval(lo, hi)])

    @classmethod
    def parse(cls, items: Iterable[str]) -> "IntervalSet":
        return cls(parse_interval(t) for t in items)

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.pieces == other.pieces

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"IntervalSet({self.render()!r})"

    def __bool__(self):
        return bool(self.pieces)

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.pieces)

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return self._op(other, lambda b: b[0] and b[1])

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return self._op(other, lambda b: b[0] or b[1])

    def __sub__(self, other: "IntervalSet") -> "IntervalSet":
        return self._op(other, lambda b: b[0] and not b[1])

    def _op(self, other, fn) -> "IntervalSet":
        return IntervalSet._raw(tuple(_combine([self.pieces, other.pieces], fn)))

    def issubset(self, other: "IntervalSet") -> bool:
        return not (self - other)

    @property
    def length(self) -> Fraction:
        return sum((p.length for p in self.pieces), Fraction(0))

    def render(self) -> str:
        return "u".join(p.render() for p in self.pieces) if self.pieces else "{}"

    def to_json(self) -> list[str]:
        return [p.render() for p in self.pieces]


def _member(pieces: tuple[Interval, ...], x: Fraction) -> bool:
    return any(x in p for p in pieces)


def _combine(operands: list[tuple[Interval, ...]], fn: Callable[[tuple[bool, ...]], bool]):
    """Evaluate a pointwise boolean combination of bounded interval unions.

    The line is cut at every endpoint; each elementary piece (an endpoint or
    the open gap between two consecutive endpoints) is either wholly in or
    wholly out of every operand, so probing one point per piece decides it.
    ``fn`` must map all-False to False.
    """
    cuts = sorted({e for pieces in operands for p in pieces for e in (p.lo, p.hi)})
    elementary: list[tuple[Fraction, Fraction, bool]] = []
    for i, c in enumerate(cuts):
        elementary.append((c, c, fn(tuple(_member(ps, c) for ps in operands))))
        if i + 1 < len(cuts):
            mid = (c + cuts[i + 1]) / 2
            elementary.append((c, cuts[i + 1], fn(tuple(_member(ps, mid) for ps in operands))))
    run_start = None
    for idx, (lo, hi, inside) in enumerate(elementary):
        if inside and run_start is None:
            run_start = idx
        if run_start is not None and (not inside or idx == len(elementary) - 1):
            last = idx if inside else idx - 1
            s_lo, s_hi, _ = elementary[run_start]
            e_lo, e_hi, _ = elementary[last]
            lo_closed = s_lo == s_hi
            hi_closed = e_lo == e_hi
            yield Interval(s_lo, e_hi, lo_closed, hi_closed)
            run_start = None
