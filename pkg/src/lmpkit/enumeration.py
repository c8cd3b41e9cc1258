"""A fixed, replayable enumeration of the open rational subintervals of (0, 1).

Rationals of [0, 1] are listed by increasing denominator, then increasing
numerator, keeping only fractions in lowest terms::

    0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, 1/5, ...

Write ``r_k`` for the k-th entry. Interval number ``k*(k-1)//2 + j`` (with
``j < k``) is the open interval between ``r_j`` and ``r_k``. Stage ``k`` thus
lists every interval whose later endpoint is ``r_k``, ordered by the rank of
the other endpoint. Every open interval with rational endpoints in [0, 1]
appears exactly once, so the map is a bijection from the naturals.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoWitnessError
from .intervals import Interval, IntervalSet

_phi: list[int] = [0, 1]
# _first_rank[d] = rank of the first fraction with denominator d (d >= 2).
_first_rank: list[int] = [0, 0, 2]


def _grow(limit: int) -> None:
    """Extend the totient and rank tables to cover denominators <= limit."""
    old = len(_phi) - 1
    if limit <= old:
        return
    limit = max(limit, 2 * old)
    phi = list(range(limit + 1))
    for p in range(2, limit + 1):
        if phi[p] == p:
            for m in range(p, limit + 1, p):
                phi[m] -= phi[m] // p
    _phi[:] = phi
    while len(_first_rank) <= limit + 1:
        d = len(_first_rank) - 1
        _first_rank.append(_first_rank[d] + _phi[d])


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _coprime_upto(n: int, primes: list[int]) -> int:
    """How many of 1..n are coprime to the product of ``primes``."""
    total = 0
    k = len(primes)
    for mask in range(1 << k):
        prod, bits = 1, 0
        for i in range(k):
            if mask >> i & 1:
                prod *= primes[i]
                bits += 1
        total += (-1) ** bits * (n // prod)
    return total


def rational_rank(q) -> int:
    """Position of ``q`` in the rational listing."""
    q = Fraction(q)
    if not 0 <= q <= 1:
        raise ValueError(f"{q} is outside [0, 1]")
    if q == 0:
        return 0
    if q == 1:
        return 1
    d, n = q.denominator, q.numerator
    _grow(d)
    return _first_rank[d] + _coprime_upto(n - 1, _prime_factors(d))


def rational_unrank(rank: int) -> Fraction:
    if rank < 0:
        raise ValueError("rank must be non-negative")
    if rank < 2:
        return Fraction(rank)
    while _first_rank[-1] <= rank:
        _grow(2 * (len(_phi) - 1))
    d = bisect.bisect_right(_first_rank, rank) - 1
    offset = rank - _first_rank[d]
    primes = _prime_factors(d)
    # smallest n with coprime_upto(n) == offset + 1
    lo, hi = 1, d - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _coprime_upto(mid, primes) >= offset + 1:
            hi = mid
        else:
            lo = mid + 1
    return Fraction(lo, d)


def interval_index(lo, hi) -> int:
    """Enumeration position of the open interval (lo, hi)."""
    j, k = rational_rank(lo), rational_rank(hi)
    if Fraction(lo) >= Fraction(hi):
        raise ValueError("need lo < hi")
    j, k = min(j, k), max(j, k)
    return k * (k - 1) // 2 + j


def interval_at(index: int) -> tuple[Fraction, Fraction]:
    """Endpoints (lo, hi) of the interval at ``index``."""
    if index < 0:
        raise ValueError("index must be non-negative")
    k = (1 + math.isqrt(1 + 8 * index)) // 2
    while k * (k - 1) // 2 > index:
        k -= 1
    while (k + 1) * k // 2 <= index:
        k += 1
    j = index - k * (k - 1) // 2
    a, b = rational_unrank(j), rational_unrank(k)
    return (a, b) if a < b else (b, a)


def simplest_between(lo: Fraction, hi: Fraction | None) -> Fraction:
    """The fraction of least denominator strictly between ``lo`` and ``hi``.

    ``hi=None`` stands for +infinity. Requires ``0 <= lo < hi``. The answer
    is unique and also has the least numerator.
    """
    fl = math.floor(lo)
    if hi is None or fl + 1 < hi:
        return Fraction(fl + 1)
    inner_hi = None if lo == fl else 1 / (lo - fl)
    return fl + 1 / simplest_between(1 / (hi - fl), inner_hi)


def _min_rank(cands: list[Fraction]) -> Fraction:
    return min(cands, key=lambda f: (f.denominator, f.numerator))


ENUMERATION_NAME = "denominator-shell-v1"


@dataclass(frozen=True)
class SeparatingFamilyDescriptor:
    kind: str = "rational_intervals"

    def __post_init__(self):
        if self.kind not in ("none", "rational_intervals"):
            raise ValueError(f"unknown family kind {self.kind!r}")

    def member(self, index: int) -> IntervalSet:
        if self.kind != "rational_intervals":
            raise NoWitnessError("family has no members")
        lo, hi = interval_at(index)
        return IntervalSet([Interval(lo, hi)])

    def to_json(self) -> dict:
        return {"kind": self.kind, "enumeration": ENUMERATION_NAME}

    @classmethod
    def from_json(cls, data) -> "SeparatingFamilyDescriptor":
        if data.get("enumeration", ENUMERATION_NAME) != ENUMERATION_NAME:
            raise ValueError(f"unsupported enumeration {data['enumeration']!r}")
        return cls(data["kind"])


RATIONAL_INTERVALS = SeparatingFamilyDescriptor("rational_intervals")


def separation_witness(p, q, fam: SeparatingFamilyDescriptor = RATIONAL_INTERVALS) -> int:
    """Least index ``a`` with ``p`` in interval ``a`` and ``q`` outside it.

    For ``p < q`` the answer is ``(0, m)`` with ``m`` the lowest-ranked
    rational in ``(p, q]``; for ``p > q`` it is ``(m, 1)`` with ``m`` the
    lowest-ranked rational in ``[q, p)``.
    """
    p, q = Fraction(p), Fraction(q)
    if fam.kind != "rational_intervals":
        raise NoWitnessError(f"family {fam.kind!r} does not separate points")
    if p == q:
        raise NoWitnessError(f"cannot separate {p} from itself")
    for v in (p, q):
        if not 0 < v < 1:
            raise NoWitnessError(f"{v} is not a point of (0, 1)")
    if p < q:
        m = _min_rank([simplest_between(p, q), q])
        return interval_index(0, m)
    m = _min_rank([simplest_between(q, p), q])
    return interval_index(m, 1)
