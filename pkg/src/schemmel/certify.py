"""
Certified enumeration of sparsely Schemmel totient numbers.

n is in F_r when n is in B_r and S_r(n) < S_r(m) for every larger m in B_r.
The quantifier over all m > n is split at a horizon Y: values in (n, Y] are
sieved, and values beyond Y are covered by ``tail_lower_bound``.

Tail bound. Let D_t be the product of the primes p_{b+1} .. p_t (b = b(r)),
and t the largest index with D_t <= Y. Any m in B_r with D_u <= m < D_{u+1}
has at most u - b prime factors, each at least p_{b+1}, so

    S_r(m) / m >= prod_{i=b+1}^{u} (1 - r / p_i).

For u = t this gives S_r(m) > Y * prod (p_i - r) / prod p_i; for u > t it
gives S_r(m) >= prod_{i=b+1}^{u} (p_i - r) >= prod_{i=b+1}^{t+1} (p_i - r).
The bound is the minimum of the floor of the first and the second.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .arith import (DEFAULT_MAX_ENTRIES, DEFAULT_SEGMENT, PRIMES, U128_MAX,
                    FactoredInteger, base_index, check_width, factorize, in_coprimality_class, iter_sr_segments,
                    schemmel, sieve_sr_range)
from .errors import InconclusiveError

DEFAULT_HORIZON_CAP = 10 ** 10
_NO_VALUE = np.iinfo(np.int64).max


@dataclass(frozen=True)
class TailBound:
    r: int
    Y: int
    t: int
    bound: int


@dataclass(frozen=True)
class FrRecord:
    n: int
    s_r: int
    factors: FactoredInteger
    horizon: int

    @property
    def degenerate(self) -> bool:
        return self.n == 1

    def to_dict(self):
        out = {"n": self.n, "s_r": self.s_r, "factors": self.factors.as_lists(),
               "horizon": self.horizon}
        if self.degenerate:
            out["degenerate"] = True
        return out


@dataclass
class EnumerationCertificate:
    r: int
    X: int
    Y: int
    tail: TailBound
    members: List[FrRecord] = field(default_factory=list)
    rounds: int = 1

    def values(self) -> List[int]:
        return [m.n for m in self.members]


@dataclass(frozen=True)
class Verdict:
    """Outcome of ``is_sparsely``: a member record, or why n is not a member."""
    n: int
    r: int
    member: bool
    record: Optional[FrRecord] = None
    refuter: Optional[int] = None
    reason: str = ""

    def to_dict(self):
        out = {"n": self.n, "r": self.r, "member": self.member, "reason": self.reason}
        if self.record is not None:
            out["record"] = self.record.to_dict()
        if self.refuter is not None:
            out["refuter"] = self.refuter
            out["refuter_s_r"] = schemmel(self.refuter, self.r)
        return out


def interval_boundary(r: int, t: int) -> int:
    """D_t = p_{b+1} * ... * p_t (empty product 1 when t == b)."""
    b = base_index(r)
    return math.prod(PRIMES.nth(i) for i in range(b + 1, t + 1))


def _interval_index(Y: int, r: int):
    """Largest t with D_t <= Y, together with D_t and prod (p_i - r)."""
    b = base_index(r)
    t, d, s = b, 1, 1
    while True:
        p = PRIMES.nth(t + 1)
        if d * p > Y:
            return t, d, s
        t, d, s = t + 1, d * p, s * (p - r)


def tail_lower_bound(Y: int, r: int) -> TailBound:
    """Lower bound on S_r(m) valid for every m in B_r with m > Y."""
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    b = base_index(r)
    if Y < PRIMES.nth(b + 1):
        raise ValueError(f"horizon {Y} is below the first interval boundary p_{b + 1}")
    t, d, s = _interval_index(Y, r)
    scaled = check_width(Y * s, U128_MAX, "tail-bound product")
    nxt = check_width(s * (PRIMES.nth(t + 1) - r), U128_MAX, "tail-bound product")
    return TailBound(r, Y, t, min(scaled // d, nxt))


def initial_horizon(X: int, r: int) -> int:
    """max(2X, first interval boundary above X)."""
    t, d, _ = _interval_index(X, r)
    return max(2 * X, d * PRIMES.nth(t + 1))


def _grown_horizon(Y: int, tail: TailBound) -> int:
    return min(interval_boundary(tail.r, tail.t + 2), 2 * Y)


def _min_over(lo: int, hi: int, r: int, segment_size: int) -> int:
    """min of S_r over B_r in [lo, hi] (``_NO_VALUE`` when empty)."""
    best = _NO_VALUE
    for _, vals in iter_sr_segments(lo, hi, r, segment_size):
        pos = vals[vals > 0]
        if len(pos):
            best = min(best, int(pos.min()))
    return best


def enumerate_sparsely(r: int, X: int, horizon_cap: int = DEFAULT_HORIZON_CAP,
                       segment_size: int = DEFAULT_SEGMENT, threads: int = 1,
                       max_entries: int = DEFAULT_MAX_ENTRIES,
                       start_horizon: Optional[int] = None) -> EnumerationCertificate:
    """Exactly F_r intersected with [1, X], with the horizon that certifies it.

    The S_r table for [1, X] is held in memory; (X, Y] is streamed and only
    its minimum kept. A candidate n (S_r(n) below the sieved suffix minimum)
    is accepted once S_r(n) < T(Y); otherwise Y grows and the new stretch
    is streamed. Raises InconclusiveError past ``horizon_cap``.

    ``start_horizon`` overrides the default first Y = max(2X, next D_t > X).
    """
    if r < 1 or X < 1:
        raise ValueError("need r >= 1 and X >= 1")
    table = sieve_sr_range(1, X, r, segment_size=segment_size,
                           max_entries=max_entries, threads=threads)
    vals = table.values
    masked = np.where(vals > 0, vals, _NO_VALUE)
    # suffix[i] = min over indices > i within [1, X]
    suffix = np.empty_like(masked)
    suffix[:-1] = np.minimum.accumulate(masked[::-1])[::-1][1:]
    suffix[-1] = _NO_VALUE

    Y = min(start_horizon or initial_horizon(X, r), horizon_cap)
    if Y < max(X, PRIMES.nth(base_index(r) + 1)):
        raise ValueError(f"horizon cap {horizon_cap} is below the enumeration bound")
    beyond = _min_over(X + 1, Y, r, segment_size) if Y > X else _NO_VALUE
    rounds = 1
    while True:
        tail = tail_lower_bound(Y, r)
        cand = (vals > 0) & (vals < np.minimum(suffix, beyond))
        undecided = np.flatnonzero(cand & (vals >= tail.bound)) + 1
        if len(undecided) == 0:
            break
        if Y >= horizon_cap:
            raise InconclusiveError(
                f"horizon cap {horizon_cap} reached with {len(undecided)} undecided candidates",
                undecided.tolist(), Y)
        new_Y = min(_grown_horizon(Y, tail), horizon_cap)
        beyond = min(beyond, _min_over(Y + 1, new_Y, r, segment_size))
        Y = new_Y
        rounds += 1
    members = [FrRecord(int(n), int(vals[n - 1]), factorize(int(n)), Y)
               for n in (np.flatnonzero(cand) + 1).tolist()]
    return EnumerationCertificate(r, X, Y, tail, members, rounds)


def is_sparsely(n: int, r: int, horizon_cap: int = DEFAULT_HORIZON_CAP,
                segment_size: int = DEFAULT_SEGMENT) -> Verdict:
    """Decide n in F_r, returning the smallest refuter when it is not.

    Scans upward from n + 1 in growing segments; the scan stops at the first
    m in B_r with S_r(m) <= S_r(n), or once the tail bound at the scanned
    horizon exceeds S_r(n).
    """
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    if not in_coprimality_class(n, r):
        return Verdict(n, r, False, reason="not in B_r")
    s = schemmel(n, r)
    first_boundary = PRIMES.nth(base_index(r) + 1)
    lo, step = n + 1, 1 << 12
    while True:
        if lo - 1 >= first_boundary and tail_lower_bound(lo - 1, r).bound > s:
            record = FrRecord(n, s, factorize(n), lo - 1)
            return Verdict(n, r, True, record=record, reason="certified by tail bound")
        if lo - 1 >= horizon_cap:
            raise InconclusiveError(f"horizon cap {horizon_cap} reached deciding {n}",
                                    [n], lo - 1)
        hi = min(lo + step - 1, horizon_cap)
        vals = sieve_sr_range(lo, hi, r, segment_size=segment_size).values
        hit = np.flatnonzero((vals > 0) & (vals <= s))
        if len(hit):
            m = lo + int(hit[0])
            return Verdict(n, r, False, refuter=m, reason="refuted")
        lo = hi + 1
        step = min(step * 2, segment_size)
