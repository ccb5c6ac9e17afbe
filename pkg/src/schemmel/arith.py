"""
Prime tables, factorization and the Schemmel totient S_r.

S_r is multiplicative with S_r(p^a) = 0 when p <= r and p^(a-1) (p - r)
otherwise. S_1 is Euler's phi. B_r, the support of S_r, is the set of
integers whose smallest prime factor exceeds r (1 included).

Integer policy: inputs are limited to unsigned 64-bit values and products
used in certificates to 128 bits. Python integers never wrap, so the limits
are enforced by explicit checks that raise ArithmeticOverflow.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ArithmeticOverflow, MemoryBudgetError, ResourceLimitError

U64_MAX = (1 << 64) - 1
U128_MAX = (1 << 128) - 1

DEFAULT_SEGMENT = 1 << 22
DEFAULT_MAX_ENTRIES = 1 << 27
# numpy sieve works in int64
SIEVE_HI_MAX = (1 << 62)


def check_width(value: int, limit: int = U64_MAX, what: str = "value") -> int:
    if value < 0 or value > limit:
        raise ArithmeticOverflow(f"{what} {value} exceeds {limit.bit_length()}-bit width")
    return value


def _eratosthenes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    mask[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mask[p]:
            mask[p * p::2 * p] = False
    return np.flatnonzero(mask).astype(np.int64)


class PrimeTable:
    """Growable table of primes; ``nth(i)`` is 1-indexed so ``nth(1) == 2``."""

    def __init__(self, limit: int = 1 << 16, max_limit: int = 1 << 32):
        self.max_limit = max_limit
        self.limit = 1
        self.primes = np.array([], dtype=np.int64)
        self._list: List[int] = []
        self.extend_to(limit)

    def extend_to(self, limit: int) -> None:
        if limit <= self.limit:
            return
        if limit > self.max_limit:
            raise ResourceLimitError(
                f"prime table limit {limit} exceeds configured cap {self.max_limit}")
        # grow geometrically so repeated small extensions stay cheap
        new_limit = min(max(limit, 2 * self.limit), self.max_limit)
        self.primes = _eratosthenes(new_limit)
        self._list = self.primes.tolist()
        self.limit = new_limit

    def __len__(self) -> int:
        return len(self._list)

    def nth(self, i: int) -> int:
        if i < 1:
            raise ValueError(f"prime index must be >= 1, got {i}")
        while len(self._list) < i:
            # p_i < i (ln i + ln ln i) for i >= 6
            est = int(i * (math.log(i) + math.log(math.log(i)))) + 16 if i >= 6 else 16
            self.extend_to(max(est, 2 * self.limit))
        return self._list[i - 1]

    def index_of(self, p: int) -> int:
        """Return i with p_i == p; ValueError if p is not prime."""
        self.extend_to(p)
        i = bisect.bisect_left(self._list, p)
        if i == len(self._list) or self._list[i] != p:
            raise ValueError(f"{p} is not prime")
        return i + 1

    def pi(self, x: int) -> int:
        """Number of primes <= x."""
        self.extend_to(x)
        return bisect.bisect_right(self._list, x)

    def upto(self, x: int) -> List[int]:
        count = self.pi(x)  # may extend the table
        return self._list[:count]

    def array_upto(self, x: int) -> np.ndarray:
        count = self.pi(x)
        return self.primes[:count]

    def next_prime_after(self, x: int) -> int:
        """Smallest prime > x."""
        return self.nth(self.pi(x) + 1)

    def is_prime(self, n: int) -> bool:
        if n < 2:
            return False
        if n <= self.limit:
            i = bisect.bisect_left(self._list, n)
            return i < len(self._list) and self._list[i] == n
        return factorize(n).factors == ((n, 1),)


PRIMES = PrimeTable()


def nth_prime(i: int) -> int:
    return PRIMES.nth(i)


def base_index(r: int) -> int:
    """b(r): index of the largest prime <= r, with b(1) = 0."""
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    return PRIMES.pi(r)


def primorial(x: int, limit: int = U64_MAX) -> int:
    """Product of the primes <= x; 0# = 1# = 1. Raises ArithmeticOverflow past ``limit``."""
    if x < 0:
        raise ValueError("primorial argument must be nonnegative")
    out = 1
    for p in PRIMES.upto(x):
        out *= p
        if out > limit:
            raise ArithmeticOverflow(f"{x}# exceeds {limit.bit_length()}-bit width")
    return out


@dataclass(frozen=True)
class FactoredInteger:
    n: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def spf(self) -> Optional[int]:
        return self.factors[0][0] if self.factors else None

    def valuation(self, p: int) -> int:
        for q, a in self.factors:
            if q == p:
                return a
        return 0

    @property
    def radical(self) -> int:
        return math.prod(p for p, _ in self.factors)

    def as_lists(self) -> List[List[int]]:
        return [[p, a] for p, a in self.factors]


def factorize(n: int) -> FactoredInteger:
    """Trial division over the shared prime table, then a 6k+-1 wheel past it."""
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    check_width(n)
    m = n
    factors = []
    root = math.isqrt(m)
    PRIMES.extend_to(min(root, 1 << 24))
    for p in PRIMES._list:
        if p * p > m:
            break
        if m % p == 0:
            a = 0
            while m % p == 0:
                m //= p
                a += 1
            factors.append((p, a))
    else:
        q = PRIMES.limit + 1
        q += (5 - q) % 6  # q = 6k-1, q+2 = 6k+1
        while q * q <= m:
            for d in (q, q + 2):
                if m % d == 0:
                    a = 0
                    while m % d == 0:
                        m //= d
                        a += 1
                    factors.append((d, a))
            q += 6
    if m > 1:
        factors.append((m, 1))
    return FactoredInteger(n, tuple(factors))


def in_coprimality_class(n: int, r: int) -> bool:
    """True iff n is in B_r (smallest prime factor > r; 1 always included)."""
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    return n == 1 or factorize(n).spf > r


def schemmel_from_factors(factors: Sequence[Tuple[int, int]], r: int) -> int:
    out = 1
    for p, a in factors:
        if p <= r:
            return 0
        out *= p ** (a - 1) * (p - r)
    return out


def schemmel(n: int, r: int) -> int:
    """S_r(n) via factorization and multiplicativity; S_r(1) = 1."""
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    return check_width(schemmel_from_factors(factorize(n).factors, r), what="S_r(n)")


def schemmel_by_count(n: int, r: int) -> int:
    """Count k in [1, n] with gcd(k + j, n) == 1 for j = 0..r-1.

    Direct count over a gcd mask of 1 .. n + r - 1; no multiplicativity used.
    """
    if n < 1 or r < 1:
        raise ValueError("need n >= 1 and r >= 1")
    coprime = np.gcd(np.arange(1, n + r, dtype=np.int64), n) == 1
    runs = np.concatenate(([0], np.cumsum(coprime)))
    # window starting at k covers positions k .. k + r - 1
    return int(np.count_nonzero(runs[r:r + n] - runs[:n] == r))


@dataclass
class SrTable:
    r: int
    lo: int
    hi: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo + 1:
            raise ValueError("values length does not match [lo, hi]")

    def __getitem__(self, n: int) -> int:
        if not self.lo <= n <= self.hi:
            raise IndexError(f"{n} outside [{self.lo}, {self.hi}]")
        return int(self.values[n - self.lo])

    def __len__(self) -> int:
        return len(self.values)

    def numbers(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1, dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, SrTable):
            return NotImplemented
        return ((self.r, self.lo, self.hi) == (other.r, other.lo, other.hi)
                and np.array_equal(self.values, other.values))


def _sieve_segment(lo: int, hi: int, r: int, base: np.ndarray) -> np.ndarray:
    """S_r on [lo, hi] given every prime <= sqrt(hi) in ``base``."""
    size = hi - lo + 1
    val = np.ones(size, dtype=np.int64)
    found = np.ones(size, dtype=np.int64)  # product of prime powers from ``base``
    for p in base.tolist():
        if p * p > hi:
            break
        start = -lo % p
        if start >= size:
            continue
        if p <= r:
            val[start::p] = 0
            continue
        val[start::p] *= p - r
        found[start::p] *= p
        pe = p * p
        while pe <= hi:
            s = -lo % pe
            if s >= size:
                break
            val[s::pe] *= p
            found[s::pe] *= p
            pe *= p
    rest = np.arange(lo, hi + 1, dtype=np.int64) // found
    # rest is 1 or a single prime > sqrt(hi)
    factor = np.where(rest > r, rest - r, 0)
    factor[rest == 1] = 1
    val *= factor
    return val


def sieve_sr_range(lo: int, hi: int, r: int, segment_size: int = DEFAULT_SEGMENT,
                   max_entries: int = DEFAULT_MAX_ENTRIES, threads: int = 1) -> SrTable:
    """Tabulate S_r over [lo, hi] with a segmented multiplicative sieve.

    Segments are independent, so ``threads > 1`` evaluates them concurrently;
    the result is identical to the single-threaded run.
    """
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    if not 1 <= lo <= hi:
        raise ValueError(f"need 1 <= lo <= hi, got lo={lo}, hi={hi}")
    if hi > SIEVE_HI_MAX:
        raise ArithmeticOverflow(f"sieve bound {hi} exceeds supported width")
    if hi - lo + 1 > max_entries:
        raise MemoryBudgetError(
            f"range of {hi - lo + 1} entries exceeds budget {max_entries}; "
            "request smaller segments or raise the budget")
    base = PRIMES.array_upto(math.isqrt(hi))
    bounds = [(s, min(s + segment_size - 1, hi)) for s in range(lo, hi + 1, segment_size)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _sieve_segment(b[0], b[1], r, base), bounds))
    else:
        parts = [_sieve_segment(a, b, r, base) for a, b in bounds]
    return SrTable(r, lo, hi, np.concatenate(parts))


def iter_sr_segments(lo: int, hi: int, r: int, segment_size: int = DEFAULT_SEGMENT):
    """Yield (start, values) pairs covering [lo, hi] without holding it all in memory."""
    PRIMES.extend_to(math.isqrt(hi))
    base = PRIMES.array_upto(math.isqrt(hi))
    for s in range(lo, hi + 1, segment_size):
        e = min(s + segment_size - 1, hi)
        yield s, _sieve_segment(s, e, r, base)
