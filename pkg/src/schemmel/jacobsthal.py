"""Jacobsthal function of primorials, J_r = J(r#).

J(n) is the least a such that every run of a consecutive integers holds one
coprime to n. Coprimality to r# is periodic with period r#, so the maximum
gap between consecutive coprime integers over [1, r# + 1] is J_r.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .arith import PRIMES, primorial
from .errors import ResourceLimitError

CHUNK = 1 << 22
# 23# = 223092870; larger periods take minutes in a single scan
DEFAULT_MAX_MODULUS = 223092870


@dataclass(frozen=True)
class JacobsthalRecord:
    r: int
    modulus: int
    J_r: int
    witness_start: int

    def to_dict(self):
        return asdict(self)


def _coprime_positions(start: int, stop: int, primes) -> np.ndarray:
    """Integers in [start, stop) coprime to every prime in ``primes``."""
    mask = np.ones(stop - start, dtype=bool)
    for p in primes:
        mask[-start % p::p] = False
    return np.flatnonzero(mask) + start


def jacobsthal_of_primorial(r: int, chunk: int = CHUNK,
                            max_modulus: int = DEFAULT_MAX_MODULUS) -> JacobsthalRecord:
    if r < 1:
        raise ValueError(f"order r must be >= 1, got {r}")
    modulus = primorial(r)  # ArithmeticOverflow past 64 bits
    if modulus > max_modulus:
        raise ResourceLimitError(f"period {modulus} exceeds scan budget {max_modulus}")
    primes = PRIMES.upto(r)
    best_gap, best_start = 1, 0
    prev = None
    # the scan covers [1, modulus + 1]; modulus + 1 is always coprime
    for lo in range(1, modulus + 2, chunk):
        hi = min(lo + chunk, modulus + 2)
        pos = _coprime_positions(lo, hi, primes)
        if len(pos) == 0:
            continue
        if prev is not None:
            pos = np.concatenate(([prev], pos))
        if len(pos) > 1:
            gaps = np.diff(pos)
            i = int(np.argmax(gaps))  # first maximum in this chunk
            if gaps[i] > best_gap:
                best_gap, best_start = int(gaps[i]), int(pos[i])
        prev = int(pos[-1])
    return JacobsthalRecord(r, modulus, best_gap, best_start)


@lru_cache(maxsize=None)
def jacobsthal_value(r: int) -> int:
    """J_r alone, memoized for the bound checks."""
    return jacobsthal_of_primorial(r).J_r
