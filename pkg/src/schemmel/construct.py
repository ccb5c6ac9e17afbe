"""
Explicit members of F_r.

For k >= b(r) + 2, l >= 0 and d in B_r with d < p_{k+1} - r and
d (p_{k+l} - r) < (d + 1)(p_k - r), the integer

    n = d * p_{k+l} * p_{b+1} * ... * p_{k-1}

is sparsely Schemmel totient of order r. With d = 1 and l(k) the largest l
with p_{k+l} < 2 p_k - r this yields a family whose largest prime factor is
about twice log n.

Also holds a floating-point checker for the real-variable product
inequality that the membership argument rests on; it is a property-test
target only and never used to certify anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .arith import PRIMES, U64_MAX, base_index, factorize, in_coprimality_class
from .errors import ArithmeticOverflow, InvalidParameters, PreconditionError


@dataclass(frozen=True)
class ConstructionParams:
    r: int
    k: int
    ell: int
    d: int = 1


def param_violations(p: ConstructionParams) -> List[str]:
    """Names of the failed hypotheses; empty when the parameters are valid."""
    if p.r < 1 or p.k < 1 or p.ell < 0 or p.d < 1:
        return ["fields out of range (need r, k, d >= 1 and ell >= 0)"]
    b = base_index(p.r)
    out = []
    if p.k < b + 2:
        out.append(f"k >= b(r)+2 fails: k={p.k}, b(r)={b}")
    if not in_coprimality_class(p.d, p.r):
        out.append(f"d in B_r fails: d={p.d} has a prime factor <= {p.r}")
    pk, pk1, pkl = PRIMES.nth(p.k), PRIMES.nth(p.k + 1), PRIMES.nth(p.k + p.ell)
    if not p.d < pk1 - p.r:
        out.append(f"d < p_(k+1) - r fails: {p.d} >= {pk1 - p.r}")
    if not p.d * (pkl - p.r) < (p.d + 1) * (pk - p.r):
        out.append(f"d(p_(k+l) - r) < (d+1)(p_k - r) fails: "
                   f"{p.d * (pkl - p.r)} >= {(p.d + 1) * (pk - p.r)}")
    return out


def validate_params(p: ConstructionParams) -> Tuple[bool, List[str]]:
    report = param_violations(p)
    return not report, report


def member_factors(p: ConstructionParams) -> List[Tuple[int, int]]:
    """Factorization of the constructed member (d factored in)."""
    exps = {}
    for q, a in factorize(p.d).factors:
        exps[q] = exps.get(q, 0) + a
    b = base_index(p.r)
    for i in range(b + 1, p.k):
        q = PRIMES.nth(i)
        exps[q] = exps.get(q, 0) + 1
    top = PRIMES.nth(p.k + p.ell)
    exps[top] = exps.get(top, 0) + 1
    return sorted(exps.items())


def build_member(p: ConstructionParams, limit: int = U64_MAX) -> int:
    ok, report = validate_params(p)
    if not ok:
        raise InvalidParameters(report)
    b = base_index(p.r)
    n = p.d * PRIMES.nth(p.k + p.ell) * math.prod(PRIMES.nth(i) for i in range(b + 1, p.k))
    if n > limit:
        raise ArithmeticOverflow(f"constructed member exceeds {limit.bit_length()}-bit width")
    return n


@dataclass(frozen=True)
class FamilyMember:
    k: int
    ell: int
    factors: Tuple[Tuple[int, int], ...]
    log_n: float
    n: Optional[int]  # only when it fits in 64 bits

    @property
    def largest_prime(self) -> int:
        return self.factors[-1][0]

    def exact(self) -> int:
        return math.prod(p ** a for p, a in self.factors)


def ell_of_k(r: int, k: int) -> int:
    """Largest l with p_{k+l} < 2 p_k - r."""
    bound = 2 * PRIMES.nth(k) - r
    ell = PRIMES.pi(bound - 1) - k
    assert PRIMES.nth(k + ell) < bound <= PRIMES.nth(k + ell + 1)
    return ell


def family_theorem33a(r: int, k_max: int, k_min: Optional[int] = None) -> List[FamilyMember]:
    """Members n(k) = p_{k+l(k)} p_{b+1} ... p_{k-1} for k in [b(r)+2, k_max]."""
    b = base_index(r)
    start = b + 2 if k_min is None else max(k_min, b + 2)
    PRIMES.nth(2 * k_max + 16)
    out = []
    for k in range(start, k_max + 1):
        ell = ell_of_k(r, k)
        factors = tuple((PRIMES.nth(i), 1) for i in range(b + 1, k)) + ((PRIMES.nth(k + ell), 1),)
        log_n = math.fsum(math.log(q) for q, _ in factors)
        n = None
        if log_n < 44.3:  # 2^64 ~ e^44.36
            n = math.prod(q for q, _ in factors)
            if n > U64_MAX:
                n = None
        out.append(FamilyMember(k, ell, factors, log_n, n))
    return out


@dataclass(frozen=True)
class Lemma21Instance:
    r: float
    x: Sequence[float]
    y: Sequence[float]
    X: float
    Y: float

    @property
    def s(self) -> int:
        return len(self.x)


GUARD = 1e-9


def check_lemma21(inst: Lemma21Instance, eps: float = GUARD) -> bool:
    """Whether (X - r) prod(x_i - r) < (Y - r) prod(y_i - r), up to a relative guard band.

    Raises PreconditionError when r < x_i <= y_i, Y >= max x_i or
    X prod x_i < Y prod y_i fails.
    """
    r, x, y, X, Y = inst.r, list(inst.x), list(inst.y), inst.X, inst.Y
    if len(x) != len(y) or not x:
        raise PreconditionError("x and y must be nonempty and of equal length")
    if not all(r < xi <= yi for xi, yi in zip(x, y)):
        raise PreconditionError("need r < x_i <= y_i for every i")
    if Y < max(x):
        raise PreconditionError("need Y >= max(x_i)")
    if not X * math.prod(x) < Y * math.prod(y):
        raise PreconditionError("need X prod(x_i) < Y prod(y_i)")
    lhs = (X - r) * math.prod(xi - r for xi in x)
    rhs = (Y - r) * math.prod(yi - r for yi in y)
    return lhs < rhs + eps * max(abs(lhs), abs(rhs))
