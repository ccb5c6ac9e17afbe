"""
Prime-divisor profiles of sparsely Schemmel totient numbers and checks of
the structural results about them on certified enumeration output.

Notation: P_k(n) is the k-th largest prime divisor of n, Q_k(n) the k-th
smallest prime > r not dividing n, R(n) = n / rad(n), and lambda_k(r) the
positive root of A(x) = (J_r / r) x^k + k x - (k - 1).

Every inequality check is decided in exact rational arithmetic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .arith import PRIMES, base_index, factorize
from .certify import EnumerationCertificate
from .construct import FamilyMember
from .errors import PreconditionError
from .jacobsthal import jacobsthal_value

RESIDUAL_TOL = 1e-12
LEMMA31_LIMIT = 396738
LEMMA31_EXCEPTIONS = (1, 2, 4)


@dataclass(frozen=True)
class PrimeProfile:
    n: Optional[int]
    r: int
    P: Tuple[int, ...]
    Q: Tuple[int, ...]
    R: int
    eta: int

    @property
    def omega(self) -> int:
        return len(self.P)


def profile_from_factors(factors: Sequence[Tuple[int, int]], r: int, q_depth: int,
                         n: Optional[int] = None) -> PrimeProfile:
    if not factors:
        raise PreconditionError("profile needs n >= 2")
    if factors[0][0] <= r:
        raise PreconditionError(f"n has prime factor {factors[0][0]} <= r = {r}; not in B_r")
    divisors = {p for p, _ in factors}
    P = tuple(p for p, _ in reversed(factors))
    Q = []
    i = base_index(r) + 1
    while len(Q) < q_depth:
        q = PRIMES.nth(i)
        if q not in divisors:
            Q.append(q)
        i += 1
    R = math.prod(p ** (a - 1) for p, a in factors)
    return PrimeProfile(n, r, P, tuple(Q), R, factors[-1][1])


def profile(n: int, r: int, q_depth: int = 2) -> PrimeProfile:
    if n < 2:
        raise PreconditionError("profile needs n >= 2")
    return profile_from_factors(factorize(n).factors, r, q_depth, n)


@dataclass(frozen=True)
class LambdaRoot:
    k: int
    r: int
    J_r: int
    value: float
    residual: float

    def poly(self, x):
        return poly_A(x, self.k, self.r, self.J_r)


def poly_A(x, k: int, r: int, J_r: int):
    """(J_r / r) x^k + k x - (k - 1); exact when x is a Fraction or int."""
    if isinstance(x, (int, Fraction)):
        return Fraction(J_r, r) * Fraction(x) ** k + k * x - (k - 1)
    return J_r / r * x ** k + k * x - (k - 1)


def lambda_root(k: int, r: int) -> LambdaRoot:
    """Bisection on [0, 1]: A(0) = 1 - k < 0 < A(1) and A is increasing on x >= 0."""
    if k < 2:
        raise ValueError("k must be >= 2")
    J = jacobsthal_value(r)
    lo, hi = 0.0, 1.0
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if poly_A(mid, k, r, J) < 0:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller exact residual
    value = min((lo, hi), key=lambda v: abs(poly_A(Fraction(v), k, r, J)))
    residual = float(poly_A(Fraction(value), k, r, J))
    return LambdaRoot(k, r, J, value, residual)


def exceeds_lambda(ratio: Fraction, k: int, r: int) -> bool:
    """Exactly decide ratio > lambda_k(r) for ratio > 0 (sign of A, A increasing)."""
    return poly_A(ratio, k, r, jacobsthal_value(r)) > 0


def prime_membership_threshold(r: int) -> int:
    """A prime p lies in F_r iff r < p < (p_{b+1} - r)(p_{b+2} - r) + r."""
    b = base_index(r)
    return (PRIMES.nth(b + 1) - r) * (PRIMES.nth(b + 2) - r) + r


@dataclass
class Lemma31Report:
    limit: int
    checked: int
    violations: List[Tuple[int, int, int]]
    exceptions: List[Tuple[int, Fraction]]

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_lemma31(limit: int = LEMMA31_LIMIT) -> Lemma31Report:
    """Check 5 p_{j+1} <= 7 p_j for every j outside {1, 2, 4} with p_{j+1} <= limit."""
    primes = PRIMES.array_upto(limit).astype(np.int64)
    ok = 5 * primes[1:] <= 7 * primes[:-1]
    j = np.arange(1, len(primes))
    excluded = np.isin(j, LEMMA31_EXCEPTIONS)
    bad = np.flatnonzero(~ok & ~excluded)
    violations = [(int(j[i]), int(primes[i]), int(primes[i + 1])) for i in bad]
    exceptions = [(int(e), Fraction(int(primes[e]), int(primes[e - 1])))
                  for e in LEMMA31_EXCEPTIONS if e < len(primes)]
    return Lemma31Report(limit, int((~excluded).sum()), violations, exceptions)


@dataclass
class SuiteReport:
    """Named checks with their failures; ``ok`` is the pass/fail gate."""
    name: str
    checked: Dict[str, int] = field(default_factory=dict)
    failures: List[dict] = field(default_factory=list)
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self):
        return {"name": self.name, "ok": self.ok, "checked": self.checked,
                "failures": self.failures, "notes": self.notes}


def _profiles(cert: EnumerationCertificate, q_depth: int):
    for rec in cert.members:
        if rec.n >= 2:
            yield rec, profile_from_factors(rec.factors.factors, cert.r, q_depth, rec.n)


def verify_section3_inequalities(cert: EnumerationCertificate) -> SuiteReport:
    """Check, on every member, the three separation inequalities between P, Q and R.

    - Q_{k-1} > lambda_k(r) (P_k - r) for 2 <= k <= omega(n)
    - P_1 < Q_1 (1 - J_r + (J_r / r) Q_1) when omega(n) >= 2
    - R < (J_r / r) Q_1 (Q_1 - r)
    """
    r = cert.r
    J = jacobsthal_value(r)
    rep = SuiteReport("separation_inequalities",
                      {"q_over_p_gap": 0, "largest_prime_bound": 0, "square_part_bound": 0})
    max_omega = max((m.factors.omega for m in cert.members), default=0)
    for rec, pr in _profiles(cert, max(max_omega - 1, 1)):
        for k in range(2, pr.omega + 1):
            rep.checked["q_over_p_gap"] += 1
            ratio = Fraction(pr.Q[k - 2], pr.P[k - 1] - r)
            if not exceeds_lambda(ratio, k, r):
                rep.failures.append({"check": "q_over_p_gap", "n": rec.n, "k": k,
                                     "Q": pr.Q[k - 2], "P": pr.P[k - 1]})
        q1 = pr.Q[0]
        if pr.omega >= 2:
            rep.checked["largest_prime_bound"] += 1
            # P1 < Q1 (1 - J + J Q1 / r), scaled by r
            if not r * pr.P[0] < q1 * (r - r * J + J * q1):
                rep.failures.append({"check": "largest_prime_bound", "n": rec.n,
                                     "P1": pr.P[0], "Q1": q1})
        rep.checked["square_part_bound"] += 1
        if not r * pr.R < J * q1 * (q1 - r):
            rep.failures.append({"check": "square_part_bound", "n": rec.n, "R": pr.R, "Q1": q1})
    return rep


def _is_prime_power(rec, exponent: Optional[int] = None) -> bool:
    f = rec.factors.factors
    return len(f) == 1 and (exponent is None or f[0][1] == exponent)


def verify_structure_theorems(cert: EnumerationCertificate) -> SuiteReport:
    """Prime-power structure of members.

    (a) no member equals p_{b+1}^2 or any prime cube; (b) the prime members
    are exactly the primes strictly between r and the membership threshold;
    (c) removing one copy of a repeated prime from a member gives a member;
    (d) members divisible by P_1(n)^4 are listed (finitely many expected).
    """
    r = cert.r
    b = base_index(r)
    members = {m.n: m for m in cert.members}
    rep = SuiteReport("structure_theorems",
                      {"small_square": 0, "cubes": 0, "prime_members": 0, "downward_closure": 0})
    low_sq = PRIMES.nth(b + 1) ** 2
    rep.checked["small_square"] = 1
    if low_sq in members:
        rep.failures.append({"check": "small_square", "n": low_sq})
    for rec in cert.members:
        rep.checked["cubes"] += 1
        f = rec.factors.factors
        if len(f) == 1 and f[0][1] == 3:
            rep.failures.append({"check": "prime_cube", "n": rec.n})

    thr = prime_membership_threshold(r)
    expected = {p for p in PRIMES.upto(min(thr - 1, cert.X)) if p > r}
    found = {m.n for m in cert.members if _is_prime_power(m, 1)}
    rep.checked["prime_members"] = len(expected | found)
    if expected != found:
        rep.failures.append({"check": "prime_members", "expected": sorted(expected),
                             "found": sorted(found)})
    rep.notes["prime_threshold"] = thr

    for rec in cert.members:
        for p, a in rec.factors.factors:
            if a > 1:
                rep.checked["downward_closure"] += 1
                if rec.n // p not in members:
                    rep.failures.append({"check": "downward_closure", "n": rec.n, "p": p,
                                         "missing": rec.n // p})
    fourth = [m.n for m in cert.members if m.n > 1 and m.factors.factors[-1][1] >= 4]
    rep.notes["p1_fourth_power_members"] = fourth
    return rep


def scan_conjectures(cert: EnumerationCertificate) -> SuiteReport:
    """Report-only scan for prime-square members and members with P_1(n)^3 | n."""
    squares = [m.n for m in cert.members if _is_prime_power(m, 2)]
    cubes = [m.n for m in cert.members if m.n > 1 and m.factors.factors[-1][1] >= 3]
    rep = SuiteReport("conjectures", {"members": len(cert.members)})
    rep.notes["prime_squares"] = squares
    rep.notes["p1_cube_divisible"] = cubes
    rep.notes["counterexample_found"] = bool(squares or cubes)
    if cert.r == 2:
        rep.notes["p1_fourth_power_members"] = [
            m.n for m in cert.members if m.n > 1 and m.factors.factors[-1][1] >= 4]
    return rep


RATIO_COLUMNS = ["n", "log_n", "omega", "P1", "Q1", "ratio_p1_logn", "ratio_qL_logn",
                 "ratio_pK_logn", "ratio_p1_log2n"]


@dataclass
class RatioReport:
    r: int
    K: int
    L: int
    lambda_K_inverse: float
    j_over_r: float
    rows: List[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=RATIO_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({c: _fmt(row[c]) for c in RATIO_COLUMNS})
        return buf.getvalue()

    def pk_exceedances(self) -> List[dict]:
        """Rows above the asymptotic P_K line; finite-n excess is expected."""
        return [row for row in self.rows
                if row["ratio_pK_logn"] is not None and row["ratio_pK_logn"] > self.lambda_K_inverse]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return v


def _rows_from(source, r: int):
    if isinstance(source, EnumerationCertificate):
        for rec in source.members:
            if rec.n >= 2:
                yield rec.n, rec.factors.factors, math.log(rec.n)
    else:
        for fm in source:
            assert isinstance(fm, FamilyMember)
            yield fm.n, fm.factors, fm.log_n


def ratio_report(source, r: int, K: int = 2, L: int = 1) -> RatioReport:
    """Per-member ratios against log n for the asymptotic statements.

    ``source`` is an EnumerationCertificate or a list of FamilyMember. The
    P_K column is absent (None) when omega(n) < K. Columns are descriptive.
    """
    if K < 2 or L < 1:
        raise ValueError("need K >= 2 and L >= 1")
    depth = max(L, K - 1, 2)
    lam = lambda_root(K, r)
    rows = []
    for n, factors, log_n in _rows_from(source, r):
        pr = profile_from_factors(factors, r, depth, n)
        pK = pr.P[K - 1] if pr.omega >= K else None
        rows.append({
            "n": n,
            "log_n": log_n,
            "omega": pr.omega,
            "P1": pr.P[0],
            "Q1": pr.Q[0],
            "ratio_p1_logn": pr.P[0] / log_n,
            "ratio_qL_logn": pr.Q[L - 1] / log_n,
            "ratio_pK_logn": None if pK is None else pK / log_n,
            "ratio_p1_log2n": pr.P[0] / log_n ** 2,
        })
    return RatioReport(r, K, L, 1 / lam.value, jacobsthal_value(r) / r, rows)
