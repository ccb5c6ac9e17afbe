import math
import random

import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from schemmel.arith import base_index, nth_prime
from schemmel.construct import (ConstructionParams as CP, Lemma21Instance, build_member,
                                check_lemma21, ell_of_k, family_theorem33a, member_factors,
                                validate_params)
from schemmel.errors import InvalidParameters, PreconditionError


@pytest.mark.parametrize("params, ok", [
    (CP(1, 2, 0, 1), True),
    (CP(2, 3, 1, 1), True),
    (CP(1, 2, 5, 1), False),
])
def test_validate_examples(params, ok):
    assert validate_params(params)[0] is ok


def test_validate_reports_each_condition():
    ok, report = validate_params(CP(1, 2, 5, 1))
    assert not ok and len(report) == 1 and "16 >= 4" in report[0]
    ok, report = validate_params(CP(3, 2, 0, 3))
    assert not ok
    text = " ".join(report)
    assert "k >= b(r)+2" in text and "d in B_r" in text


def test_d_must_be_in_b_r():
    # d = 2 satisfies both inequalities for r = 2, k = 6 but is not in B_2
    ok, report = validate_params(CP(2, 6, 0, 2))
    assert not ok and report == ["d in B_r fails: d=2 has a prime factor <= 2"]


@pytest.mark.parametrize("params, n", [
    (CP(1, 2, 0, 1), 6),
    (CP(2, 4, 0, 1), 105),
    (CP(1, 3, 1, 1), 42),
])
def test_build_examples(params, n):
    assert build_member(params) == n
    assert n in oracles.sparsely_upto(params.r, n)
    assert math.prod(p ** a for p, a in member_factors(params)) == n


def test_build_rejects_invalid():
    with pytest.raises(InvalidParameters) as exc:
        build_member(CP(1, 2, 5, 1))
    assert exc.value.report


def test_build_members_are_members_small():
    for r in range(1, 5):
        members = set(oracles.sparsely_upto(r, 20000))
        for k in range(base_index(r) + 2, 9):
            for ell in range(4):
                for d in range(1, 12):
                    p = CP(r, k, ell, d)
                    if validate_params(p)[0]:
                        n = build_member(p)
                        if n <= 20000:
                            assert n in members, p


@pytest.mark.parametrize("r, k, ell, n", [(1, 2, 0, 6), (1, 4, 1, 330), (3, 4, 0, 35)])
def test_family_examples(r, k, ell, n):
    fm = next(m for m in family_theorem33a(r, k) if m.k == k)
    assert (fm.ell, fm.n) == (ell, n)
    assert fm.exact() == n


def test_family_ell_well_defined():
    for r in (1, 2, 3, 7, 10):
        for fm in family_theorem33a(r, 400):
            top = nth_prime(fm.k + fm.ell)
            assert top < 2 * nth_prime(fm.k) - r <= nth_prime(fm.k + fm.ell + 1)
            assert fm.ell == ell_of_k(r, fm.k)


def test_family_lazy_exact_value():
    big = family_theorem33a(1, 60, k_min=60)[0]
    assert big.n is None
    assert math.isclose(math.log(big.exact()), big.log_n, rel_tol=1e-12)


def test_family_in_certified_enumeration(certified):
    for r in range(1, 6):
        members = set(certified(r, 10 ** 6).values())
        for fm in family_theorem33a(r, 20):
            if fm.n is not None and fm.n <= 10 ** 6:
                assert fm.n in members


def test_lemma21_examples():
    assert check_lemma21(Lemma21Instance(1, [2], [3], 4, 3))
    with pytest.raises(PreconditionError):
        check_lemma21(Lemma21Instance(2, [3, 3], [3, 3], 5, 3))


@pytest.mark.parametrize("inst", [
    Lemma21Instance(2, [2], [3], 1, 3),       # x_1 not above r
    Lemma21Instance(1, [3], [2], 1, 3),       # x_1 > y_1
    Lemma21Instance(1, [5], [6], 1, 4),       # Y below max x
])
def test_lemma21_preconditions(inst):
    with pytest.raises(PreconditionError):
        check_lemma21(inst)


def _random_instance(rng):
    r = rng.randint(1, 50)
    s = rng.randint(1, 6)
    x = [rng.uniform(r + 1e-6, 1000) for _ in range(s)]
    y = [rng.uniform(xi, 1000) for xi in x]
    Y = rng.uniform(max(x), 1000)
    cap = Y * math.prod(y) / math.prod(x)
    X = rng.uniform(0, cap * (1 - 1e-9))
    return Lemma21Instance(r, x, y, X, Y)


def test_lemma21_randomized():
    rng = random.Random(2101)
    checked = 0
    while checked < 10 ** 5:
        inst = _random_instance(rng)
        try:
            assert check_lemma21(inst)
        except PreconditionError:
            continue
        checked += 1


reals = st.floats(min_value=0, max_value=1, allow_nan=False)


@settings(max_examples=300)
@given(st.integers(1, 30), st.lists(st.tuples(reals, reals), min_size=1, max_size=6),
       reals, reals)
def test_lemma21_property(r, pairs, u, v):
    x = [r + 1e-3 + a * 900 for a, _ in pairs]
    y = [xi + b * (1000 - xi) for xi, (_, b) in zip(x, pairs)]
    Y = max(x) + v * (1000 - max(x))
    X = u * Y * math.prod(y) / math.prod(x)
    assume(X * math.prod(x) < Y * math.prod(y))
    assert check_lemma21(Lemma21Instance(r, x, y, X, Y))
