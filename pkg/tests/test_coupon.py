import itertools
import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfcolor.budget import Budget
from tfcolor.coupon import (
    BoundParams,
    CouponInstance,
    amgm_lower_bound,
    enumerate_uncovered,
    exact_uncovered_expectation,
    final_bound,
    final_bound_ratio,
    monte_carlo_uncovered,
    pair_uncovered_probability,
    pairwise_covariances,
    pmf_moments,
    reordering_lower_bound,
    uncovered_probability,
    uncovered_variance,
)
from tfcolor.errors import ResourceGuardError
from tfcolor.params import Palette, default_ell, default_t, palette_size

EX = CouponInstance.of(3, [{1, 2}, {2, 3}])


@st.composite
def instances(draw, max_k=6, max_d=5):
    k = draw(st.integers(1, max_k))
    d = draw(st.integers(0, max_d))
    lists = [
        draw(st.sets(st.integers(1, k), min_size=1, max_size=k)) for _ in range(d)
    ]
    return CouponInstance.of(k, lists)


def joint_outcomes(inst):
    for pick in itertools.product(*[sorted(L) for L in inst.lists]):
        yield set(range(1, inst.k + 1)) - set(pick)


def brute_event(inst, pred):
    outs = list(joint_outcomes(inst))
    return Fraction(sum(1 for x in outs if pred(x)), len(outs))


def test_expectation_examples():
    assert exact_uncovered_expectation(EX) == Fraction(5, 4)
    assert brute_event(EX, lambda x: True) == 1
    assert sum(len(x) for x in joint_outcomes(EX)) == 5
    assert exact_uncovered_expectation(CouponInstance.of(4, [])) == 4
    assert exact_uncovered_expectation(CouponInstance.of(5, [range(1, 6)])) == 4


def test_enumerate_examples():
    assert enumerate_uncovered(EX) == {1: Fraction(3, 4), 2: Fraction(1, 4)}
    assert enumerate_uncovered(CouponInstance.of(4, [])) == {4: 1}
    assert enumerate_uncovered(CouponInstance.of(2, [{1}] * 3)) == {1: 1}


def test_enumerate_budget():
    inst = CouponInstance.of(4, [{1, 2, 3, 4}] * 6)
    with pytest.raises(ResourceGuardError):
        enumerate_uncovered(inst, Budget(max_enumeration=1000))


def test_pair_examples():
    assert pair_uncovered_probability(EX, 1, 2) == 0
    assert uncovered_probability(EX, 1) == Fraction(1, 2)
    assert uncovered_probability(EX, 2) == Fraction(1, 4)
    assert pairwise_covariances(EX)[(1, 2)] == Fraction(-1, 8)
    absent = CouponInstance.of(5, [{1, 2}])
    assert pair_uncovered_probability(absent, 4, 5) == 1
    with pytest.raises(ValueError):
        pair_uncovered_probability(EX, 1, 4)


def test_variance_examples():
    pmf = enumerate_uncovered(EX)
    second = sum(s * s * p for s, p in pmf.items())
    assert second == Fraction(7, 4)
    assert uncovered_variance(EX) == Fraction(3, 16)
    assert uncovered_variance(EX) <= exact_uncovered_expectation(EX)
    assert uncovered_variance(CouponInstance.of(3, [])) == 0


@settings(max_examples=150, deadline=None)
@given(instances())
def test_oracle_equalities(inst):
    mean, var = pmf_moments(enumerate_uncovered(inst))
    assert exact_uncovered_expectation(inst) == mean
    assert uncovered_variance(inst) == var
    assert var <= mean


@settings(max_examples=80, deadline=None)
@given(instances(max_k=5, max_d=4))
def test_closed_forms_match_joint_enumeration(inst):
    for j in range(1, inst.k + 1):
        assert uncovered_probability(inst, j) == brute_event(inst, lambda x: j in x)
    for j, j2 in itertools.combinations(range(1, inst.k + 1), 2):
        assert pair_uncovered_probability(inst, j, j2) == brute_event(inst, lambda x: j in x and j2 in x)


@given(instances())
def test_negative_correlation(inst):
    assert all(c <= 0 for c in pairwise_covariances(inst).values())


def test_amgm_examples():
    res = amgm_lower_bound(EX, BoundParams(t=1))
    assert res.inner_product == Fraction(1, 16)
    assert res.value == pytest.approx(3 * (1 / 16) ** (1 / 3), rel=1e-12)
    assert res.value == pytest.approx(1.1906, abs=1e-4)
    assert (Fraction(5, 12)) ** 3 == Fraction(125, 1728)
    assert res.holds and res.expectation == Fraction(5, 4)

    empty = amgm_lower_bound(CouponInstance.of(4, []), BoundParams(t=1))
    assert empty.value == pytest.approx(4) and empty.expectation == 4 and empty.holds

    inst = CouponInstance.of(3, [{1, 2}])
    one = amgm_lower_bound(inst, BoundParams(t=1, B={1, 2}))
    assert one.value == pytest.approx(1) and one.expectation == 1

    with pytest.raises(ValueError):
        amgm_lower_bound(EX, BoundParams(t=1, B={1, 2, 3}))


def test_conditional_expectation_drops_small_lists_and_b():
    inst = CouponInstance.of(4, [{1}, {2, 3, 4}, {1, 2}])
    params = BoundParams(t=1, B={1})
    # colors 2,3,4 survive the large lists {2,3,4} and {1,2}
    expected = Fraction(2, 3) * Fraction(1, 2) + Fraction(2, 3) + Fraction(2, 3)
    assert exact_uncovered_expectation(inst, params) == expected


def test_reordering_examples():
    inst = CouponInstance.of(4, [{1, 2, 3}, {2, 3, 4}])
    res = reordering_lower_bound(inst, BoundParams(t=2), 2)
    assert res.lhs == Fraction(64, 729) and res.rhs == Fraction(1, 16) and res.holds
    assert res.reorder_identity
    t1 = reordering_lower_bound(inst, BoundParams(t=1), 2)
    assert t1.rhs == 0 and t1.holds
    empty = reordering_lower_bound(CouponInstance.of(3, []), BoundParams(t=3), 1)
    assert empty.lhs == 1 and empty.holds
    with pytest.raises(ValueError):
        reordering_lower_bound(inst, BoundParams(t=2), 1)


@st.composite
def bound_cases(draw):
    inst = draw(instances(max_k=7, max_d=6))
    t = draw(st.integers(1, 4))
    B = draw(st.sets(st.integers(1, inst.k), max_size=inst.k - 1)) if inst.k > 1 else set()
    delta = draw(st.integers(inst.d, inst.d + 3))
    return inst, BoundParams(t=t, B=B), delta


@settings(max_examples=150, deadline=None)
@given(bound_cases())
def test_bound_chain(case):
    inst, params, delta = case
    am = amgm_lower_bound(inst, params)
    assert am.holds
    assert float(am.expectation) >= am.value * (1 - 1e-12)
    ro = reordering_lower_bound(inst, params, delta)
    assert ro.reorder_identity and ro.holds


def test_palette():
    assert palette_size(10**4, 1) == 2172
    p = Palette.derived(100, 0.5)
    assert p.k * math.log(100) >= 1.5 * 100 > (p.k - 1) * math.log(100)
    assert default_t(10**6) == 4 and default_ell(math.e) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        palette_size(1, 1)


def mp_bound(delta, eps, t, b):
    mpmath.mp.dps = 60
    D = mpmath.mpf(delta)
    k = mpmath.ceil((1 + mpmath.mpf(eps)) * D / mpmath.log(D))
    m = k - b
    return m * (1 - mpmath.mpf(1) / t) ** (t * D / m), mpmath.log(D) ** 2


@pytest.mark.parametrize("delta", [10**4, 10**6, 10**9, 10**12, 37, 1000])
def test_final_bound_against_high_precision(delta):
    val, ell = mp_bound(delta, 1, 100, 0)
    assert final_bound(delta, 1, 100, 0) == pytest.approx(float(val), rel=1e-9)
    assert final_bound_ratio(delta, 1, 100) == pytest.approx(float(val / ell), rel=1e-9)


def test_final_bound_examples():
    assert final_bound(10**6, 1, 100) == pytest.approx(1.40e2, rel=0.01)
    assert default_ell(10**6) == pytest.approx(190.9, rel=1e-3)
    assert final_bound(10**9, 1, 100) == pytest.approx(2.9e3, rel=0.01)
    k = palette_size(10**6, 1)
    assert final_bound(10**6, 1, 100, k - 1) < 1e-300 or final_bound(10**6, 1, 100, k - 1) == 0.0
    with pytest.raises(ValueError):
        final_bound(2, 1, 100)
    with pytest.raises(ValueError):
        final_bound(100, 1, 100, b=10**6)


def test_final_bound_monotone_in_b():
    k = palette_size(10**5, 1)
    vals = [final_bound(10**5, 1, 50, b) for b in range(0, k, max(1, k // 40))]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_final_bound_ratio_eventually_increasing():
    grid = [10**e for e in range(3, 16)]
    ratios = [final_bound_ratio(d, 1, 100) for d in grid]
    tail = ratios[2:]
    assert all(a < b for a, b in zip(tail, tail[1:]))


def test_monte_carlo():
    inst = CouponInstance.of(6, [{1, 2, 3}, {2, 3, 4, 5}, {1, 6}, {4, 5, 6}])
    exact = exact_uncovered_expectation(inst)
    var = uncovered_variance(inst)
    mc = monte_carlo_uncovered(inst, 20000, seed=4)
    se = math.sqrt(float(var) / 20000)
    assert abs(mc.mean - float(exact)) < 5 * se
    assert monte_carlo_uncovered(inst, 500, seed=1) == monte_carlo_uncovered(inst, 500, seed=1)
    det = CouponInstance.of(3, [{1}, {1}, {3}])
    one = monte_carlo_uncovered(det, 1, seed=0)
    assert one.mean == 1 and one.variance == 0
    with pytest.raises(ValueError):
        monte_carlo_uncovered(det, 0, seed=0)


def test_instance_json_and_validation():
    inst = CouponInstance.of(3, [{2, 1}, {3}], delta=4)
    assert inst.to_json() == {"k": 3, "lists": [[1, 2], [3]], "delta": 4}
    assert CouponInstance.from_json(inst.to_json()) == inst
    with pytest.raises(ValueError):
        CouponInstance.of(3, [set()])
    with pytest.raises(ValueError):
        CouponInstance.of(3, [{4}])
