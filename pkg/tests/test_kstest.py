import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ksexplain.errors import EmptySample, InvalidSignificance
from ksexplain.kstest import Sample, critical_coefficient, ks_statistic, ks_test, ks_threshold

from conftest import EX_R, EX_T, naive_ks

# reference values: 30-digit mpmath evaluation of the closed forms
C_005 = 1.35810151574061949849
C_03 = 0.97394044604531166940


def test_critical_coefficient_values():
    assert critical_coefficient(2 / math.e**2) == pytest.approx(1.0, abs=1e-15)
    assert critical_coefficient(0.05) == pytest.approx(C_005, rel=1e-12)
    assert critical_coefficient(0.05) == pytest.approx(1.358, abs=5e-4)  # published KS table entry
    assert critical_coefficient(0.3) == pytest.approx(C_03, rel=1e-12)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5, float("nan")])
def test_critical_coefficient_rejects(alpha):
    with pytest.raises(InvalidSignificance):
        critical_coefficient(alpha)


def test_threshold_values():
    assert ks_threshold(8, 4, 0.3) == pytest.approx(0.59641428316741605692, rel=1e-12)
    assert ks_threshold(8, 2, 0.3) == pytest.approx(0.76996752871587897040, rel=1e-12)
    for n in (1, 2, 7, 100):
        assert ks_threshold(n, n, 2 / math.e**2) == pytest.approx(math.sqrt(2 / n), rel=1e-12)


def test_threshold_rejects_empty():
    with pytest.raises(EmptySample):
        ks_threshold(0, 3, 0.05)


@given(st.integers(1, 500), st.integers(1, 500), st.sampled_from([0.01, 0.05, 0.2]))
def test_threshold_monotone(n, m, alpha):
    p = ks_threshold(n, m, alpha)
    assert ks_threshold(n + 1, m, alpha) <= p
    assert ks_threshold(n, m + 1, alpha) <= p


def test_statistic_examples():
    assert ks_statistic(EX_R, EX_T) == 0.75
    assert ks_statistic([3.0, 1.0, 2.0], [1.0, 2.0, 3.0]) == 0.0
    assert ks_statistic([1], [2]) == 1.0


def test_statistic_empty():
    with pytest.raises(EmptySample):
        ks_statistic([], [1.0])


def test_verdicts():
    assert ks_test(EX_R, EX_T, 0.3).failed
    assert not ks_test([1, 2, 2], [1, 2, 2], 0.2).failed
    v = ks_test(EX_R, [13, 20], 0.3)
    assert v.statistic == 0.5 and not v.failed
    assert v.threshold == pytest.approx(0.76996752871587897040, rel=1e-12)


def test_boundary_equal_is_pass():
    # alpha = 2/e^2 gives c = 1; n = m = 2 gives p = 1 and D = 1 on disjoint samples
    v = ks_test([0, 0], [5, 5], 2 / math.e**2)
    assert v.statistic == 1.0
    assert v.failed == (v.statistic > v.threshold)


small = st.lists(st.integers(-4, 4).map(lambda x: x / 2), min_size=1, max_size=15)


@given(small, small)
def test_statistic_matches_naive(R, T):
    assert ks_statistic(R, T) == pytest.approx(float(naive_ks(R, T)), abs=1e-12)


@given(small, small)
def test_statistic_symmetric(R, T):
    assert ks_statistic(R, T) == ks_statistic(T, R)
    assert 0.0 <= ks_statistic(R, T) <= 1.0


def test_sort_based_matches_naive_many():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        R = rng.integers(-5, 6, size=rng.integers(1, 20)) / 3
        T = rng.integers(-5, 6, size=rng.integers(1, 20)) / 3
        assert ks_statistic(R, T) == pytest.approx(float(naive_ks(R.tolist(), T.tolist())), abs=1e-12)


def test_sample_identity_and_order():
    s = Sample([3.0, 1.0, 3.0, 2.0])
    assert s.sorted_values.tolist() == [1.0, 2.0, 3.0, 3.0]
    assert s.order.tolist() == [1, 3, 0, 2]
    assert sorted(s.order.tolist()) == [0, 1, 2, 3]
    assert s.without([0, 1]).values.tolist() == [3.0, 2.0]


def test_sample_rejects():
    with pytest.raises(EmptySample):
        Sample([])
    with pytest.raises(ValueError):
        Sample([1.0, float("nan")])
