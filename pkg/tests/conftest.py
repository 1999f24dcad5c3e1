"""Shared fixtures and package-independent reference helpers."""
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from ksexplain import _backend
from ksexplain.cumvec import build_instance

EX_R = [14, 14, 14, 14, 20, 20, 20, 20]
EX_T = [13, 13, 12, 20]  # t1..t4 -> identities 0..3
EX_ALPHA = 0.3
EX_L = [3, 2, 1, 0]  # [t4, t3, t2, t1]


@pytest.fixture
def example():
    return build_instance(EX_R, EX_T, EX_ALPHA)


@pytest.fixture(params=_backend.available())
def backend(request):
    with _backend.use_backend(request.param):
        yield request.param


# -- independent references (no package code) ---------------------------------

def naive_ks(R, T):
    """max |F_R - F_T| over R u T by direct counting, exact rationals."""
    n, m = len(R), len(T)
    best = Fraction(0)
    for x in list(R) + list(T):
        fr = Fraction(sum(1 for r in R if r <= x), n)
        ft = Fraction(sum(1 for t in T if t <= x), m)
        best = max(best, abs(fr - ft))
    return best


def naive_threshold(n, m, alpha):
    return math.sqrt(-0.5 * math.log(alpha / 2)) * math.sqrt((n + m) / (n * m))


def naive_passes(R, T, alpha):
    return not float(naive_ks(R, T)) > naive_threshold(len(R), len(T), alpha)


def sub_multisets(T, h):
    """Distinct h-sized sub-multisets of T as sorted tuples."""
    return sorted(set(itertools.combinations(sorted(T), h)))


def residual(T, removed):
    rest = list(T)
    for v in removed:
        rest.remove(v)
    return rest


def naive_min_size(R, T, alpha):
    for h in range(1, len(T)):
        if any(naive_passes(R, residual(T, S), alpha) for S in sub_multisets(T, h)):
            return h
    return None


def random_small_case(rng, lo=3, hi=12, alphabet=6, alphas=(0.05, 0.1, 0.2)):
    """Random (R, T, alpha) from a small alphabet; may or may not fail."""
    n = int(rng.integers(lo, hi + 1))
    m = int(rng.integers(lo, hi + 1))
    a = int(rng.integers(1, alphabet + 1))
    letters = np.sort(rng.choice(np.arange(-20, 21), size=a, replace=False)) / 4.0
    R = rng.choice(letters, n).tolist()
    T = rng.choice(letters, m).tolist()
    alpha = float(alphas[int(rng.integers(len(alphas)))])
    return R, T, alpha


def failing_cases(seed, count, **kw):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        R, T, alpha = random_small_case(rng, **kw)
        inst = build_instance(R, T, alpha)
        if inst.failed():
            out.append((inst, rng.permutation(inst.m)))
    return out


# -- acceptance summary -------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
