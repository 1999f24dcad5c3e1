"""Two-sample Kolmogorov-Smirnov test primitives.

The empirical CDF is right-continuous: ``F_S(x)`` counts elements ``<= x``.
The test fails when the statistic is strictly greater than the threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import EmptySample, InvalidSignificance

# Largest alpha for which an explanation is guaranteed to exist (c_alpha >= 1).
ALPHA_EXISTENCE_LIMIT = 2.0 / math.e**2


class Sample:
    """An immutable multiset of reals that remembers each point's input position.

    ``values[j]`` is the point with identity ``j``. ``sorted_values`` is the
    nondecreasing view and ``order`` maps sorted positions back to identities
    (stable, so equal values keep input order).
    """

    __slots__ = ("values", "sorted_values", "order")

    def __init__(self, values: Iterable[float]):
        arr = np.array(values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise EmptySample("sample must contain at least one value")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample values must be finite")
        order = np.argsort(arr, kind="stable")
        srt = arr[order]
        for a in (arr, order, srt):
            a.setflags(write=False)
        self.values = arr
        self.order = order
        self.sorted_values = srt

    def __len__(self) -> int:
        return int(self.values.size)

    def __repr__(self) -> str:
        return f"Sample(size={len(self)})"

    def without(self, point_ids: Iterable[int]) -> "Sample":
        """Return the residual sample after removing the given identities.

        Identities of the residual are renumbered 0..size-1 in input order.
        """
        mask = np.ones(len(self), dtype=bool)
        mask[np.fromiter(point_ids, dtype=np.int64)] = False
        return Sample(self.values[mask])


@dataclass(frozen=True)
class KsVerdict:
    statistic: float
    threshold: float
    failed: bool

    @property
    def passed(self) -> bool:
        return not self.failed


def _as_sample(s) -> Sample:
    return s if isinstance(s, Sample) else Sample(s)


def critical_coefficient(alpha: float) -> float:
    """c_alpha = sqrt(-ln(alpha / 2) / 2)."""
    if not (0.0 < alpha < 1.0) or math.isnan(alpha):
        raise InvalidSignificance(f"alpha must lie in (0, 1), got {alpha!r}")
    return math.sqrt(-0.5 * math.log(alpha / 2.0))


def ks_threshold(n: int, m: int, alpha: float) -> float:
    if n < 1 or m < 1:
        raise EmptySample(f"sample sizes must be positive, got n={n}, m={m}")
    return critical_coefficient(alpha) * math.sqrt((n + m) / (n * m))


def ks_statistic_sorted(r_sorted: np.ndarray, t_sorted: np.ndarray) -> float:
    """KS statistic of two already-sorted float arrays.

    Evaluates both CDFs at every point of the merged sample; repeated values
    collapse to the same evaluation because ``side="right"`` is used.
    """
    n = r_sorted.size
    m = t_sorted.size
    if n == 0 or m == 0:
        raise EmptySample("both samples must be nonempty")
    pts = np.concatenate((r_sorted, t_sorted))
    fr = np.searchsorted(r_sorted, pts, side="right") / n
    ft = np.searchsorted(t_sorted, pts, side="right") / m
    return float(np.max(np.abs(fr - ft)))


def ks_statistic(R, T) -> float:
    R = _as_sample(R)
    T = _as_sample(T)
    return ks_statistic_sorted(R.sorted_values, T.sorted_values)


def ks_test(R, T, alpha: float) -> KsVerdict:
    R = _as_sample(R)
    T = _as_sample(T)
    p = ks_threshold(len(R), len(T), alpha)
    d = ks_statistic_sorted(R.sorted_values, T.sorted_values)
    return KsVerdict(statistic=d, threshold=p, failed=d > p)
