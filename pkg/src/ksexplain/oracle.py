"""Reference searches that re-run the KS test directly on candidate residuals.

``brute_force_explanation`` walks subsets breadth-first in (size, preference
order) and is exponential; it is the ground truth for small instances.
``greedy_baseline`` removes ever longer prefixes of the preference list.
Neither touches the bound machinery in ``sizer`` or ``explainer``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .cumvec import Instance
from .errors import InstanceTooLarge, NoExplanationExists, TestNotFailed
from .explainer import _as_preference
from .kstest import ks_statistic_sorted, ks_test, ks_threshold

DEFAULT_CAP = 20


@dataclass(frozen=True)
class OracleResult:
    points: tuple[int, ...]
    size: int
    subsets_examined: int


def _passes_after(instance: Instance, keep_mask: np.ndarray) -> bool:
    rest = np.sort(instance.T.values[keep_mask])
    d = ks_statistic_sorted(instance.R.sorted_values, rest)
    return not d > ks_threshold(instance.n, rest.size, instance.alpha)


def _require_failed(instance: Instance) -> None:
    if not ks_test(instance.R, instance.T, instance.alpha).failed:
        raise TestNotFailed("test passes; nothing to explain")


def brute_force_explanation(instance: Instance, L, cap: int = DEFAULT_CAP) -> OracleResult:
    if instance.m > cap:
        raise InstanceTooLarge(f"test set has {instance.m} points, brute force cap is {cap}")
    L = _as_preference(instance, L)
    _require_failed(instance)
    m = instance.m
    values = instance.T.values
    order = L.order
    # identity subsets with the same removed values share a verdict
    verdicts: dict[tuple, bool] = {}
    examined = 0
    for size in range(1, m):
        for ranks in combinations(range(m), size):
            examined += 1
            ids = order[list(ranks)]
            key = tuple(sorted(values[ids].tolist()))
            ok = verdicts.get(key)
            if ok is None:
                mask = np.ones(m, dtype=bool)
                mask[ids] = False
                ok = verdicts[key] = _passes_after(instance, mask)
            if ok:
                return OracleResult(tuple(int(p) for p in ids), size, examined)
    raise NoExplanationExists(f"no subset of at most {m - 1} points passes at alpha={instance.alpha}")


def greedy_baseline(instance: Instance, L) -> OracleResult:
    L = _as_preference(instance, L)
    _require_failed(instance)
    mask = np.ones(instance.m, dtype=bool)
    for length in range(1, instance.m):
        mask[L.order[length - 1]] = False
        if _passes_after(instance, mask):
            return OracleResult(tuple(int(p) for p in L.order[:length]), length, length)
    raise NoExplanationExists(
        f"removing any prefix of up to {instance.m - 1} points does not pass at alpha={instance.alpha}"
    )

