"""Evaluation metrics for explained tests: RMSE, reverse factor, is-smallest."""
from __future__ import annotations

import math
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .cumvec import Instance
from .errors import KsExplainError, RemovedEverything
from .explainer import PreferenceList, most_comprehensible
from .kstest import ks_test
from .oracle import DEFAULT_CAP, brute_force_explanation, greedy_baseline

METHODS = ("moche", "greedy", "oracle")


def rmse(instance: Instance, point_ids: Iterable[int] = ()) -> float:
    """Root mean square CDF gap between R and T minus the given points.

    Averaged over the distinct values of R union (T minus S).
    """
    ids = list(point_ids)
    if len(set(ids)) >= instance.m:
        raise RemovedEverything("cannot remove every test point")
    mask = np.ones(instance.m, dtype=bool)
    mask[np.asarray(ids, dtype=np.int64)] = False
    rest = np.sort(instance.T.values[mask])
    r = instance.R.sorted_values
    pts = np.unique(np.concatenate((r, rest)))
    fr = np.searchsorted(r, pts, side="right") / r.size
    ft = np.searchsorted(rest, pts, side="right") / rest.size
    return float(math.sqrt(np.mean((fr - ft) ** 2)))


@dataclass
class MethodRecord:
    test_id: int
    method: str
    size: int | None
    rmse: float | None
    reversed: bool
    ise: int = 0
    runtime: float | None = None
    k_hat: int | None = None
    points: list[int] = field(default_factory=list)
    error: str | None = None
    rmse_before: float | None = None  # residual error with nothing removed

    def as_dict(self, with_timing: bool = True) -> dict:
        d = asdict(self)
        if not with_timing:
            d.pop("runtime")
        return d


def _run_method(name: str, instance: Instance, L: PreferenceList, oracle_cap: int):
    if name == "moche":
        e = most_comprehensible(instance, L)
        return list(e.points), e.k_hat
    if name == "greedy":
        return list(greedy_baseline(instance, L).points), None
    if name == "oracle":
        return list(brute_force_explanation(instance, L, cap=oracle_cap).points), None
    raise ValueError(f"unknown method {name!r}; choose from {METHODS}")


def compare_methods(
    instance: Instance,
    L,
    methods: Sequence[str] = METHODS,
    *,
    test_id: int = 0,
    oracle_cap: int = DEFAULT_CAP,
    clock: Callable[[], float] = time.perf_counter,
) -> list[MethodRecord]:
    """Run each method on one failed test. Method errors become failure records."""
    if not isinstance(L, PreferenceList):
        L = PreferenceList(L, m=instance.m)
    rows = []
    before = rmse(instance)
    for name in methods:
        t0 = clock()
        try:
            points, k_hat = _run_method(name, instance, L, oracle_cap)
        except KsExplainError as exc:
            rows.append(
                MethodRecord(test_id, name, None, None, False, runtime=clock() - t0,
                             error=f"{type(exc).__name__}: {exc}", rmse_before=before)
            )
            continue
        elapsed = clock() - t0
        reversed_ = ks_test(instance.R, instance.T.without(points), instance.alpha).passed
        rows.append(
            MethodRecord(test_id, name, len(points), rmse(instance, points), reversed_,
                         runtime=elapsed, k_hat=k_hat, points=points, rmse_before=before)
        )
    sizes = [r.size for r in rows if r.size is not None and r.reversed]
    if sizes:
        best = min(sizes)
        for r in rows:
            r.ise = int(r.reversed and r.size == best)
    return rows


@dataclass
class BatchReport:
    rows: list[MethodRecord] = field(default_factory=list)

    def extend(self, rows: Iterable[MethodRecord]) -> None:
        self.rows.extend(rows)

    def methods(self) -> list[str]:
        return sorted({r.method for r in self.rows})

    def aggregate(self, with_timing: bool = True) -> dict:
        out = {}
        for name in self.methods():
            rows = [r for r in self.rows if r.method == name]
            total = len(rows)
            agg = {
                "tests": total,
                "rf": sum(r.reversed for r in rows) / total,
                "mean_ise": sum(r.ise for r in rows) / total,
                "errors": sum(r.error is not None for r in rows),
                "size_distribution": _histogram(r.size for r in rows if r.size is not None),
            }
            done = [r.rmse for r in rows if r.rmse is not None]
            agg["mean_rmse"] = sum(done) / len(done) if done else None
            # expected to stay 0 but only reported, never enforced
            agg["rmse_not_reduced"] = sum(
                r.rmse is not None and r.rmse_before is not None and r.rmse > r.rmse_before for r in rows
            )
            if with_timing:
                agg["mean_runtime"] = sum(r.runtime or 0.0 for r in rows) / total
            gaps = [r.size - r.k_hat for r in rows if r.k_hat is not None and r.size is not None]
            if gaps:
                agg["k_minus_k_hat_distribution"] = _histogram(gaps)
            out[name] = agg
        return out


def _histogram(values) -> dict[str, int]:
    c = Counter(values)
    return {str(k): c[k] for k in sorted(c)}
