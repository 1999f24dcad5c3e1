"""Phase one: how many test points must be removed.

For a candidate size h, removing an h-subset S of T passes the test iff for
every base-vector index i

    Gamma(i, h) - Omega(h) <= C_S[i] <= Gamma(i, h) + Omega(h)

with ``Gamma(i, h) = C_T[i] - (m - h) / n * C_R[i]`` and
``Omega(h) = c_alpha * sqrt(m - h + (m - h)**2 / n)``. Propagating these
constraints left to right gives per-index integer bounds ``l`` and ``u``; a
qualified h-subset exists iff ``l[i] <= u[i]`` everywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .cumvec import Instance
from .errors import (
    InternalVerificationFailure,
    InvalidSize,
    NoExplanationExists,
    NotQualifiedSize,
    TestNotFailed,
)
from .kstest import ks_test


@dataclass(frozen=True, eq=False)
class BoundsTable:
    h: int
    l: np.ndarray
    u: np.ndarray

    def feasible(self) -> bool:
        return bool(np.all(self.l <= self.u))

    def first_violation(self) -> int | None:
        bad = np.flatnonzero(self.l > self.u)
        return int(bad[0]) if bad.size else None


@dataclass(frozen=True)
class SizeResult:
    k: int
    k_hat: int
    scans: int


def _check_size(instance: Instance, h: int) -> int:
    h = int(h)
    if not 1 <= h <= instance.m - 1:
        raise InvalidSize(f"subset size {h} outside 1..{instance.m - 1}")
    return h


def omega(instance: Instance, h: int) -> float:
    h = _check_size(instance, h)
    rest = instance.m - h
    return instance.c_alpha * math.sqrt(rest + rest * rest / instance.n)


def gamma(instance: Instance, i: int, h: int) -> float:
    h = _check_size(instance, h)
    if not 1 <= i <= instance.q:
        raise IndexError(f"index {i} outside 1..{instance.q}")
    return float(instance.C_T[i] - ((instance.m - h) * int(instance.C_R[i])) / instance.n)


def _args(instance: Instance, h: int):
    return instance.C_T, instance.C_R, h, instance.m, instance.n, omega(instance, h)


def bounds(instance: Instance, h: int) -> BoundsTable:
    h = _check_size(instance, h)
    l, u = _backend.kernels.bounds(*_args(instance, h))
    l.setflags(write=False)
    u.setflags(write=False)
    return BoundsTable(h=h, l=l, u=u)


def exists_qualified(instance: Instance, h: int) -> bool:
    h = _check_size(instance, h)
    return bool(_backend.kernels.exists(*_args(instance, h)))


def necessary_holds(instance: Instance, h: int) -> bool:
    """Relaxed per-index condition; monotone in h, implied by ``exists_qualified``."""
    h = _check_size(instance, h)
    return bool(_backend.kernels.necessary(*_args(instance, h)))


def _require_failed(instance: Instance) -> None:
    v = ks_test(instance.R, instance.T, instance.alpha)
    if not v.failed:
        raise TestNotFailed(
            f"test passes (D={v.statistic:.6g} <= threshold={v.threshold:.6g}); nothing to explain"
        )


def lower_bound_size(instance: Instance, *, check_failed: bool = True) -> int:
    if check_failed:
        _require_failed(instance)
    hi = instance.m - 1
    if hi < 1 or not necessary_holds(instance, hi):
        raise NoExplanationExists(
            f"removing up to {max(hi, 0)} of {instance.m} test points cannot pass at alpha={instance.alpha}"
        )
    lo = 1
    while lo < hi:
        mid = (lo + hi) // 2
        if necessary_holds(instance, mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def explanation_size(instance: Instance, *, check_failed: bool = True) -> SizeResult:
    if check_failed:
        _require_failed(instance)
    k_hat = lower_bound_size(instance, check_failed=False)
    for h in range(k_hat, instance.m):
        if exists_qualified(instance, h):
            return SizeResult(k=h, k_hat=k_hat, scans=h - k_hat + 1)
    raise NoExplanationExists(
        f"no qualified subset of size {k_hat}..{instance.m - 1} at alpha={instance.alpha}"
    )


def residual_values(instance: Instance, counts: np.ndarray) -> np.ndarray:
    """Sorted values of T after removing ``counts[i]`` copies of ``V[i]``."""
    keep = np.diff(instance.C_T) - np.asarray(counts, dtype=np.int64)
    return np.repeat(instance.V, keep)


def witness_subset(instance: Instance, h: int) -> np.ndarray:
    """Build one qualified h-subset, returned as per-value counts aligned with V."""
    table = bounds(instance, h)
    if not table.feasible():
        raise NotQualifiedSize(f"no qualified subset of size {h}")
    C = _backend.kernels.witness(table.l, table.u, instance.t_mult)
    counts = np.diff(C)
    if C[0] != 0 or C[-1] != h or np.any(counts < 0) or np.any(counts > np.diff(instance.C_T)):
        raise InternalVerificationFailure(f"witness construction produced invalid vector {C.tolist()}")
    rest = residual_values(instance, counts)
    if ks_test(instance.R, rest, instance.alpha).failed:
        raise InternalVerificationFailure(f"witness of size {h} does not reverse the test")
    return counts
