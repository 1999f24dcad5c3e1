"""Phase two: build the most comprehensible explanation.

Test points are scanned in preference order and a point is kept whenever the
kept set plus that point is still contained in some minimum-size qualified
subset. The containment check runs backwards over the base vector, tightening
the upper bound of every prefix count by the points already committed.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _backend
from .cumvec import CumulativeVector, Instance
from .errors import (
    DuplicatePointId,
    ExceedsMultiplicity,
    InternalVerificationFailure,
    InvalidPreference,
    SubsetTooLarge,
    UnknownPointId,
)
from .kstest import ks_test
from .sizer import BoundsTable, _require_failed, bounds, explanation_size


class PreferenceList:
    """Strict total order over test-point identities; rank 0 is most preferred."""

    __slots__ = ("order", "rank")

    def __init__(self, order: Iterable[int], m: int | None = None):
        try:
            arr = np.array([int(x) for x in order], dtype=np.int64)
        except (TypeError, ValueError) as exc:
            raise InvalidPreference(f"preference entries must be integers: {exc}") from None
        size = arr.size if m is None else int(m)
        if arr.size != size:
            raise InvalidPreference(f"preference list has {arr.size} entries, test set has {size}")
        if size and (arr.min() < 0 or arr.max() >= size or np.unique(arr).size != size):
            raise InvalidPreference("preference list is not a permutation of 0..m-1")
        rank = np.empty(size, dtype=np.int64)
        rank[arr] = np.arange(size, dtype=np.int64)
        arr.setflags(write=False)
        rank.setflags(write=False)
        self.order = arr
        self.rank = rank

    def __len__(self) -> int:
        return int(self.order.size)

    def __repr__(self) -> str:
        return f"PreferenceList({self.order.tolist()})"

    @classmethod
    def natural(cls, m: int) -> "PreferenceList":
        return cls(range(m))

    @classmethod
    def from_scores(cls, scores: Sequence[float]) -> "PreferenceList":
        """Higher score first; equal scores keep input order."""
        s = np.asarray(scores, dtype=np.float64)
        if np.any(np.isnan(s)):
            raise InvalidPreference("scores must not be NaN")
        return cls(np.argsort(-s, kind="stable"))

    @classmethod
    def random(cls, m: int, rng: np.random.Generator) -> "PreferenceList":
        return cls(rng.permutation(m))

    def sort_key(self, point_ids: Iterable[int]) -> list[int]:
        return sorted(point_ids, key=lambda p: self.rank[p])


@dataclass(frozen=True)
class Explanation:
    points: tuple[int, ...]
    k: int
    k_hat: int
    candidate_checks: int
    verified: bool
    size_scans: int = 0
    timing: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.points)


def is_partial_explanation(
    instance: Instance, k: int, u_k: BoundsTable, C_S: CumulativeVector
) -> bool:
    """True iff some qualified k-subset contains the subset encoded by ``C_S``."""
    if C_S.h > k:
        raise SubsetTooLarge(f"subset has {C_S.h} points, explanation size is {k}")
    if u_k.h != k:
        raise ValueError(f"bounds were computed for size {u_k.h}, not {k}")
    return bool(_backend.kernels.partial_ok(u_k.l, u_k.u, np.ascontiguousarray(C_S.c, dtype=np.int64)))


def incremental_cumvec_add(
    instance: Instance,
    C_S: CumulativeVector,
    point: int,
    members: Iterable[int] | None = None,
) -> CumulativeVector:
    """Add one test point to the encoded subset (suffix increment from its value).

    ``members`` are the identities already in the subset, when known; they
    allow duplicate detection.
    """
    point = int(point)
    if not 0 <= point < instance.m:
        raise UnknownPointId(f"test point id {point} not in 0..{instance.m - 1}")
    if members is not None and point in set(int(x) for x in members):
        raise DuplicatePointId(f"test point id {point} already in the subset")
    p = int(instance.t_pos[point])
    c = np.array(C_S.c, dtype=np.int64)
    if c[p] - c[p - 1] + 1 > instance.C_T[p] - instance.C_T[p - 1]:
        raise ExceedsMultiplicity(f"value {instance.V[p - 1]!r} already removed as often as it occurs in T")
    c[p:] += 1
    c.setflags(write=False)
    return CumulativeVector(c)


def _as_preference(instance: Instance, L) -> PreferenceList:
    if isinstance(L, PreferenceList):
        if len(L) != instance.m:
            raise InvalidPreference(f"preference list has {len(L)} entries, test set has {instance.m}")
        return L
    return PreferenceList(L, m=instance.m)


def most_comprehensible(instance: Instance, L, *, verify: bool = True) -> Explanation:
    L = _as_preference(instance, L)
    _require_failed(instance)

    t0 = time.perf_counter()
    size = explanation_size(instance, check_failed=False)
    table = bounds(instance, size.k)
    t1 = time.perf_counter()

    pos = np.ascontiguousarray(instance.t_pos[L.order], dtype=np.int64)
    picked, checks = _backend.kernels.greedy_select(table.l, table.u, pos, size.k)
    points = tuple(int(x) for x in L.order[picked])
    t2 = time.perf_counter()

    if len(points) != size.k:
        raise InternalVerificationFailure(
            f"scan ended with {len(points)} of {size.k} points after {checks} checks"
        )
    verified = True
    if verify:
        verified = ks_test(instance.R, instance.T.without(points), instance.alpha).passed
        if not verified:
            raise InternalVerificationFailure(f"removing {list(points)} does not pass the test")
    t3 = time.perf_counter()
    return Explanation(
        points=points,
        k=size.k,
        k_hat=size.k_hat,
        candidate_checks=int(checks),
        verified=verified,
        size_scans=size.scans,
        timing={"size": t1 - t0, "construct": t2 - t1, "verify": t3 - t2},
    )
