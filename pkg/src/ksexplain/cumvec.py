"""Problem instances and cumulative vectors of test-set subsets.

Arrays are 0-based with a leading sentinel: ``C[0] == 0`` and ``C[i]`` for
``1 <= i <= q`` refers to ``V[i - 1]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import (
    DuplicatePointId,
    ExceedsMultiplicity,
    RemovedEverything,
    UnknownPointId,
)
from .kstest import Sample, critical_coefficient, ks_test


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Instance:
    R: Sample
    T: Sample
    alpha: float
    c_alpha: float
    V: np.ndarray
    C_R: np.ndarray
    C_T: np.ndarray
    n: int
    m: int
    q: int
    # 1-based position in V of each test point, indexed by identity
    t_pos: np.ndarray

    @property
    def t_mult(self) -> np.ndarray:
        """Multiplicity in T of each base-vector value (length q+1, [0] = 0)."""
        return np.diff(self.C_T, prepend=0)

    def verdict(self):
        return ks_test(self.R, self.T, self.alpha)

    def failed(self) -> bool:
        return self.verdict().failed


@dataclass(frozen=True, eq=False)
class CumulativeVector:
    c: np.ndarray

    @property
    def h(self) -> int:
        return int(self.c[-1])

    def __len__(self) -> int:
        return int(self.c.size)

    def __eq__(self, other) -> bool:
        if isinstance(other, CumulativeVector):
            other = other.c
        return bool(np.array_equal(self.c, np.asarray(other)))

    def __repr__(self) -> str:
        return f"CumulativeVector({self.c.tolist()})"

    def counts(self) -> np.ndarray:
        """Per-value multiplicities of the encoded subset (length q, aligned with V)."""
        return np.diff(self.c)


def build_instance(R, T, alpha: float) -> Instance:
    R = R if isinstance(R, Sample) else Sample(R)
    T = T if isinstance(T, Sample) else Sample(T)
    c_alpha = critical_coefficient(alpha)
    V = np.unique(np.concatenate((R.sorted_values, T.sorted_values)))
    C_R = np.zeros(V.size + 1, dtype=np.int64)
    C_T = np.zeros(V.size + 1, dtype=np.int64)
    C_R[1:] = np.searchsorted(R.sorted_values, V, side="right")
    C_T[1:] = np.searchsorted(T.sorted_values, V, side="right")
    t_pos = np.searchsorted(V, T.values, side="left").astype(np.int64) + 1
    return Instance(
        R=R,
        T=T,
        alpha=float(alpha),
        c_alpha=c_alpha,
        V=_frozen(V),
        C_R=_frozen(C_R),
        C_T=_frozen(C_T),
        n=len(R),
        m=len(T),
        q=int(V.size),
        t_pos=_frozen(t_pos),
    )


def _check_ids(instance: Instance, point_ids: Iterable[int]) -> np.ndarray:
    ids = np.fromiter((int(p) for p in point_ids), dtype=np.int64)
    bad = ids[(ids < 0) | (ids >= instance.m)]
    if bad.size:
        raise UnknownPointId(f"test point id {int(bad[0])} not in 0..{instance.m - 1}")
    if np.unique(ids).size != ids.size:
        seen = set()
        for p in ids.tolist():
            if p in seen:
                raise DuplicatePointId(f"test point id {p} used more than once")
            seen.add(p)
    return ids


def cumvec_of(instance: Instance, point_ids: Iterable[int]) -> CumulativeVector:
    ids = _check_ids(instance, point_ids)
    counts = np.bincount(instance.t_pos[ids], minlength=instance.q + 1)
    return CumulativeVector(_frozen(np.cumsum(counts).astype(np.int64)))


def cumvec_from_counts(instance: Instance, counts) -> CumulativeVector:
    """Cumulative vector of the sub-multiset with ``counts[i]`` copies of ``V[i]``."""
    counts = np.asarray(counts, dtype=np.int64)
    if counts.shape != (instance.q,):
        raise ValueError(f"expected {instance.q} counts, got shape {counts.shape}")
    if np.any(counts < 0) or np.any(counts > np.diff(instance.C_T)):
        raise ExceedsMultiplicity("counts are not a sub-multiset of the test set")
    c = np.zeros(instance.q + 1, dtype=np.int64)
    np.cumsum(counts, out=c[1:])
    return CumulativeVector(_frozen(c))


def cdf_after_removal(instance: Instance, C_S: CumulativeVector, i: int) -> float:
    """Empirical CDF of ``T \\ S`` at ``V[i - 1]``: (C_T[i] - c_i) / (m - c_q)."""
    rest = instance.m - C_S.h
    if rest <= 0:
        raise RemovedEverything("cannot evaluate the CDF of an empty residual test set")
    if not 0 <= i <= instance.q:
        raise IndexError(f"index {i} outside 0..{instance.q}")
    return float(instance.C_T[i] - C_S.c[i]) / rest
