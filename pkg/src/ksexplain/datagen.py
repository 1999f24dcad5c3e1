"""Test-case generation: sliding window pairs and a synthetic drift generator."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidFraction, InvalidWindow, SeriesTooShort
from .kstest import Sample, ks_test

# Recorded in report headers so that generated data can be reproduced.
RNG_ALGORITHM = "numpy.random.PCG64/SeedSequence"
UNIFORM_LOW, UNIFORM_HIGH = -7.0, 7.0


@dataclass(frozen=True)
class WindowPair:
    reference: Sample
    test: Sample
    window_size: int
    offset: int

    @property
    def test_offset(self) -> int:
        return self.offset + self.window_size


def sliding_windows(series: Sequence[float], w: int, stride: int | None = None) -> Iterator[WindowPair]:
    """Yield (W, next window) pairs at offsets 0, stride, 2*stride, ...

    ``stride`` defaults to ``w``.
    """
    values = np.asarray(series, dtype=np.float64).ravel()
    stride = w if stride is None else int(stride)
    if w < 2:
        raise InvalidWindow(f"window size must be at least 2, got {w}")
    if stride < 1:
        raise InvalidWindow(f"stride must be positive, got {stride}")
    if values.size < 2 * w:
        raise SeriesTooShort(f"series has {values.size} values, need at least {2 * w} for w={w}")
    for off in range(0, values.size - 2 * w + 1, stride):
        yield WindowPair(Sample(values[off:off + w]), Sample(values[off + w:off + 2 * w]), w, off)


@dataclass(frozen=True)
class SynthSpec:
    w: int
    p: float
    seed: int = 0

    @property
    def replaced(self) -> int:
        return int(round(self.p * self.w))


def _validate(spec: SynthSpec) -> None:
    if not 0.0 <= spec.p <= 1.0:
        raise InvalidFraction(f"drift fraction must lie in [0, 1], got {spec.p}")
    if spec.w < 10:
        raise InvalidWindow(f"window size must be at least 10, got {spec.w}")


def _draw(spec: SynthSpec, seed_seq: np.random.SeedSequence) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    ref = rng.standard_normal(spec.w)
    test = rng.standard_normal(spec.w)
    idx = rng.choice(spec.w, size=spec.replaced, replace=False)
    test[idx] = rng.uniform(UNIFORM_LOW, UNIFORM_HIGH, size=idx.size)
    return ref, test


def synth_drift(spec: SynthSpec) -> tuple[Sample, Sample]:
    """Standard normal R and T, with ``round(p * w)`` points of T replaced by Uniform[-7, 7]."""
    _validate(spec)
    ref, test = _draw(spec, np.random.SeedSequence(spec.seed))
    return Sample(ref), Sample(test)


def synth_failed(spec: SynthSpec, alpha: float = 0.05, max_retries: int = 100) -> tuple[Sample, Sample, int]:
    """Like ``synth_drift`` but redraws until the pair fails the KS test.

    Attempt ``j`` uses the sub-seed ``SeedSequence([seed, j])``; attempt 0 is
    a different stream from ``synth_drift``. Returns (R, T, attempt).
    """
    _validate(spec)
    for attempt in range(max_retries):
        ref, test = _draw(spec, np.random.SeedSequence([spec.seed, attempt]))
        R, T = Sample(ref), Sample(test)
        if ks_test(R, T, alpha).failed:
            return R, T, attempt
    raise RuntimeError(f"no failing pair in {max_retries} draws for {spec}")


def write_csv(path, values, header: str | None = None) -> None:
    """One value per row; ``repr`` keeps the float round-trippable."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        if header is not None:
            writer.writerow([header])
        for v in np.asarray(values, dtype=np.float64).ravel():
            writer.writerow([repr(float(v))])
