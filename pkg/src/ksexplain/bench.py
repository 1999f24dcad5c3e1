"""Timing harness: MOCHE per kernel backend, optionally against the greedy baseline."""
from __future__ import annotations

import time

import numpy as np

from . import _backend
from .cumvec import build_instance
from .datagen import RNG_ALGORITHM, SynthSpec, synth_failed
from .explainer import PreferenceList, most_comprehensible
from .oracle import greedy_baseline


def _best_of(fn, repeat: int):
    best = float("inf")
    out = None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def run_benchmark(window=10000, fraction=0.03, seed=0, alpha=0.05, repeat=3, greedy=False,
                  backends="python,cython") -> dict:
    if isinstance(backends, str):
        backends = [b.strip() for b in backends.split(",") if b.strip()]
    R, T, attempt = synth_failed(SynthSpec(w=window, p=fraction, seed=seed), alpha=alpha)
    instance = build_instance(R, T, alpha)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1 << 20])))
    L = PreferenceList.random(instance.m, rng)
    result = {
        "window": window,
        "fraction": fraction,
        "seed": seed,
        "rng": RNG_ALGORITHM,
        "attempt": attempt,
        "alpha": alpha,
        "q": instance.q,
        "preference": "random permutation",
        "moche": {},
    }
    answers = {}
    for name in backends:
        if name not in _backend.available():
            result["moche"][name] = {"error": "backend unavailable"}
            continue
        with _backend.use_backend(name):
            secs, expl = _best_of(lambda: most_comprehensible(instance, L), repeat)
        answers[name] = expl.points
        result["moche"][name] = {
            "seconds": secs,
            "k": expl.k,
            "k_hat": expl.k_hat,
            "candidate_checks": expl.candidate_checks,
            "phase_seconds": expl.timing,
        }
    result["backends_agree"] = len(set(answers.values())) <= 1
    timed = {k: v["seconds"] for k, v in result["moche"].items() if "seconds" in v}
    if "python" in timed and "cython" in timed:
        result["speedup_cython_over_python"] = timed["python"] / timed["cython"]
    if greedy:
        secs, g = _best_of(lambda: greedy_baseline(instance, L), 1)
        result["greedy"] = {"seconds": secs, "size": g.size}
        fastest = min(timed.values()) if timed else None
        if fastest:
            result["greedy_over_moche"] = secs / fastest
    return result
