"""Compare the compiled and numpy kernels (and the greedy baseline) on synthetic drift.

    python benchmarks/bench_backends.py              # w = 1e3, 1e4
    python benchmarks/bench_backends.py 100000       # add larger windows
"""
import sys

from ksexplain.bench import run_benchmark

windows = [int(a) for a in sys.argv[1:]] or [1000, 10000]
print(f"{'w':>8} {'p':>5} {'k':>6} {'k_hat':>6} {'checks':>7} {'python s':>10} {'cython s':>10} {'speedup':>8} {'greedy s':>9}")
for w in windows:
    for p in (0.03, 0.10):
        r = run_benchmark(window=w, fraction=p, repeat=3, greedy=w <= 10000)
        py = r["moche"].get("python", {})
        cy = r["moche"].get("cython", {})
        any_ = cy or py
        print(
            f"{w:>8} {p:>5.2f} {any_['k']:>6} {any_['k_hat']:>6} {any_['candidate_checks']:>7} "
            f"{py.get('seconds', float('nan')):>10.4f} {cy.get('seconds', float('nan')):>10.4f} "
            f"{r.get('speedup_cython_over_python', float('nan')):>8.1f} "
            f"{r.get('greedy', {}).get('seconds', float('nan')):>9.3f}"
        )
        assert r["backends_agree"], "backends disagree"
