"""Command-line front end.

Exit codes: 0 success/pass, 1 test failed (``test`` only) or oracle mismatch,
2 input error, 3 nothing to explain, 4 internal verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, _backend
from .cumvec import build_instance
from .datagen import RNG_ALGORITHM, SynthSpec, sliding_windows, synth_drift, synth_failed, write_csv
from .errors import (
    InternalVerificationFailure,
    KsExplainError,
    NoExplanationExists,
    TestNotFailed,
)
from .explainer import PreferenceList, most_comprehensible
from .io import read_column, read_rank_file
from .kstest import ALPHA_EXISTENCE_LIMIT, ks_test
from .metrics import METHODS, BatchReport, compare_methods, rmse
from .oracle import DEFAULT_CAP, brute_force_explanation

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_NOT_FAILED, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _emit(obj, output=None) -> None:
    text = json.dumps(obj, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _warn_alpha(alpha: float) -> None:
    if alpha > ALPHA_EXISTENCE_LIMIT:
        print(
            f"warning: alpha={alpha} exceeds 2/e^2 ~ {ALPHA_EXISTENCE_LIMIT:.4f}; "
            "an explanation is no longer guaranteed to exist",
            file=sys.stderr,
        )


def _alpha(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {v}")
    return v


def _threads(arg: int | None) -> int:
    if arg is not None:
        return max(1, arg)
    env = os.environ.get("KSEXPLAIN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"warning: ignoring KSEXPLAIN_THREADS={env!r}", file=sys.stderr)
    return 1


# -- test ---------------------------------------------------------------------

def cmd_test(args) -> int:
    _warn_alpha(args.alpha)
    ref = read_column(args.reference)
    test = read_column(args.test)
    v = ks_test(ref.values, test.values, args.alpha)
    _emit(
        {
            "schema": f"ksexplain.test/{SCHEMA_VERSION}",
            "reference": str(args.reference),
            "test": str(args.test),
            "alpha": args.alpha,
            "n": len(ref.values),
            "m": len(test.values),
            "statistic": v.statistic,
            "threshold": v.threshold,
            "result": "fail" if v.failed else "pass",
        },
        args.output,
    )
    return EXIT_FAILED if v.failed else EXIT_OK


# -- explain ------------------------------------------------------------------

def _preference_for_file(args, test_col, m: int) -> tuple[PreferenceList, dict]:
    if args.rank_file:
        return PreferenceList(read_rank_file(args.rank_file), m=m), {"source": "rank-file", "path": str(args.rank_file)}
    if args.score_column:
        return PreferenceList.from_scores(test_col.scores), {"source": "score-column", "order": "descending, stable ties"}
    return PreferenceList.natural(m), {"source": "natural"}


def cmd_explain(args) -> int:
    _warn_alpha(args.alpha)
    ref = read_column(args.reference)
    test = read_column(args.test, want_scores=args.score_column)
    instance = build_instance(ref.values, test.values, args.alpha)
    L, pref_info = _preference_for_file(args, test, instance.m)
    verdict = ks_test(instance.R, instance.T, args.alpha)
    if not verdict.failed:
        raise TestNotFailed(
            f"test passes at alpha={args.alpha} (D={verdict.statistic:.6g} <= {verdict.threshold:.6g}); nothing to explain"
        )
    expl = most_comprehensible(instance, L)
    after = ks_test(instance.R, instance.T.without(expl.points), args.alpha)
    report = {
        "schema": f"ksexplain.explain/{SCHEMA_VERSION}",
        "reference": str(args.reference),
        "test": str(args.test),
        "alpha": args.alpha,
        "c_alpha": instance.c_alpha,
        "preference": pref_info,
        "n": instance.n,
        "m": instance.m,
        "q": instance.q,
        "statistic": verdict.statistic,
        "threshold": verdict.threshold,
        "k": expl.k,
        "k_hat": expl.k_hat,
        "size_scans": expl.size_scans,
        "candidate_checks": expl.candidate_checks,
        "points": [
            {"index": p, "value": float(instance.T.values[p]), "rank": int(L.rank[p]), "line": test.lines[p]}
            for p in expl.points
        ],
        "verified": expl.verified,
        "statistic_after": after.statistic,
        "threshold_after": after.threshold,
        "rmse_before": rmse(instance, ()),
        "rmse_after": rmse(instance, expl.points),
    }
    if args.timing:
        report["timing"] = {"phase1_size": expl.timing["size"], "phase2_construct": expl.timing["construct"],
                            "verify": expl.timing["verify"]}
    _emit(report, args.output)
    return EXIT_OK


# -- batch --------------------------------------------------------------------

def _batch_one(job):
    test_id, offset, ref_vals, test_vals, scores, opts = job
    instance = build_instance(ref_vals, test_vals, opts["alpha"])
    if not ks_test(instance.R, instance.T, opts["alpha"]).failed:
        return test_id, offset, False, []
    pref = opts["preference"]
    if pref == "score":
        L = PreferenceList.from_scores(scores)
    elif pref == "random":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([opts["seed"], test_id])))
        L = PreferenceList.random(instance.m, rng)
    else:
        L = PreferenceList.natural(instance.m)
    rows = compare_methods(instance, L, opts["methods"], test_id=test_id, oracle_cap=opts["oracle_cap"])
    return test_id, offset, True, rows


def cmd_batch(args) -> int:
    _warn_alpha(args.alpha)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = sorted(set(methods) - set(METHODS))
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown methods {unknown}; choose from {list(METHODS)}")
    col = read_column(args.series, want_scores=args.preference == "score")
    stride = args.stride or args.window
    opts = {"alpha": args.alpha, "preference": args.preference, "seed": args.seed,
            "methods": methods, "oracle_cap": args.oracle_cap}
    jobs = []
    for tid, pair in enumerate(sliding_windows(col.values, args.window, stride)):
        scores = None
        if col.scores is not None:
            scores = col.scores[pair.test_offset:pair.test_offset + args.window]
        jobs.append((tid, pair.offset, pair.reference.values, pair.test.values, scores, opts))
    workers = _threads(args.threads)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_batch_one, jobs))
    else:
        results = [_batch_one(j) for j in jobs]

    report = BatchReport()
    failed_tests = []
    for tid, offset, failed, rows in results:
        if failed:
            failed_tests.append({"test_id": tid, "offset": offset})
            report.extend(rows)
    header = {
        "schema": f"ksexplain.batch/{SCHEMA_VERSION}",
        "series": str(args.series),
        "window": args.window,
        "stride": stride,
        "alpha": args.alpha,
        "preference": args.preference,
        "methods": methods,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "oracle_cap": args.oracle_cap,
    }
    if args.format == "csv":
        _write_batch_csv(report, args.output, args.timing)
    else:
        _emit(
            {
                **header,
                "tests_total": len(jobs),
                "tests_failed": len(failed_tests),
                "failed_tests": failed_tests,
                "rows": [r.as_dict(args.timing) for r in report.rows],
                "aggregate": report.aggregate(args.timing),
            },
            args.output,
        )
    return EXIT_OK


def _write_batch_csv(report: BatchReport, output, with_timing: bool) -> None:
    import csv
    import io

    cols = ["test_id", "method", "size", "rmse", "rmse_before", "reversed", "ise", "k_hat", "points", "error"]
    if with_timing:
        cols.insert(7, "runtime")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in report.rows:
        d = r.as_dict(with_timing)
        d["points"] = " ".join(str(p) for p in d["points"])
        w.writerow(["" if d[c] is None else d[c] for c in cols])
    if output:
        Path(output).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())


# -- oracle-check -------------------------------------------------------------

def _random_case(rng, min_size, max_size, alphabet, alphas):
    n = int(rng.integers(min_size, max_size + 1))
    m = int(rng.integers(min_size, max_size + 1))
    a = int(rng.integers(1, alphabet + 1))
    letters = np.round(np.sort(rng.normal(size=a)), 3)
    R = rng.choice(letters, n)
    T = rng.choice(letters, m)
    alpha = float(alphas[int(rng.integers(len(alphas)))])
    return R, T, alpha, rng.permutation(m)


def _mismatch(R, T, alpha, L, cap):
    """None if MOCHE and brute force agree (or the case is not a failed test)."""
    inst = build_instance(R, T, alpha)
    if not inst.failed():
        return None
    try:
        got = most_comprehensible(inst, L).points
    except (KsExplainError, AssertionError) as exc:
        got = f"{type(exc).__name__}: {exc}"
    try:
        want = brute_force_explanation(inst, L, cap=cap).points
    except NoExplanationExists:
        want = "NoExplanationExists"
    if got == want:
        return None
    return {"moche": got if isinstance(got, str) else list(got),
            "brute_force": want if isinstance(want, str) else list(want)}


def _shrink(R, T, alpha, L, cap):
    """Drop single points while the disagreement persists."""
    R, T, L = list(R), list(T), list(L)
    changed = True
    while changed:
        changed = False
        for i in range(len(R)):
            if len(R) > 1:
                cand = R[:i] + R[i + 1:]
                if _mismatch(cand, T, alpha, L, cap):
                    R, changed = cand, True
                    break
        for j in range(len(T)):
            if len(T) > 2:
                cand = T[:j] + T[j + 1:]
                cand_L = [p - (p > j) for p in L if p != j]
                if _mismatch(R, cand, alpha, cand_L, cap):
                    T, L, changed = cand, cand_L, True
                    break
    return R, T, L


def cmd_oracle_check(args) -> int:
    alphas = [float(a) for a in args.alphas.split(",")]
    for a in alphas:
        _alpha(str(a))
    if args.max_size > args.oracle_cap:
        raise argparse.ArgumentTypeError(f"--max-size {args.max_size} exceeds --oracle-cap {args.oracle_cap}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(args.seed)))
    checked = 0
    draws = 0
    failures = []
    while checked < args.count:
        draws += 1
        R, T, alpha, L = _random_case(rng, args.min_size, args.max_size, args.alphabet, alphas)
        if not build_instance(R, T, alpha).failed():
            continue
        checked += 1
        bad = _mismatch(R, T, alpha, L, args.oracle_cap)
        if bad:
            r, t, l = _shrink(R.tolist(), T.tolist(), alpha, L.tolist(), args.oracle_cap)
            failures.append({"case": checked - 1, "alpha": alpha, "reference": r, "test": t,
                             "preference": l, **(_mismatch(r, t, alpha, l, args.oracle_cap) or bad)})
            if len(failures) >= args.max_failures:
                break
    summary = {
        "schema": f"ksexplain.oracle-check/{SCHEMA_VERSION}",
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "count": args.count,
        "size_range": [args.min_size, args.max_size],
        "alphabet": args.alphabet,
        "alphas": alphas,
        "checked": checked,
        "draws": draws,
        "mismatches": len(failures),
        "result": "pass" if not failures else "fail",
        "reproductions": failures,
    }
    _emit(summary, args.output)
    return EXIT_OK if not failures else EXIT_FAILED


# -- synth --------------------------------------------------------------------

def cmd_synth(args) -> int:
    spec = SynthSpec(w=args.window, p=args.fraction, seed=args.seed)
    attempt = None
    if args.until_failed:
        R, T, attempt = synth_failed(spec, alpha=args.alpha, max_retries=args.max_retries)
    else:
        R, T = synth_drift(spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "reference.csv", R.values, header="value")
    write_csv(out / "test.csv", T.values, header="value")
    write_csv(out / "series.csv", np.concatenate((R.values, T.values)), header="value")
    v = ks_test(R, T, args.alpha)
    _emit({
        "schema": f"ksexplain.synth/{SCHEMA_VERSION}",
        "window": spec.w,
        "fraction": spec.p,
        "replaced": spec.replaced,
        "seed": spec.seed,
        "rng": RNG_ALGORITHM,
        "attempt": attempt,
        "alpha": args.alpha,
        "statistic": v.statistic,
        "threshold": v.threshold,
        "result": "fail" if v.failed else "pass",
        "files": [str(out / f) for f in ("reference.csv", "test.csv", "series.csv")],
    })
    return EXIT_OK


# -- bench --------------------------------------------------------------------

def cmd_bench(args) -> int:
    from .bench import run_benchmark

    result = run_benchmark(window=args.window, fraction=args.fraction, seed=args.seed, alpha=args.alpha,
                           repeat=args.repeat, greedy=args.greedy, backends=args.backends)
    _emit(result, args.output)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ksexplain", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, alpha=True):
        if alpha:
            sp.add_argument("--alpha", type=_alpha, default=0.05, help="significance level (default 0.05)")
        sp.add_argument("-o", "--output", help="write the report here instead of stdout")

    sp = sub.add_parser("test", help="run a two-sample KS test")
    sp.add_argument("reference")
    sp.add_argument("test")
    common(sp)
    sp.set_defaults(func=cmd_test)

    sp = sub.add_parser("explain", help="explain a failed KS test")
    sp.add_argument("reference")
    sp.add_argument("test")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--rank-file", help="one test-row index per line, most preferred first")
    g.add_argument("--score-column", action="store_true",
                   help="rank test rows by the second CSV column, highest first")
    sp.add_argument("--timing", action="store_true", help="include wall-clock timings (non-deterministic)")
    common(sp)
    sp.set_defaults(func=cmd_explain)

    sp = sub.add_parser("batch", help="explain every failed test along a series")
    sp.add_argument("series")
    sp.add_argument("-w", "--window", type=int, required=True)
    sp.add_argument("--stride", type=int, default=None, help="default: the window size")
    sp.add_argument("--preference", choices=["natural", "score", "random"], default="natural")
    sp.add_argument("--methods", default="moche,greedy")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--threads", type=int, default=None, help="worker processes (env KSEXPLAIN_THREADS)")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    sp.add_argument("--timing", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_batch)

    sp = sub.add_parser("oracle-check", help="cross-check MOCHE against brute force on random instances")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--min-size", type=int, default=3)
    sp.add_argument("--max-size", type=int, default=12)
    sp.add_argument("--alphabet", type=int, default=6)
    sp.add_argument("--alphas", default="0.05,0.1,0.2")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle-cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--max-failures", type=int, default=5)
    common(sp, alpha=False)
    sp.set_defaults(func=cmd_oracle_check)

    sp = sub.add_parser("synth", help="write a synthetic drift pair as CSV")
    sp.add_argument("-w", "--window", type=int, default=1000)
    sp.add_argument("-p", "--fraction", type=float, default=0.03)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--until-failed", action="store_true")
    sp.add_argument("--max-retries", type=int, default=100)
    sp.add_argument("--alpha", type=_alpha, default=0.05)
    sp.add_argument("--out-dir", required=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("bench", help="time MOCHE per kernel backend (and the greedy baseline)")
    sp.add_argument("-w", "--window", type=int, default=10000)
    sp.add_argument("-p", "--fraction", type=float, default=0.03)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--greedy", action="store_true")
    sp.add_argument("--backends", default=",".join(_backend.available()))
    common(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except TestNotFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FAILED
    except InternalVerificationFailure as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (KsExplainError, argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
