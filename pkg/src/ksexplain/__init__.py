"""Two-sample KS tests and most comprehensible counterfactual explanations of failed tests."""

__version__ = "0.1.0"

from ._backend import current as kernel_backend
from .cumvec import CumulativeVector, Instance, build_instance, cdf_after_removal, cumvec_of
from .datagen import SynthSpec, WindowPair, sliding_windows, synth_drift, synth_failed
from .errors import *  # noqa: F401,F403
from .explainer import (
    Explanation,
    PreferenceList,
    incremental_cumvec_add,
    is_partial_explanation,
    most_comprehensible,
)
from .kstest import KsVerdict, Sample, critical_coefficient, ks_statistic, ks_test, ks_threshold
from .metrics import BatchReport, compare_methods, rmse
from .oracle import OracleResult, brute_force_explanation, greedy_baseline
from .sizer import (
    BoundsTable,
    SizeResult,
    bounds,
    exists_qualified,
    explanation_size,
    gamma,
    lower_bound_size,
    necessary_holds,
    omega,
    witness_subset,
)


def explain(reference, test, alpha=0.05, preference=None) -> Explanation:
    """Explain a failed test in one call; ``preference`` defaults to input order."""
    instance = build_instance(reference, test, alpha)
    L = PreferenceList.natural(instance.m) if preference is None else preference
    return most_comprehensible(instance, L)
