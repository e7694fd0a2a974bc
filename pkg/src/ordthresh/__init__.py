"""Optimal threshold labeling for ordinal regression scores.

Given precomputed scalar scores and their ordinal labels, find the K-1
thresholds that minimize the empirical task risk for a user-chosen loss,
by sequential dynamic programming, by per-threshold independent
optimization, or by its block-parallel variant.
"""

from .bench import BenchConfig, BenchReport, BenchRow, RiskMismatchError, run_bench, scaling_probe
from .datagen import OlrParams, gen_adversarial, gen_olr, olr_class_probs
from .labeling import (
    RiskValue,
    Sample,
    ThresholdVector,
    empirical_risk,
    label_scores,
    r_k_direct,
    threshold_label,
)
from .losses import LossSpec, build_loss, is_convex_loss, load_custom_loss, load_loss_file
from .prepare import PreparedProblem, loss_matrix_parallel, prepare
from .solvers import (
    InstanceTooLargeError,
    OrderViolatedError,
    SolveReport,
    default_block_length,
    risk_columns,
    risk_from_indices,
    solve_brute,
    solve_dp,
    solve_io,
    solve_pio,
)

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "BenchReport",
    "BenchRow",
    "InstanceTooLargeError",
    "LossSpec",
    "OlrParams",
    "OrderViolatedError",
    "PreparedProblem",
    "RiskMismatchError",
    "RiskValue",
    "Sample",
    "SolveReport",
    "ThresholdVector",
    "build_loss",
    "default_block_length",
    "empirical_risk",
    "gen_adversarial",
    "gen_olr",
    "is_convex_loss",
    "label_scores",
    "load_custom_loss",
    "load_loss_file",
    "loss_matrix_parallel",
    "olr_class_probs",
    "prepare",
    "r_k_direct",
    "risk_columns",
    "risk_from_indices",
    "run_bench",
    "scaling_probe",
    "solve_brute",
    "solve_dp",
    "solve_io",
    "solve_pio",
    "threshold_label",
]
