"""Threshold solvers: sequential DP, per-threshold independent optimization
(IO), its block-parallel variant (PIO), and a brute-force oracle.

DP is globally optimal for any loss.  IO minimizes each threshold's
two-class reduction independently; its output is optimal whenever it comes
out nondecreasing, which is guaranteed for losses that are convex in the
prediction argument.  PIO computes the same quantities as IO with each
column's prefix split into blocks, and returns identical results for every
block length and worker count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .labeling import ThresholdVector
from .prepare import PreparedProblem

__all__ = [
    "SolveReport",
    "OrderViolatedError",
    "InstanceTooLargeError",
    "ORDER_POLICIES",
    "solve_dp",
    "solve_io",
    "solve_pio",
    "solve_brute",
    "risk_from_indices",
    "risk_columns",
    "default_block_length",
]

ORDER_POLICIES = ("error", "fallback_dp", "return_raw")

BRUTE_FORCE_CAP = 5_000_000


class OrderViolatedError(RuntimeError):
    """Raised (under policy "error") when raw IO output is not nondecreasing."""

    def __init__(self, thresholds):
        self.thresholds = thresholds
        super().__init__(
            "independent optimization produced unordered thresholds; "
            "the loss is likely not convex in the prediction argument"
        )


class InstanceTooLargeError(ValueError):
    """Raised when brute-force enumeration would exceed its tuple cap."""


@dataclass(frozen=True)
class SolveReport:
    """Solver output: thresholds plus how much to trust them.

    chosen_indices are 0-based positions into the candidate vector;
    thresholds.values equals candidates[chosen_indices].  risk_sum is the
    n-scaled empirical risk (exact for integer losses); risk_mean divides
    by n.  optimal_claimed is True only when global optimality is actually
    guaranteed: always for dp/brute, for io/pio only when the output is
    ordered or the DP fallback ran.
    """

    thresholds: ThresholdVector
    chosen_indices: np.ndarray
    risk_sum: float
    risk_mean: float
    algorithm: str
    order_ok: bool
    optimal_claimed: bool
    fallback_used: bool
    wall_time: float


def default_block_length(n_slots: int) -> int:
    """Ceil of sqrt(n_slots): the order-sqrt(N) default block length for PIO."""
    root = math.isqrt(max(1, n_slots))
    return root + (root * root < n_slots)


def _default_workers(limit: int) -> int:
    return max(1, min(os.cpu_count() or 1, limit))


def _risk_of_indices(prep: PreparedProblem, indices: np.ndarray) -> float:
    ordered = np.sort(indices) if np.any(indices[:-1] > indices[1:]) else indices
    return float(
        _kernels.risk_of_sorted_indices(prep.loss_matrix, np.ascontiguousarray(ordered))
    )


def _report(prep, indices, algorithm, *, order_ok, optimal, fallback, wall_time):
    indices = np.asarray(indices, dtype=np.int64)
    indices.setflags(write=False)
    risk_sum = _risk_of_indices(prep, indices)
    return SolveReport(
        thresholds=ThresholdVector(prep.candidates[indices]),
        chosen_indices=indices,
        risk_sum=risk_sum,
        risk_mean=risk_sum / prep.n,
        algorithm=algorithm,
        order_ok=order_ok,
        optimal_claimed=optimal,
        fallback_used=fallback,
        wall_time=wall_time,
    )


# ---------------------------------------------------------------------------
# dynamic programming
# ---------------------------------------------------------------------------


def solve_dp(prep: PreparedProblem) -> SolveReport:
    """Sequential dynamic program; globally optimal for any loss."""
    t0 = time.perf_counter()
    cost = np.empty_like(prep.loss_matrix)
    indices = np.empty(prep.classes - 1, dtype=np.int64)
    _kernels.dp_forward(prep.loss_matrix, cost)
    _kernels.dp_backtrack(cost, indices)
    return _report(
        prep,
        indices,
        "dp",
        order_ok=True,
        optimal=True,
        fallback=False,
        wall_time=time.perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# independent optimization
# ---------------------------------------------------------------------------


def _check_policy(policy: str) -> None:
    if policy not in ORDER_POLICIES:
        raise ValueError(f"policy must be one of {ORDER_POLICIES}, got {policy!r}")


def _finish_independent(prep, indices, algorithm, policy, t0):
    """Shared order-condition handling for the IO-family solvers."""
    ordered = bool(np.all(indices[:-1] <= indices[1:]))
    if ordered:
        return _report(
            prep,
            indices,
            algorithm,
            order_ok=True,
            optimal=True,
            fallback=False,
            wall_time=time.perf_counter() - t0,
        )
    if policy == "error":
        raise OrderViolatedError(ThresholdVector(prep.candidates[indices]))
    if policy == "return_raw":
        return _report(
            prep,
            indices,
            algorithm,
            order_ok=False,
            optimal=False,
            fallback=False,
            wall_time=time.perf_counter() - t0,
        )
    rescue = solve_dp(prep)
    return _report(
        prep,
        rescue.chosen_indices,
        algorithm,
        order_ok=True,
        optimal=True,
        fallback=True,
        wall_time=time.perf_counter() - t0,
    )


def solve_io(
    prep: PreparedProblem, workers: int | None = None, policy: str = "fallback_dp"
) -> SolveReport:
    """Minimize each threshold's column independently; parallel over columns."""
    _check_policy(policy)
    n_cols = prep.classes - 1
    workers = _default_workers(n_cols) if workers is None else max(1, int(workers))
    workers = min(workers, n_cols)
    t0 = time.perf_counter()
    mt = prep.loss_matrix_t
    r = np.empty((n_cols, prep.n_unique + 1), dtype=np.float64)
    indices = np.empty(n_cols, dtype=np.int64)
    if workers == 1:
        _kernels.io_columns(mt, 0, n_cols, r, indices)
    else:
        bounds = np.linspace(0, n_cols, workers + 1, dtype=np.int64)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_kernels.io_columns, mt, lo, hi, r, indices)
                for lo, hi in zip(bounds[:-1], bounds[1:])
                if hi > lo
            ]
            for f in futures:
                f.result()
    return _finish_independent(prep, indices, "io", policy, t0)


def risk_columns(prep: PreparedProblem) -> np.ndarray:
    """The (K-1) x (N+1) matrix of shifted two-class-reduction risks.

    Row k starts at 0 and accumulates loss_matrix[:, k] - loss_matrix[:, k+1];
    entry j is n * (R_{k+1}(c_j) - R_{k+1}(c_0)) in mean-risk terms.  This is
    exactly the matrix solve_io minimizes over.
    """
    out = np.empty((prep.classes - 1, prep.n_unique + 1), dtype=np.float64)
    _kernels.io_columns(
        prep.loss_matrix_t,
        0,
        prep.classes - 1,
        out,
        np.empty(prep.classes - 1, dtype=np.int64),
    )
    return out


# ---------------------------------------------------------------------------
# block-parallel independent optimization
# ---------------------------------------------------------------------------


def solve_pio(
    prep: PreparedProblem,
    block_length: int | None = None,
    workers: int | None = None,
    policy: str = "fallback_dp",
) -> SolveReport:
    """IO with each column's prefix scan decomposed into blocks.

    Identical output to solve_io for every block length and worker count.
    Phase 1 scans blocks independently (per-block totals, local minima);
    after a barrier, phase 2 accumulates block offsets and merges minima.
    """
    _check_policy(policy)
    np1 = prep.n_unique + 1
    if block_length is None:
        block_length = default_block_length(np1)
    block_length = int(block_length)
    if block_length < 1:
        raise ValueError(f"block length must be >= 1, got {block_length}")
    n_cols = prep.classes - 1
    n_blocks = -(-np1 // block_length)
    workers = _default_workers(n_cols) if workers is None else max(1, int(workers))

    t0 = time.perf_counter()
    mt = prep.loss_matrix_t
    totals = np.empty((n_cols, n_blocks), dtype=np.float64)
    mins = np.empty((n_cols, n_blocks), dtype=np.float64)
    argmins = np.empty((n_cols, n_blocks), dtype=np.int64)
    indices = np.empty(n_cols, dtype=np.int64)

    if workers == 1:
        for k in range(n_cols):
            _kernels.pio_phase1(
                mt, k, block_length, 0, n_blocks, totals[k], mins[k], argmins[k]
            )
            indices[k] = _kernels.pio_phase2(totals[k], mins[k], argmins[k], n_blocks)
    else:
        # spread work over (column, block-range) tiles; split blocks only
        # when there are more workers than columns
        splits = min(n_blocks, -(-workers // n_cols))
        block_bounds = np.linspace(0, n_blocks, splits + 1, dtype=np.int64)
        tasks = [
            (k, lo, hi)
            for k in range(n_cols)
            for lo, hi in zip(block_bounds[:-1], block_bounds[1:])
            if hi > lo
        ]
        col_bounds = np.linspace(0, n_cols, min(workers, n_cols) + 1, dtype=np.int64)

        def merge(klo: int, khi: int):
            for k in range(klo, khi):
                indices[k] = _kernels.pio_phase2(
                    totals[k], mins[k], argmins[k], n_blocks
                )

        with ThreadPoolExecutor(max_workers=workers) as pool:
            phase1 = [
                pool.submit(
                    _kernels.pio_phase1,
                    mt,
                    k,
                    block_length,
                    lo,
                    hi,
                    totals[k],
                    mins[k],
                    argmins[k],
                )
                for k, lo, hi in tasks
            ]
            for f in phase1:  # barrier between the block scans and the merge
                f.result()
            phase2 = [
                pool.submit(merge, lo, hi)
                for lo, hi in zip(col_bounds[:-1], col_bounds[1:])
                if hi > lo
            ]
            for f in phase2:
                f.result()
    return _finish_independent(prep, indices, "pio", policy, t0)


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------


def solve_brute(prep: PreparedProblem, cap: int = BRUTE_FORCE_CAP) -> SolveReport:
    """Exhaustively try every nondecreasing candidate-index tuple.

    Evaluates each tuple's risk directly from the loss matrix (per-class
    prefix sums, no shared machinery with the DP or IO recurrences), so it
    can serve as an oracle for both.  Ties keep the lexicographically
    smallest tuple.
    """
    n_tuples = math.comb(prep.n_unique + prep.classes - 1, prep.classes - 1)
    if n_tuples > cap:
        raise InstanceTooLargeError(
            f"{n_tuples} candidate tuples exceed the cap of {cap}"
        )
    t0 = time.perf_counter()
    cum = np.zeros((prep.n_unique + 1, prep.classes), dtype=np.float64)
    np.cumsum(prep.loss_matrix, axis=0, out=cum[1:])
    indices = np.empty(prep.classes - 1, dtype=np.int64)
    _kernels.brute_force_search(cum, prep.n_unique, prep.classes, indices)
    return _report(
        prep,
        indices,
        "brute",
        order_ok=True,
        optimal=True,
        fallback=False,
        wall_time=time.perf_counter() - t0,
    )


def risk_from_indices(prep: PreparedProblem, indices) -> float:
    """n-scaled risk of thresholds at the given nondecreasing 0-based indices."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.shape != (prep.classes - 1,):
        raise ValueError(f"expected {prep.classes - 1} indices, got shape {idx.shape}")
    if np.any(idx[:-1] > idx[1:]):
        raise ValueError("indices must be nondecreasing")
    if idx.size and (idx.min() < 0 or idx.max() > prep.n_unique):
        raise ValueError(f"indices must lie in [0, {prep.n_unique}]")
    return float(_kernels.risk_of_sorted_indices(prep.loss_matrix, idx))
