"""Turn raw (score, label) data into the solver inputs.

Sorts and uniquifies the scores, aggregates labels into per-score counts,
builds the per-unique-score loss totals and the candidate threshold vector
(-inf, midpoints between consecutive unique scores, +inf).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .labeling import as_sample_arrays
from .losses import LossSpec

__all__ = ["PreparedProblem", "prepare", "loss_matrix_parallel"]


@dataclass(frozen=True, eq=False)
class PreparedProblem:
    """Immutable solver input.

    loss_matrix[j, k] is the total loss over all samples with the j-th
    unique score if they were all predicted as class k+1 (0-based k).
    candidates has N+1 entries; any threshold the solvers return is one of
    them.
    """

    classes: int
    unique_scores: np.ndarray
    label_counts: np.ndarray
    loss_matrix: np.ndarray
    candidates: np.ndarray
    n: int
    loss: LossSpec
    # column-major copy for the per-threshold solvers' column scans
    loss_matrix_t: np.ndarray = field(repr=False)

    @property
    def n_unique(self) -> int:
        return self.unique_scores.size


def loss_matrix_parallel(label_counts, loss: LossSpec, workers: int = 1) -> np.ndarray:
    """Per-unique-score loss totals, optionally computed by row chunks.

    Bit-identical output for every worker count: the per-row accumulation
    order never changes, only which thread runs which rows.
    """
    counts = np.ascontiguousarray(label_counts, dtype=np.float64)
    n_rows = counts.shape[0]
    if counts.ndim != 2 or counts.shape[1] != loss.classes:
        raise ValueError("label_counts must be N x K for the given loss")
    out = np.empty((n_rows, loss.classes), dtype=np.float64)
    workers = max(1, int(workers))
    if workers == 1 or n_rows < 2 * workers:
        _kernels.loss_matrix_rows(counts, loss.table, out, 0, n_rows)
        return out
    bounds = np.linspace(0, n_rows, workers + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_kernels.loss_matrix_rows, counts, loss.table, out, lo, hi)
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        for f in futures:
            f.result()
    return out


def prepare(samples, loss: LossSpec, workers: int = 1) -> PreparedProblem:
    """Build a PreparedProblem from samples; independent of input order."""
    scores, labels = as_sample_arrays(samples)
    if labels.min() < 1 or labels.max() > loss.classes:
        bad = labels[(labels < 1) | (labels > loss.classes)][0]
        raise ValueError(f"label {bad} outside [1, {loss.classes}]")

    unique, inverse = np.unique(scores, return_inverse=True)
    n_unique = unique.size
    counts = np.zeros((n_unique, loss.classes), dtype=np.int64)
    np.add.at(counts, (inverse, labels - 1), 1)

    matrix = loss_matrix_parallel(counts, loss, workers=workers)

    candidates = np.empty(n_unique + 1, dtype=np.float64)
    candidates[0] = -np.inf
    candidates[-1] = np.inf
    if n_unique > 1:
        candidates[1:-1] = 0.5 * (unique[:-1] + unique[1:])
        # adjacent scores one ulp apart have no representable midpoint
        if not (
            np.all(unique[:-1] < candidates[1:-1])
            and np.all(candidates[1:-1] < unique[1:])
        ):
            raise ValueError(
                "two unique scores are too close for a strictly separating midpoint"
            )

    for arr in (unique, counts, matrix, candidates):
        arr.setflags(write=False)
    matrix_t = np.ascontiguousarray(matrix.T)
    matrix_t.setflags(write=False)
    return PreparedProblem(
        classes=loss.classes,
        unique_scores=unique,
        label_counts=counts,
        loss_matrix=matrix,
        candidates=candidates,
        n=scores.size,
        loss=loss,
        loss_matrix_t=matrix_t,
    )
