"""Threshold labeling and the empirical task risk it is scored by.

A score u is mapped to class 1 + #{k : u >= t_k} by K-1 thresholds t.
Thresholds live on the extended real line; -inf/+inf are ordinary IEEE
infinities, so the comparisons need no sentinels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

__all__ = [
    "Sample",
    "ThresholdVector",
    "RiskValue",
    "threshold_label",
    "label_scores",
    "empirical_risk",
    "r_k_direct",
    "as_sample_arrays",
]


class Sample(NamedTuple):
    score: float
    label: int


class RiskValue(NamedTuple):
    sum: float
    mean: float


@dataclass(frozen=True)
class ThresholdVector:
    """K-1 extended-real thresholds, ideally (but not necessarily) sorted.

    Raw independent-optimization output may violate the nondecreasing order;
    the order is therefore a queryable property, not a construction invariant.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("thresholds must be a nonempty 1-d sequence")
        if np.any(np.isnan(vals)):
            raise ValueError("thresholds must not contain NaN")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def classes(self) -> int:
        return self.values.size + 1

    @property
    def is_nondecreasing(self) -> bool:
        return bool(np.all(self.values[:-1] <= self.values[1:]))

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)


def _threshold_values(thresholds) -> np.ndarray:
    if isinstance(thresholds, ThresholdVector):
        return thresholds.values
    return ThresholdVector(np.asarray(thresholds, dtype=np.float64)).values


def as_sample_arrays(samples) -> tuple[np.ndarray, np.ndarray]:
    """Normalize samples to (scores, labels) float64/int64 arrays.

    Accepts a sequence of (score, label) pairs or an already-split
    (scores, labels) pair of numpy arrays.
    """
    if (
        isinstance(samples, tuple)
        and len(samples) == 2
        and isinstance(samples[0], np.ndarray)
        and isinstance(samples[1], np.ndarray)
    ):
        scores = np.asarray(samples[0], dtype=np.float64)
        labels = np.asarray(samples[1], dtype=np.int64)
    else:
        pairs = list(samples)
        scores = np.asarray([p[0] for p in pairs], dtype=np.float64)
        labels = np.asarray([p[1] for p in pairs], dtype=np.int64)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be 1-d and of equal length")
    if scores.size == 0:
        raise ValueError("empty sample set")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    return scores, labels


def threshold_label(u: float, thresholds) -> int:
    """Label a single finite score: 1 + #{k : u >= t_k}.

    A score equal to a threshold takes the upper class (>=, not >).
    """
    if not np.isfinite(u):
        raise ValueError(f"score must be finite, got {u}")
    t = _threshold_values(thresholds)
    return 1 + int(np.count_nonzero(u >= t))


def label_scores(scores, thresholds) -> np.ndarray:
    """Vectorized threshold_label over an array of finite scores."""
    u = np.asarray(scores, dtype=np.float64)
    if u.size and not np.all(np.isfinite(u)):
        raise ValueError("scores must be finite")
    t = _threshold_values(thresholds)
    if np.all(t[:-1] <= t[1:]):
        # sorted thresholds: count via binary search (counts t_k <= u)
        return 1 + np.searchsorted(t, u, side="right").astype(np.int64)
    return 1 + (u[:, None] >= t[None, :]).sum(axis=1).astype(np.int64)


def empirical_risk(samples, thresholds, loss) -> RiskValue:
    """Empirical task risk of a threshold vector, as (sum, mean).

    The sum is the exact quantity the solvers minimize; equality checks in
    this library always compare sums, never means.
    """
    scores, labels = as_sample_arrays(samples)
    if labels.min() < 1 or labels.max() > loss.classes:
        raise ValueError("labels out of range for the loss table")
    predicted = label_scores(scores, thresholds)
    total = float(loss.table[predicted - 1, labels - 1].sum())
    return RiskValue(total, total / scores.size)


def r_k_direct(samples, k: int, thresh: float, loss) -> float:
    """Two-class reduction risk for threshold slot k (1-based).

    Mean loss when scores below `thresh` are labeled k and the rest k+1.
    `thresh` may be +-inf.  Kept as a plain-enumeration oracle for the
    risk decomposition identity; the solvers never call it.
    """
    if not 1 <= k <= loss.classes - 1:
        raise ValueError(f"k must be in [1, {loss.classes - 1}], got {k}")
    scores, labels = as_sample_arrays(samples)
    predicted = k + (scores >= thresh).astype(np.int64)
    return float(loss.table[predicted - 1, labels - 1].mean())
