"""Synthetic ordinal data for tests and benchmarks.

gen_olr samples from the cumulative-link (ordinal logistic) model: class
probabilities are consecutive differences of sigmoid(b_k - score) for a
nondecreasing bias vector b.  gen_adversarial stresses the solvers' tie
handling with duplicated scores and label noise.

All randomness comes from numpy's PCG64 generator so a seed reproduces the
same data on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = ["OlrParams", "olr_class_probs", "gen_olr", "gen_adversarial", "RNG_ALGORITHM"]

RNG_ALGORITHM = "pcg64"


@dataclass(frozen=True)
class OlrParams:
    """Sampling parameters for the ordinal logistic model.

    dist selects the score distribution: "uniform" with bounds
    (dist_a, dist_b) or "normal" with mean dist_a and stddev dist_b.
    """

    classes: int
    biases: np.ndarray
    dist: str = "uniform"
    dist_a: float = -4.0
    dist_b: float = 4.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.classes < 2:
            raise ValueError(f"need at least 2 classes, got {self.classes}")
        b = np.asarray(self.biases, dtype=np.float64)
        if b.shape != (self.classes - 1,):
            raise ValueError(
                f"need {self.classes - 1} biases for {self.classes} classes, got {b.shape}"
            )
        if not np.all(np.isfinite(b)):
            raise ValueError("biases must be finite")
        if np.any(b[:-1] > b[1:]):
            raise ValueError("biases must be nondecreasing")
        if self.dist == "uniform":
            if not self.dist_a < self.dist_b:
                raise ValueError("uniform score range needs dist_a < dist_b")
        elif self.dist == "normal":
            if not self.dist_b > 0:
                raise ValueError("normal score stddev must be positive")
        else:
            raise ValueError(f"unknown score distribution {self.dist!r}")
        b.setflags(write=False)
        object.__setattr__(self, "biases", b)


def olr_class_probs(a: float, params: OlrParams) -> np.ndarray:
    """Class probability vector at score a: differences of sigmoid(b_k - a)."""
    cums = expit(params.biases - a)
    return np.diff(np.concatenate(([0.0], cums, [1.0])))


def _draw_scores(rng: np.random.Generator, n: int, params: OlrParams) -> np.ndarray:
    if params.dist == "uniform":
        return rng.uniform(params.dist_a, params.dist_b, size=n)
    return rng.normal(params.dist_a, params.dist_b, size=n)


def gen_olr(n: int, params: OlrParams) -> tuple[np.ndarray, np.ndarray]:
    """Draw n (score, label) samples from the model; deterministic per seed."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    rng = np.random.default_rng(params.seed)
    scores = _draw_scores(rng, n, params)
    # cumulative P(Y <= y | score) per sample; invert by counting
    cums = expit(params.biases[None, :] - scores[:, None])
    u = rng.random(n)
    labels = 1 + (u[:, None] >= cums).sum(axis=1).astype(np.int64)
    return scores, labels


def gen_adversarial(
    n: int, classes: int, duplicate_fraction: float, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Tie-stressing instance: controlled score duplication plus label noise.

    duplicate_fraction 0 gives n distinct scores, 1 collapses them to a
    single value; every distinct value is used at least once, so the number
    of unique scores is exactly max(1, round(n * (1 - duplicate_fraction))).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    if not 0.0 <= duplicate_fraction <= 1.0:
        raise ValueError(f"duplicate_fraction must be in [0, 1], got {duplicate_fraction}")
    rng = np.random.default_rng(seed)
    n_unique = max(1, round(n * (1.0 - duplicate_fraction)))
    # distinct integers scaled/shifted stay distinct
    grid = rng.choice(8 * n, size=n_unique, replace=False).astype(np.float64)
    values = np.sort(grid) * rng.uniform(0.5, 2.0) + rng.normal(0.0, 10.0)
    extra = rng.choice(values, size=n - n_unique, replace=True)
    scores = np.concatenate([values, extra])

    # labels roughly track score rank, then take jitter and outright noise
    order = np.searchsorted(values, scores)
    span = max(1, n_unique - 1)
    ideal = 1 + np.floor(order / span * (classes - 1) + 0.5)
    jitter = rng.integers(-1, 2, size=n)
    labels = np.clip(ideal + jitter, 1, classes).astype(np.int64)
    noisy = rng.random(n) < 0.1
    labels[noisy] = rng.integers(1, classes + 1, size=int(noisy.sum()))

    perm = rng.permutation(n)
    return scores[perm], labels[perm]
