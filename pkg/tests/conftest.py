"""Shared instance generators and independent oracles for the test suite."""

from __future__ import annotations

from itertools import combinations_with_replacement

import numpy as np
import pytest

from ordthresh import LossSpec, build_loss, empirical_risk, is_convex_loss, load_custom_loss


def candidate_vector(scores) -> np.ndarray:
    """-inf, midpoints of consecutive unique scores, +inf (built locally so
    oracle checks do not depend on the prepare module)."""
    unique = np.unique(np.asarray(scores, dtype=np.float64))
    cands = np.empty(unique.size + 1)
    cands[0] = -np.inf
    cands[-1] = np.inf
    cands[1:-1] = 0.5 * (unique[:-1] + unique[1:])
    return cands


def brute_min_risk(samples, loss: LossSpec) -> float:
    """Minimal risk sum by plain enumeration over all nondecreasing candidate
    tuples, evaluated sample-by-sample through the labeling module."""
    scores, _ = samples if isinstance(samples, tuple) else (
        np.asarray([s for s, _ in samples]),
        None,
    )
    cands = candidate_vector(scores)
    best = np.inf
    for combo in combinations_with_replacement(range(cands.size), loss.classes - 1):
        risk = empirical_risk(samples, cands[list(combo)], loss).sum
        if risk < best:
            best = risk
    return best


def random_convex_int_loss(rng: np.random.Generator, classes: int) -> LossSpec:
    """Random integer table convex in the prediction argument.

    Column-wise: integer start value and first difference, plus cumulative
    nonnegative second differences; each column is then shifted to min 0.
    """
    table = np.zeros((classes, classes))
    for col in range(classes):
        first = rng.integers(-3, 4)
        second = rng.integers(0, 4, size=max(0, classes - 2))
        diffs = first + np.concatenate(([0], np.cumsum(second)))
        vals = rng.integers(0, 6) + np.concatenate(([0], np.cumsum(diffs)))
        table[:, col] = vals - vals.min()
    spec = load_custom_loss(table)
    assert is_convex_loss(spec)
    return spec


def random_tie_instance(rng: np.random.Generator, n_max: int = 40, k_lo: int = 2, k_hi: int = 6):
    """Small instance with plenty of score ties; returns ((scores, labels), K)."""
    n = int(rng.integers(1, n_max + 1))
    classes = int(rng.integers(k_lo, k_hi + 1))
    # a coarse grid forces duplicate scores
    scores = rng.integers(0, max(2, n // 2), size=n).astype(np.float64)
    scores *= rng.uniform(0.5, 2.0)
    labels = rng.integers(1, classes + 1, size=n)
    return (scores, labels), classes


def loss_family(name: str, classes: int, rng: np.random.Generator) -> LossSpec:
    if name == "convex_random":
        return random_convex_int_loss(rng, classes)
    return build_loss(name, classes)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
