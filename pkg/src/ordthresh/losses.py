"""Task-loss tables for ordinal classification.

A loss table is a K x K matrix whose (k, l) entry is the cost of predicting
class k when the true class is l (both 1-based in the math, 0-based in the
arrays).  Built-in families: zero-one, absolute and squared error; arbitrary
nonnegative tables are accepted as custom losses.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LossSpec",
    "build_loss",
    "load_custom_loss",
    "load_loss_file",
    "is_convex_loss",
    "LOSS_FAMILIES",
]

# canonical family names plus the short aliases used on the command line
_ALIASES = {
    "zo": "zero_one",
    "zero-one": "zero_one",
    "abs": "absolute",
    "ab": "absolute",
    "sq": "squared",
}
LOSS_FAMILIES = ("zero_one", "absolute", "squared")


@dataclass(frozen=True)
class LossSpec:
    """An immutable K x K task-loss table.

    Entries are stored as float64; the built-in families are integer valued
    and stay exact as long as n * max_entry < 2**52, far above anything this
    library is meant to run on.
    """

    classes: int
    table: np.ndarray
    name: str

    def __post_init__(self) -> None:
        if self.classes < 2:
            raise ValueError(f"need at least 2 classes, got {self.classes}")
        tab = np.asarray(self.table, dtype=np.float64)
        if tab.shape != (self.classes, self.classes):
            raise ValueError(
                f"loss table must be {self.classes}x{self.classes}, got {tab.shape}"
            )
        if not np.all(np.isfinite(tab)):
            raise ValueError("loss table entries must be finite")
        if np.any(tab < 0):
            raise ValueError("loss table entries must be nonnegative")
        tab.setflags(write=False)
        object.__setattr__(self, "table", tab)

    def __call__(self, predicted: int, true: int) -> float:
        """Loss of predicting `predicted` when the truth is `true` (1-based)."""
        return float(self.table[predicted - 1, true - 1])


def build_loss(name: str, classes: int) -> LossSpec:
    """Build one of the standard loss families for a K-class problem.

    zero_one: 1 if k != l else 0; absolute: |k - l|; squared: (k - l)**2.
    """
    family = _ALIASES.get(name, name)
    if classes < 2:
        raise ValueError(f"need at least 2 classes, got {classes}")
    k = np.arange(1, classes + 1, dtype=np.float64)
    diff = k[:, None] - k[None, :]
    if family == "zero_one":
        table = (diff != 0).astype(np.float64)
    elif family == "absolute":
        table = np.abs(diff)
    elif family == "squared":
        table = diff * diff
    else:
        raise ValueError(f"unknown loss family {name!r}")
    return LossSpec(classes=classes, table=table, name=family)


def load_custom_loss(matrix) -> LossSpec:
    """Wrap a user-supplied square matrix as a custom loss."""
    tab = np.asarray(matrix, dtype=np.float64)
    if tab.ndim != 2 or tab.shape[0] != tab.shape[1]:
        raise ValueError(f"custom loss must be a square matrix, got shape {tab.shape}")
    return LossSpec(classes=tab.shape[0], table=tab, name="custom")


def load_loss_file(path) -> LossSpec:
    """Read a custom loss from CSV: K rows x K columns, row = prediction, no header."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                rows.append([float(x) for x in row])
            except ValueError as exc:
                raise ValueError(f"bad loss entry in {path}: {exc}") from exc
    if not rows:
        raise ValueError(f"empty loss file {path}")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"ragged rows in loss file {path}")
    return load_custom_loss(rows)


def is_convex_loss(loss: LossSpec) -> bool:
    """Whether the loss is convex in the prediction argument.

    Checks the second difference loss(k, l) - 2*loss(k+1, l) + loss(k+2, l) >= 0
    for every k and l.  Exact comparison, no tolerance: tables are user
    constants, not computed values.  Vacuously true for K = 2.
    """
    tab = loss.table
    second = tab[:-2, :] - 2.0 * tab[1:-1, :] + tab[2:, :]
    return bool(np.all(second >= 0.0))
