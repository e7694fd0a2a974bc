"""Wall-time comparison of the threshold solvers on synthetic instances.

Each (N, K) cell generates one seeded instance, runs every solver with
warmups followed by timed repetitions, and refuses to record anything if
the solvers disagree on the risk: a risk mismatch is a correctness bug,
not a benchmark result.  Timings cover the solve call only; preparation is
timed separately for context.
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from dataclasses import asdict, dataclass, field

from .datagen import gen_adversarial
from .losses import build_loss
from .prepare import prepare
from .solvers import solve_dp, solve_io, solve_pio

__all__ = ["BenchConfig", "BenchRow", "BenchReport", "RiskMismatchError", "run_bench", "scaling_probe"]


class RiskMismatchError(RuntimeError):
    """Solvers disagreed on the risk of a benchmark cell."""


@dataclass(frozen=True)
class BenchConfig:
    n_values: tuple[int, ...]
    k_values: tuple[int, ...]
    worker_counts: tuple[int, ...] = (1, 4)
    block_lengths: tuple[int | None, ...] = (None,)
    repetitions: int = 5
    warmup: int = 1
    seed: int = 0
    loss: str = "absolute"

    def __post_init__(self) -> None:
        for name in ("n_values", "k_values", "worker_counts", "block_lengths"):
            vals = tuple(getattr(self, name))
            if not vals:
                raise ValueError(f"{name} must be nonempty")
            object.__setattr__(self, name, vals)
        if self.repetitions < 3:
            raise ValueError(f"need at least 3 repetitions, got {self.repetitions}")
        if self.warmup < 0:
            raise ValueError("warmup must be >= 0")


@dataclass(frozen=True)
class BenchRow:
    n_unique: int
    classes: int
    algorithm: str
    workers: int
    block_length: int | None
    median_s: float
    min_s: float
    mean_s: float
    risk_sum: float
    ratio_vs_dp: float
    prepare_s: float


@dataclass(frozen=True)
class BenchReport:
    config: BenchConfig
    rows: tuple[BenchRow, ...] = field(default_factory=tuple)

    def to_csv(self, path) -> None:
        names = [f.name for f in BenchRow.__dataclass_fields__.values()]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(names)
            for row in self.rows:
                writer.writerow([getattr(row, n) for n in names])

    def to_json(self, path) -> None:
        payload = {"config": asdict(self.config), "rows": [asdict(r) for r in self.rows]}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def _time_solver(fn, warmup: int, repetitions: int):
    for _ in range(warmup):
        fn()
    times = []
    risk = None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        report = fn()
        times.append(time.perf_counter() - t0)
        if risk is None:
            risk = report.risk_sum
        elif report.risk_sum != risk:
            raise RiskMismatchError(
                f"{report.algorithm} risk changed between repetitions: "
                f"{risk} vs {report.risk_sum}"
            )
    return times, risk


def run_bench(config: BenchConfig) -> BenchReport:
    """Run every configured cell and return the per-solver timing rows."""
    rows: list[BenchRow] = []
    for cell_no, (n, k) in enumerate(
        (n, k) for n in config.n_values for k in config.k_values
    ):
        loss = build_loss(config.loss, k)
        samples = gen_adversarial(n, k, 0.0, seed=config.seed + cell_no)
        t0 = time.perf_counter()
        prep = prepare(samples, loss)
        prepare_s = time.perf_counter() - t0

        runs: list[tuple[str, int, int | None]] = [("dp", 1, None)]
        runs += [("io", w, None) for w in config.worker_counts]
        runs += [
            ("pio", w, bl)
            for w in config.worker_counts
            for bl in config.block_lengths
        ]

        cell: list[tuple[str, int, int | None, list[float], float]] = []
        for algo, workers, block in runs:
            if algo == "dp":
                fn = lambda: solve_dp(prep)
            elif algo == "io":
                fn = lambda w=workers: solve_io(prep, workers=w)
            else:
                fn = lambda w=workers, b=block: solve_pio(prep, block_length=b, workers=w)
            times, risk = _time_solver(fn, config.warmup, config.repetitions)
            cell.append((algo, workers, block, times, risk))

        risks = {risk for *_, risk in cell}
        if len(risks) != 1:
            detail = ", ".join(f"{a}(w={w})={r}" for a, w, _, _, r in cell)
            raise RiskMismatchError(f"cell N={prep.n_unique} K={k}: {detail}")

        dp_median = statistics.median(next(t for a, _, _, t, _ in cell if a == "dp"))
        for algo, workers, block, times, risk in cell:
            med = statistics.median(times)
            rows.append(
                BenchRow(
                    n_unique=prep.n_unique,
                    classes=k,
                    algorithm=algo,
                    workers=workers,
                    block_length=block,
                    median_s=med,
                    min_s=min(times),
                    mean_s=sum(times) / len(times),
                    risk_sum=risk,
                    ratio_vs_dp=med / dp_median,
                    prepare_s=prepare_s,
                )
            )
    rows.sort(key=lambda r: (r.n_unique, r.classes, r.algorithm, r.workers))
    return BenchReport(config=config, rows=tuple(rows))


def scaling_probe(
    n_values, classes: int, repetitions: int = 5, seed: int = 0, loss: str = "absolute"
) -> list[tuple[int, float]]:
    """Median DP solve time per N, for eyeballing the O(N*K) growth."""
    n_values = list(n_values)
    if not n_values:
        raise ValueError("n_values must be nonempty")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be strictly increasing")
    spec = build_loss(loss, classes)
    out = []
    for i, n in enumerate(n_values):
        prep = prepare(gen_adversarial(n, classes, 0.0, seed=seed + i), spec)
        solve_dp(prep)  # warmup (and first-call compilation)
        times = []
        for _ in range(repetitions):
            t0 = time.perf_counter()
            solve_dp(prep)
            times.append(time.perf_counter() - t0)
        out.append((prep.n_unique, statistics.median(times)))
    return out
