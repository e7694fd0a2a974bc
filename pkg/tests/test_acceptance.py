"""Acceptance suite.

One test per acceptance criterion, each run at its stated tolerance and
ending with a single [PASS] line (pytest -s shows them; any failure names
its criterion).  Randomized families are fully seeded.
"""

from __future__ import annotations

import time

import numpy as np

from ordthresh import (
    BenchConfig,
    build_loss,
    empirical_risk,
    load_custom_loss,
    prepare,
    risk_columns,
    risk_from_indices,
    run_bench,
    scaling_probe,
    solve_brute,
    solve_dp,
    solve_io,
    solve_pio,
)
from ordthresh.solvers import default_block_length
from conftest import loss_family, random_tie_instance

LOSS_CYCLE = ("absolute", "squared", "zero_one", "convex_random")
CONVEX_CYCLE = ("absolute", "squared", "convex_random")


def family_instance(seed: int, cycle=LOSS_CYCLE):
    rng = np.random.default_rng(seed)
    samples, classes = random_tie_instance(rng, n_max=40, k_lo=2, k_hi=6)
    loss = loss_family(cycle[seed % len(cycle)], classes, rng)
    return samples, loss


def rk_sum(scores, labels, k, threshold, loss):
    """n-scaled two-class reduction risk, by direct enumeration (test oracle)."""
    predicted = k + (scores >= threshold).astype(np.int64)
    return float(loss.table[predicted - 1, labels - 1].sum())


def close(a, b, exact):
    if exact:
        return a == b
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def test_oracle_optimality():
    """DP matches the brute-force oracle exactly on every instance."""
    t0 = time.perf_counter()
    count = 500
    for seed in range(count):
        samples, loss = family_instance(seed)
        prep = prepare(samples, loss)
        assert solve_dp(prep).risk_sum == solve_brute(prep).risk_sum, f"seed {seed}"
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"oracle sweep took {elapsed:.1f}s"
    print(f"[PASS] oracle optimality: dp == brute on {count}/{count} instances "
          f"({elapsed:.1f}s)")


def test_convex_loss_order_guarantee():
    """Convex losses: raw IO output is ordered and matches the oracle."""
    count = 500
    for seed in range(count):
        samples, loss = family_instance(seed, cycle=CONVEX_CYCLE)
        prep = prepare(samples, loss)
        report = solve_io(prep, policy="return_raw")
        assert report.order_ok, f"seed {seed}: order violated for convex loss"
        assert report.risk_sum == solve_brute(prep).risk_sum, f"seed {seed}"
    print(f"[PASS] convex-loss order guarantee: ordered and optimal on "
          f"{count}/{count} instances")


def test_ordered_output_is_optimal():
    """Any loss: whenever raw IO output is ordered, it matches the oracle;
    plus the fixed order-violation regression instance."""
    count = 500
    ordered = violated = 0
    for seed in range(count):
        samples, loss = family_instance(seed)
        prep = prepare(samples, loss)
        report = solve_io(prep, policy="return_raw")
        if report.order_ok:
            ordered += 1
            assert report.risk_sum == solve_brute(prep).risk_sum, f"seed {seed}"
        else:
            violated += 1
    assert violated > 0, "family never exercised the violation path"

    prep = prepare([(0, 2), (1, 1), (2, 1)], build_loss("zero_one", 3))
    raw = solve_io(prep, policy="return_raw")
    assert raw.thresholds.values.tolist() == [np.inf, 0.5]
    assert not raw.order_ok
    rescue = solve_io(prep, policy="fallback_dp")
    assert rescue.fallback_used and rescue.risk_sum == 1.0
    print(f"[PASS] conditional optimality: {ordered} ordered instances all "
          f"optimal, {violated} violations handled, regression instance ok")


def test_io_pio_equivalence():
    """PIO returns IO's chosen indices for every block length and worker count."""
    count = 200
    sizes_checked = set()
    for case in range(count):
        rng = np.random.default_rng(7000 + case)
        if case < 6:
            n = (1, 2, 3, 4, 5, 10_000)[case]  # pin the edge sizes
        else:
            n = int(10 ** rng.uniform(0.4, 4.0))
        classes = int(rng.integers(2, 9))
        if case == 5:
            # all distinct: exercises the full N = 10^4 upper end
            scores = rng.permutation(n).astype(np.float64) * 0.75
        else:
            dup = float(rng.uniform(0.0, 0.6)) if n > 1 else 0.0
            scores = rng.integers(0, max(2, int(n * (1 - dup)) + 1), size=n) * 0.75
        labels = rng.integers(1, classes + 1, size=n)
        loss = loss_family(("absolute", "zero_one")[case % 2], classes, rng)
        prep = prepare((scores, labels), loss)
        np1 = prep.n_unique + 1
        sizes_checked.add(prep.n_unique)
        io = solve_io(prep, workers=1, policy="return_raw")
        for block in (1, 2, 3, default_block_length(np1), np1):
            for workers in (1, 4):
                pio = solve_pio(
                    prep, block_length=block, workers=workers, policy="return_raw"
                )
                assert np.array_equal(pio.chosen_indices, io.chosen_indices), (
                    f"case {case}: L={block} workers={workers}"
                )
    print(f"[PASS] io/pio equivalence: {count} instances "
          f"(N {min(sizes_checked)}..{max(sizes_checked)}), "
          f"5 block lengths x workers {{1,4}}")


def test_decomposition_and_bridge_identities():
    """Risk decomposition over two-class reductions, and the bridge between
    the solver's prefix columns and those reductions."""
    cases = [(seed, True) for seed in range(100)] + [(seed, False) for seed in range(20)]
    tuples_per_case = 20
    for seed, integer_loss in cases:
        rng = np.random.default_rng(11_000 + seed + (0 if integer_loss else 900))
        samples, classes = random_tie_instance(rng, n_max=30)
        if integer_loss:
            loss = loss_family(LOSS_CYCLE[seed % 4], classes, rng)
        else:
            loss = load_custom_loss(rng.uniform(0.0, 3.0, size=(classes, classes)))
        scores, labels = samples
        prep = prepare(samples, loss)
        cols = risk_columns(prep)
        cands = prep.candidates
        np1 = prep.n_unique + 1

        # bridge: column entries equal n * (R_k(c_j) - R_k(c_0))
        for k in range(1, classes):
            base = rk_sum(scores, labels, k, -np.inf, loss)
            for j in rng.choice(np1, size=min(np1, 12), replace=False):
                direct = rk_sum(scores, labels, k, cands[j], loss) - base
                assert close(cols[k - 1, j], direct, integer_loss), (
                    f"seed {seed} bridge k={k} j={j}"
                )

        # decomposition: risk(t) = sum_k R_k(t_k) - sum_{k>=2} R_k(+inf)
        tail = sum(rk_sum(scores, labels, k, np.inf, loss) for k in range(2, classes))
        # constant term linking sum_k cols[k, i_k] to the risk, from the all
        # minus-inf tuple where every column contributes its first entry (0)
        const = risk_from_indices(prep, np.zeros(classes - 1, dtype=np.int64))
        for _ in range(tuples_per_case):
            idx = np.sort(rng.integers(0, np1, size=classes - 1))
            risk = empirical_risk(samples, cands[idx], loss).sum
            decomposed = (
                sum(rk_sum(scores, labels, k + 1, cands[i], loss)
                    for k, i in enumerate(idx))
                - tail
            )
            assert close(risk, decomposed, integer_loss), f"seed {seed} decomposition"
            assert close(risk_from_indices(prep, idx), risk, integer_loss)
            via_columns = const + sum(cols[k, i] for k, i in enumerate(idx))
            assert close(via_columns, risk, integer_loss), f"seed {seed} columns"
    print(f"[PASS] decomposition and bridge identities: 100 integer-loss and "
          f"20 fractional-loss instances, {tuples_per_case} tuples each")


def test_determinism_across_runs_and_workers():
    """Every solver returns identical chosen indices across repeats/workers."""
    for seed in range(50):
        rng = np.random.default_rng(23_000 + seed)
        samples, classes = random_tie_instance(rng, n_max=35)
        loss = loss_family(LOSS_CYCLE[seed % 4], classes, rng)
        prep = prepare(samples, loss)
        reference = {
            "dp": solve_dp(prep).chosen_indices,
            "io": solve_io(prep, workers=1, policy="return_raw").chosen_indices,
            "pio": solve_pio(prep, workers=1, policy="return_raw").chosen_indices,
            "brute": solve_brute(prep).chosen_indices,
        }
        for _ in range(4):
            assert np.array_equal(reference["dp"], solve_dp(prep).chosen_indices)
            assert np.array_equal(reference["brute"], solve_brute(prep).chosen_indices)
            for workers in (1, 2, 4):
                assert np.array_equal(
                    reference["io"],
                    solve_io(prep, workers=workers, policy="return_raw").chosen_indices,
                )
                assert np.array_equal(
                    reference["pio"],
                    solve_pio(prep, workers=workers, policy="return_raw").chosen_indices,
                )
    print("[PASS] determinism: 50 instances, 5 runs, workers {1,2,4}")


def test_solver_performance_ratios(tmp_path):
    """Solver-only wall time on N=1e5, K=50, absolute loss; medians of 10."""
    config = BenchConfig(
        n_values=(100_000,),
        k_values=(50,),
        worker_counts=(1, 4),
        block_lengths=(None,),
        repetitions=10,
        warmup=2,
        seed=7,
    )
    report = run_bench(config)
    report.to_csv(tmp_path / "bench_report.csv")
    report.to_json(tmp_path / "bench_report.json")
    rows = {(r.algorithm, r.workers): r for r in report.rows}
    assert rows[("dp", 1)].n_unique == 100_000
    io_ratio = rows[("io", 1)].ratio_vs_dp
    pio_ratio = rows[("pio", 4)].ratio_vs_dp
    assert 0.5 <= io_ratio <= 2.0, f"t_IO(1)/t_DP = {io_ratio:.3f}"
    assert pio_ratio <= 0.8, f"t_PIO(4)/t_DP = {pio_ratio:.3f}"
    print(f"[PASS] performance: t_IO(1)/t_DP = {io_ratio:.3f} (band [0.5, 2.0]), "
          f"t_PIO(4)/t_DP = {pio_ratio:.3f} (<= 0.8); report in {tmp_path}")


def test_dp_scaling_smoke():
    """Doubling N at fixed K moves the DP median by a near-linear factor.

    Both sizes sit above the last cache level so the probe measures the
    asymptotic regime rather than a cache-size transition.
    """
    table = scaling_probe([100_000, 200_000], classes=50, repetitions=5, seed=3)
    ratio = table[1][1] / table[0][1]
    assert 1.2 <= ratio <= 3.0, f"dp time ratio {ratio:.2f} outside [1.2, 3.0]"
    print(f"[PASS] dp scaling: doubling N scaled the median by {ratio:.2f}")
