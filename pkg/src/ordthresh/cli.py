"""Command-line front end.

Subcommands: solve (CSV in, JSON out), label, check-loss, gen, bench.
Exit codes: 0 success, 2 parse/usage error, 3 order violation under
--policy error, 4 instance too large for brute force.  check-loss instead
exits 0 for convex, 1 for non-convex, 2 for parse errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from .bench import BenchConfig, run_bench
from .datagen import RNG_ALGORITHM, OlrParams, gen_adversarial, gen_olr
from .labeling import ThresholdVector, label_scores
from .losses import LossSpec, build_loss, is_convex_loss, load_loss_file
from .prepare import prepare
from .solvers import (
    InstanceTooLargeError,
    OrderViolatedError,
    solve_brute,
    solve_dp,
    solve_io,
    solve_pio,
)

EXIT_OK = 0
EXIT_NONCONVEX = 1
EXIT_PARSE = 2
EXIT_ORDER_VIOLATED = 3
EXIT_TOO_LARGE = 4


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# wire formats
# ---------------------------------------------------------------------------


def read_samples(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a sample CSV: rows of `score,label`, optional header."""
    scores: list[float] = []
    labels: list[int] = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    start = 0
    if rows and [c.strip().lower() for c in rows[0]] == ["score", "label"]:
        start = 1
    for lineno, row in enumerate(rows[start:], start + 1):
        if not row:
            continue
        if len(row) != 2:
            raise ParseError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
        try:
            score = float(row[0])
            label = int(row[1])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if not math.isfinite(score):
            raise ParseError(f"{path}:{lineno}: score must be finite, got {row[0]}")
        if label < 1:
            raise ParseError(f"{path}:{lineno}: label must be >= 1, got {label}")
        scores.append(score)
        labels.append(label)
    if not scores:
        raise ParseError(f"{path}: no samples")
    return np.asarray(scores, dtype=np.float64), np.asarray(labels, dtype=np.int64)


def write_samples(path, scores, labels) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["score", "label"])
        for s, l in zip(scores, labels):
            writer.writerow([repr(float(s)), int(l)])


def read_scores(path) -> np.ndarray:
    """Read scores from a 1-column CSV or the score column of a sample CSV."""
    out: list[float] = []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    start = 0
    if rows and rows[0] and rows[0][0].strip().lower() == "score":
        start = 1
    for lineno, row in enumerate(rows[start:], start + 1):
        if not row:
            continue
        try:
            score = float(row[0])
        except ValueError as exc:
            raise ParseError(f"{path}:{lineno}: {exc}") from exc
        if not math.isfinite(score):
            raise ParseError(f"{path}:{lineno}: score must be finite")
        out.append(score)
    return np.asarray(out, dtype=np.float64)


def _threshold_to_token(value: float):
    if value == math.inf:
        return "inf"
    if value == -math.inf:
        return "-inf"
    return float(value)


def _token_to_threshold(token) -> float:
    if isinstance(token, str):
        t = token.strip().lower()
        if t in ("inf", "+inf"):
            return math.inf
        if t == "-inf":
            return -math.inf
        value = float(t)
    else:
        value = float(token)
    if math.isnan(value):
        raise ParseError("threshold must not be NaN")
    return value


def solve_output(report, n: int, classes: int, n_unique: int) -> dict:
    return {
        "thresholds": [_threshold_to_token(t) for t in report.thresholds],
        "risk_sum": report.risk_sum,
        "risk_mean": report.risk_mean,
        "n": n,
        "K": classes,
        "N": n_unique,
        "algorithm": report.algorithm,
        "order_ok": report.order_ok,
        "fallback_used": report.fallback_used,
        "wall_time_ms": report.wall_time * 1e3,
    }


def read_thresholds(path) -> ThresholdVector:
    """Thresholds from a solve JSON output or a CSV of numbers/inf tokens."""
    with open(path) as fh:
        text = fh.read()
    tokens = None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = None
    if isinstance(data, dict) and "thresholds" in data:
        tokens = data["thresholds"]
    elif isinstance(data, list):
        tokens = data
    if tokens is None:
        tokens = [tok for row in csv.reader(text.splitlines()) for tok in row if tok]
    if not tokens:
        raise ParseError(f"{path}: no thresholds")
    try:
        return ThresholdVector(np.asarray([_token_to_threshold(t) for t in tokens]))
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _resolve_loss(flag: str, classes: int) -> LossSpec:
    if flag.startswith("file:"):
        spec = load_loss_file(flag[5:])
        if spec.classes != classes:
            raise ParseError(
                f"loss file is {spec.classes}x{spec.classes} but K={classes}"
            )
        return spec
    try:
        return build_loss(flag, classes)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_solve(args) -> int:
    scores, labels = read_samples(args.input)
    classes = args.classes if args.classes else int(labels.max())
    if classes < 2:
        raise ParseError(f"need at least 2 classes, got {classes}")
    if labels.max() > classes:
        raise ParseError(f"label {labels.max()} exceeds --classes {classes}")
    loss = _resolve_loss(args.loss, classes)
    prep = prepare((scores, labels), loss)
    if args.algo == "dp":
        report = solve_dp(prep)
    elif args.algo == "io":
        report = solve_io(prep, workers=args.workers, policy=args.policy)
    elif args.algo == "pio":
        report = solve_pio(
            prep, block_length=args.block_size, workers=args.workers, policy=args.policy
        )
    else:
        report = solve_brute(prep)
    payload = solve_output(report, n=prep.n, classes=classes, n_unique=prep.n_unique)
    text = json.dumps(payload, indent=2) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_label(args) -> int:
    thresholds = read_thresholds(args.thresholds)
    scores = read_scores(args.input)
    labels = label_scores(scores, thresholds) if scores.size else np.empty(0, np.int64)
    lines = "".join(f"{int(l)}\n" for l in labels)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(lines)
    else:
        sys.stdout.write(lines)
    return EXIT_OK


def cmd_check_loss(args) -> int:
    loss = _resolve_loss(args.loss, args.classes)
    if is_convex_loss(loss):
        print(f"{loss.name} (K={loss.classes}): convex")
        return EXIT_OK
    print(f"{loss.name} (K={loss.classes}): non-convex")
    return EXIT_NONCONVEX


def cmd_gen(args) -> int:
    if args.classes < 2:
        raise ParseError(f"need at least 2 classes, got {args.classes}")
    if args.model == "olr":
        if args.biases:
            biases = np.asarray([float(b) for b in args.biases.split(",")])
        else:
            biases = np.linspace(-2.0, 2.0, args.classes - 1)
        params = OlrParams(
            classes=args.classes,
            biases=biases,
            dist=args.dist,
            dist_a=args.dist_a,
            dist_b=args.dist_b,
            seed=args.seed,
        )
        scores, labels = gen_olr(args.n, params)
    else:
        scores, labels = gen_adversarial(
            args.n, args.classes, args.duplicate_fraction, seed=args.seed
        )
    write_samples(args.output, scores, labels)
    meta = {
        "model": args.model,
        "n": args.n,
        "classes": args.classes,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "output": args.output,
    }
    print(json.dumps(meta))
    return EXIT_OK


def cmd_bench(args) -> int:
    block_lengths: list[int | None] = []
    for tok in args.block_lengths.split(","):
        tok = tok.strip()
        block_lengths.append(None if tok in ("", "default") else int(tok))
    config = BenchConfig(
        n_values=tuple(int(x) for x in args.n_list.split(",")),
        k_values=tuple(int(x) for x in args.k_list.split(",")),
        worker_counts=tuple(int(x) for x in args.workers_list.split(",")),
        block_lengths=tuple(block_lengths),
        repetitions=args.reps,
        warmup=args.warmup,
        seed=args.seed,
        loss=args.loss,
    )
    report = run_bench(config)
    for row in report.rows:
        block = "-" if row.block_length is None else row.block_length
        print(
            f"N={row.n_unique} K={row.classes} {row.algorithm}"
            f"(w={row.workers},L={block}): median {row.median_s * 1e3:.3f} ms"
            f"  ratio_vs_dp {row.ratio_vs_dp:.3f}  risk_sum {row.risk_sum}"
        )
    if args.csv:
        report.to_csv(args.csv)
    if args.json:
        report.to_json(args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordthresh",
        description="Optimal threshold labeling for ordinal regression scores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="compute optimal thresholds from a sample CSV")
    solve.add_argument("--input", required=True, help="CSV of score,label rows")
    solve.add_argument("--output", help="write the JSON report here instead of stdout")
    solve.add_argument(
        "--loss", default="abs", help="zo | abs | sq | file:<csv path> (default abs)"
    )
    solve.add_argument(
        "--classes", type=int, help="class count K (default: max observed label)"
    )
    solve.add_argument("--algo", choices=["dp", "io", "pio", "brute"], default="dp")
    solve.add_argument("--block-size", type=int, help="PIO block length (default ~sqrt(N))")
    solve.add_argument("--workers", type=int, help="worker threads for io/pio")
    solve.add_argument(
        "--policy",
        choices=["error", "fallback_dp", "return_raw"],
        default="fallback_dp",
        help="what to do when io/pio output is unordered",
    )

    label = sub.add_parser("label", help="label scores with existing thresholds")
    label.add_argument("--thresholds", required=True, help="solve JSON or threshold CSV")
    label.add_argument("--input", required=True, help="CSV of scores")
    label.add_argument("--output", help="write labels here instead of stdout")

    check = sub.add_parser("check-loss", help="report whether a loss is convex")
    check.add_argument("--loss", required=True, help="zo | abs | sq | file:<csv path>")
    check.add_argument("--classes", type=int, required=True)

    gen = sub.add_parser("gen", help="generate synthetic sample CSVs")
    gen.add_argument("--model", choices=["olr", "adversarial"], default="olr")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--classes", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", required=True)
    gen.add_argument("--biases", help="comma-separated nondecreasing biases (olr)")
    gen.add_argument("--dist", choices=["uniform", "normal"], default="uniform")
    gen.add_argument("--dist-a", type=float, default=-4.0)
    gen.add_argument("--dist-b", type=float, default=4.0)
    gen.add_argument("--duplicate-fraction", type=float, default=0.5)

    bench = sub.add_parser("bench", help="compare solver wall times")
    bench.add_argument("--n-list", required=True, help="comma-separated sample counts")
    bench.add_argument("--k-list", required=True, help="comma-separated class counts")
    bench.add_argument("--workers-list", default="4")
    bench.add_argument("--block-lengths", default="default")
    bench.add_argument("--reps", type=int, default=5)
    bench.add_argument("--warmup", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--loss", default="abs")
    bench.add_argument("--csv", help="write the report as CSV")
    bench.add_argument("--json", help="write the report as JSON")
    return parser


_HANDLERS = {
    "solve": cmd_solve,
    "label": cmd_label,
    "check-loss": cmd_check_loss,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except OrderViolatedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORDER_VIOLATED
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
