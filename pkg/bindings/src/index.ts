/** Node bindings for the ordinal-threshold solver.
 *
 * Everything delegates to the solver CLI across a process boundary: inputs
 * are validated host-side exactly as the solver validates them, serialized
 * to its CSV wire format, and results come back from its JSON output with
 * "-inf"/"inf" tokens surfaced as JavaScript infinities.  No algorithm is
 * reimplemented here.  All calls are async, so solving never blocks the
 * event loop.
 */

import { join } from "node:path";

import {
  makeScratch,
  runCli,
  tokenToNumber,
  writeLossCsv,
  writeSampleCsv,
  writeScoreCsv,
  writeThresholdCsv,
} from "./cli.js";
import { errorFromExit, ParseError, ValidationError } from "./errors.js";

export {
  InstanceTooLargeError,
  OrderViolatedError,
  OrdthreshError,
  ParseError,
  ValidationError,
} from "./errors.js";

export type NumericArray = ArrayLike<number>;

/** A built-in family name (zo/abs/sq or the long forms) or a K x K table. */
export type LossSpec = string | number[][];

export type Algorithm = "dp" | "io" | "pio" | "brute";
export type OrderPolicy = "error" | "fallback_dp" | "return_raw";

export interface CommonOptions {
  /** Override the solver command line, e.g. ["python3", "-m", "ordthresh"]. */
  cli?: string[];
}

export interface SolveOptions extends CommonOptions {
  loss?: LossSpec;
  classes?: number;
  algo?: Algorithm;
  blockSize?: number;
  workers?: number;
  policy?: OrderPolicy;
}

export interface SolveResult {
  thresholds: Float64Array;
  riskSum: number;
  riskMean: number;
  n: number;
  classes: number;
  nUnique: number;
  algorithm: string;
  orderOk: boolean;
  fallbackUsed: boolean;
  wallTimeMs: number;
}

function validateSamples(scores: NumericArray, labels: NumericArray, classes?: number): void {
  if (scores.length !== labels.length) {
    throw new ValidationError(
      `scores and labels must have equal length, got ${scores.length} and ${labels.length}`,
    );
  }
  if (scores.length === 0) {
    throw new ValidationError("empty sample set");
  }
  for (let i = 0; i < scores.length; i++) {
    if (!Number.isFinite(scores[i])) {
      throw new ValidationError(`score at index ${i} is not finite`);
    }
    const label = labels[i];
    if (!Number.isInteger(label) || label < 1) {
      throw new ValidationError(`label at index ${i} must be a positive integer`);
    }
    if (classes !== undefined && label > classes) {
      throw new ValidationError(`label ${label} exceeds classes=${classes}`);
    }
  }
}

function validateThresholds(thresholds: NumericArray): void {
  if (thresholds.length === 0) {
    throw new ValidationError("thresholds must be nonempty");
  }
  for (let i = 0; i < thresholds.length; i++) {
    if (Number.isNaN(thresholds[i])) {
      throw new ValidationError(`threshold at index ${i} is NaN`);
    }
  }
}

function validateLossTable(table: number[][]): void {
  const k = table.length;
  if (k < 2 || table.some((row) => row.length !== k)) {
    throw new ValidationError("custom loss must be a square matrix with K >= 2");
  }
  for (const row of table) {
    for (const v of row) {
      if (!Number.isFinite(v) || v < 0) {
        throw new ValidationError("custom loss entries must be finite and nonnegative");
      }
    }
  }
}

async function lossFlag(loss: LossSpec, dir: string): Promise<string> {
  if (typeof loss === "string") return loss;
  validateLossTable(loss);
  const path = join(dir, "loss.csv");
  await writeLossCsv(path, loss);
  return `file:${path}`;
}

function parseSolvePayload(stdout: string): SolveResult {
  const payload = JSON.parse(stdout);
  const thresholds = Float64Array.from(
    (payload.thresholds as unknown[]).map(tokenToNumber),
  );
  return {
    thresholds,
    riskSum: payload.risk_sum,
    riskMean: payload.risk_mean,
    n: payload.n,
    classes: payload.K,
    nUnique: payload.N,
    algorithm: payload.algorithm,
    orderOk: payload.order_ok,
    fallbackUsed: payload.fallback_used,
    wallTimeMs: payload.wall_time_ms,
  };
}

async function solveFile(input: string, dir: string, options: SolveOptions): Promise<SolveResult> {
  const args = ["solve", "--input", input];
  if (options.loss !== undefined) args.push("--loss", await lossFlag(options.loss, dir));
  const classes =
    options.classes ??
    (Array.isArray(options.loss) ? options.loss.length : undefined);
  if (classes !== undefined) args.push("--classes", String(classes));
  if (options.algo) args.push("--algo", options.algo);
  if (options.blockSize !== undefined) args.push("--block-size", String(options.blockSize));
  if (options.workers !== undefined) args.push("--workers", String(options.workers));
  if (options.policy) args.push("--policy", options.policy);
  const run = await runCli(args, options.cli);
  if (run.code !== 0) throw errorFromExit(run.code, run.stderr);
  return parseSolvePayload(run.stdout);
}

/** Solve for the risk-optimal thresholds of one (scores, labels) data set. */
export async function solve(
  scores: NumericArray,
  labels: NumericArray,
  options: SolveOptions = {},
): Promise<SolveResult> {
  validateSamples(scores, labels, options.classes);
  const scratch = await makeScratch();
  try {
    const input = join(scratch.dir, "samples.csv");
    await writeSampleCsv(input, scores, labels);
    return await solveFile(input, scratch.dir, options);
  } finally {
    await scratch.dispose();
  }
}

/** Validated, serialized-once sample data reusable across several solves. */
export class BoundSolver {
  readonly n: number;
  readonly classes: number | undefined;
  private readonly input: string;
  private readonly dir: string;
  private readonly disposeScratch: () => Promise<void>;
  private readonly cli?: string[];
  private closed = false;

  private constructor(
    n: number,
    classes: number | undefined,
    input: string,
    dir: string,
    dispose: () => Promise<void>,
    cli?: string[],
  ) {
    this.n = n;
    this.classes = classes;
    this.input = input;
    this.dir = dir;
    this.disposeScratch = dispose;
    this.cli = cli;
  }

  static async create(
    scores: NumericArray,
    labels: NumericArray,
    options: { classes?: number } & CommonOptions = {},
  ): Promise<BoundSolver> {
    validateSamples(scores, labels, options.classes);
    const scratch = await makeScratch();
    const input = join(scratch.dir, "samples.csv");
    await writeSampleCsv(input, scores, labels);
    return new BoundSolver(
      scores.length,
      options.classes,
      input,
      scratch.dir,
      scratch.dispose,
      options.cli,
    );
  }

  async solve(options: Omit<SolveOptions, "cli" | "classes"> = {}): Promise<SolveResult> {
    if (this.closed) throw new ValidationError("solver already disposed");
    return solveFile(this.input, this.dir, {
      ...options,
      classes: this.classes,
      cli: this.cli,
    });
  }

  async dispose(): Promise<void> {
    this.closed = true;
    await this.disposeScratch();
  }
}

/** Validate and stage sample data once; solve it as many times as needed. */
export function prepare(
  scores: NumericArray,
  labels: NumericArray,
  options: { classes?: number } & CommonOptions = {},
): Promise<BoundSolver> {
  return BoundSolver.create(scores, labels, options);
}

/** Label scores with an existing threshold vector (scores >= t count up). */
export async function label(
  scores: NumericArray,
  thresholds: NumericArray,
  options: CommonOptions = {},
): Promise<Int32Array> {
  validateThresholds(thresholds);
  for (let i = 0; i < scores.length; i++) {
    if (!Number.isFinite(scores[i])) {
      throw new ValidationError(`score at index ${i} is not finite`);
    }
  }
  const scratch = await makeScratch();
  try {
    const scorePath = join(scratch.dir, "scores.csv");
    const thresholdPath = join(scratch.dir, "thresholds.csv");
    await writeScoreCsv(scorePath, scores);
    await writeThresholdCsv(thresholdPath, thresholds);
    const run = await runCli(
      ["label", "--thresholds", thresholdPath, "--input", scorePath],
      options.cli,
    );
    if (run.code !== 0) throw errorFromExit(run.code, run.stderr);
    const lines = run.stdout.split("\n").filter((line) => line.trim() !== "");
    return Int32Array.from(lines, (line) => Number.parseInt(line, 10));
  } finally {
    await scratch.dispose();
  }
}

/** Whether a loss is convex in the prediction argument (gates IO optimality). */
export async function checkConvex(
  loss: LossSpec,
  classes?: number,
  options: CommonOptions = {},
): Promise<boolean> {
  const k = classes ?? (Array.isArray(loss) ? loss.length : undefined);
  if (k === undefined) {
    throw new ValidationError("classes is required for named loss families");
  }
  const scratch = await makeScratch();
  try {
    const flag = await lossFlag(loss, scratch.dir);
    const run = await runCli(
      ["check-loss", "--loss", flag, "--classes", String(k)],
      options.cli,
    );
    if (run.code === 0) return true;
    if (run.code === 1) return false;
    throw new ParseError(run.stderr.trim() || "loss rejected");
  } finally {
    await scratch.dispose();
  }
}
