/** Spawning and wire formats for the solver CLI process boundary. */

import { execFile } from "node:child_process";
import { mkdtemp, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

const DEFAULT_COMMAND = ["python3", "-m", "ordthresh"];

export interface CliRun {
  code: number;
  stdout: string;
  stderr: string;
}

export function cliCommand(override?: string[]): string[] {
  if (override && override.length > 0) return override;
  const env = process.env.ORDTHRESH_CLI;
  if (env && env.trim()) return env.trim().split(/\s+/);
  return DEFAULT_COMMAND;
}

/** Run the CLI asynchronously; never blocks the event loop while solving. */
export function runCli(args: string[], command?: string[]): Promise<CliRun> {
  const [head, ...rest] = cliCommand(command);
  return new Promise((resolve, reject) => {
    execFile(
      head,
      [...rest, ...args],
      { maxBuffer: 64 * 1024 * 1024 },
      (error, stdout, stderr) => {
        if (error === null) {
          resolve({ code: 0, stdout, stderr });
        } else if (typeof error.code === "number") {
          resolve({ code: error.code, stdout: stdout ?? "", stderr: stderr ?? "" });
        } else {
          reject(error); // spawn failure, not a solver exit
        }
      },
    );
  });
}

/** Scratch directory for wire files; callers must dispose(). */
export async function makeScratch(): Promise<{ dir: string; dispose: () => Promise<void> }> {
  const dir = await mkdtemp(join(tmpdir(), "ordthresh-"));
  return { dir, dispose: () => rm(dir, { recursive: true, force: true }) };
}

export function numberToken(value: number): string {
  if (value === Number.POSITIVE_INFINITY) return "inf";
  if (value === Number.NEGATIVE_INFINITY) return "-inf";
  return String(value);
}

export function tokenToNumber(token: unknown): number {
  if (typeof token === "number") return token;
  if (token === "inf" || token === "+inf") return Number.POSITIVE_INFINITY;
  if (token === "-inf") return Number.NEGATIVE_INFINITY;
  return Number(token);
}

export async function writeSampleCsv(
  path: string,
  scores: ArrayLike<number>,
  labels: ArrayLike<number>,
): Promise<void> {
  const lines = ["score,label"];
  for (let i = 0; i < scores.length; i++) {
    lines.push(`${numberToken(scores[i])},${labels[i]}`);
  }
  await writeFile(path, lines.join("\n") + "\n", "utf8");
}

export async function writeScoreCsv(path: string, scores: ArrayLike<number>): Promise<void> {
  const lines: string[] = [];
  for (let i = 0; i < scores.length; i++) lines.push(numberToken(scores[i]));
  await writeFile(path, lines.join("\n") + (lines.length ? "\n" : ""), "utf8");
}

export async function writeThresholdCsv(
  path: string,
  thresholds: ArrayLike<number>,
): Promise<void> {
  const tokens: string[] = [];
  for (let i = 0; i < thresholds.length; i++) tokens.push(numberToken(thresholds[i]));
  await writeFile(path, tokens.join(",") + "\n", "utf8");
}

export async function writeLossCsv(path: string, table: number[][]): Promise<void> {
  await writeFile(path, table.map((row) => row.join(",")).join("\n") + "\n", "utf8");
}
