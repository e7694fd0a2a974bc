/** Host-side mirror of the solver CLI's error taxonomy. */

export class OrdthreshError extends Error {}

/** Bad local arguments (mirrors the CLI's own input validation). */
export class ValidationError extends OrdthreshError {}

/** The CLI rejected the input (exit code 2). */
export class ParseError extends OrdthreshError {}

/** Independent optimization produced unordered thresholds under policy "error" (exit code 3). */
export class OrderViolatedError extends OrdthreshError {}

/** Brute-force enumeration over the configured tuple cap (exit code 4). */
export class InstanceTooLargeError extends OrdthreshError {}

export function errorFromExit(code: number, stderr: string): OrdthreshError {
  const detail = stderr.trim() || `solver exited with code ${code}`;
  switch (code) {
    case 3:
      return new OrderViolatedError(detail);
    case 4:
      return new InstanceTooLargeError(detail);
    default:
      return new ParseError(detail);
  }
}
