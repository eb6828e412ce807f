/**
 * Parser for the sweep-harness results CSV.
 *
 * The schema is the harness's external interface and is matched exactly:
 * any header deviation is an error, not a best-effort guess.
 */

export const EXPECTED_HEADER =
  "scenario,power,trial,secrecy_rate,lambda_sr,iterations,feasible,seed";

export interface ResultRow {
  scenario: string;
  power: number;
  trial: number;
  secrecyRate: number;
  lambdaSr: number;
  iterations: number;
  feasible: boolean;
  seed: number;
}

export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

export class EmptyInput extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInput";
  }
}

function parseNumber(field: string, value: string, line: number): number {
  // the harness writes nan for infeasible trials
  if (value === "nan") return NaN;
  const x = Number(value);
  if (value === "" || Number.isNaN(x)) {
    throw new SchemaError(`line ${line}: field ${field} is not a number: "${value}"`);
  }
  return x;
}

function parseBool(value: string, line: number): boolean {
  if (value === "true") return true;
  if (value === "false") return false;
  throw new SchemaError(`line ${line}: feasible must be true/false, got "${value}"`);
}

/** Parse the full CSV text into rows; throws SchemaError on any mismatch. */
export function parseResults(text: string): ResultRow[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty file: missing header");
  }
  if (lines[0] !== EXPECTED_HEADER) {
    throw new SchemaError(
      `header mismatch: expected "${EXPECTED_HEADER}", got "${lines[0]}"`,
    );
  }
  const rows: ResultRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== 8) {
      throw new SchemaError(`line ${i + 1}: expected 8 fields, got ${parts.length}`);
    }
    rows.push({
      scenario: parts[0],
      power: parseNumber("power", parts[1], i + 1),
      trial: parseNumber("trial", parts[2], i + 1),
      secrecyRate: parts[3] === "nan" ? NaN : parseNumber("secrecy_rate", parts[3], i + 1),
      lambdaSr: parts[4] === "nan" ? NaN : parseNumber("lambda_sr", parts[4], i + 1),
      iterations: parseNumber("iterations", parts[5], i + 1),
      feasible: parseBool(parts[6], i + 1),
      seed: parseNumber("seed", parts[7], i + 1),
    });
  }
  return rows;
}
