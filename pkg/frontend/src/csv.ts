/**
 * Strict reader for the solver-benchmark curve CSV interface.
 *
 * The file contract: a header line `solver,tau,abscissa,ordinate`
 * followed by one row per curve knot.  Anything that deviates from the
 * schema — reordered or extra columns, wrong field counts, non-numeric
 * values — is rejected with a SchemaError rather than guessed at.
 */

/** Raised when an input file does not match the curve CSV schema. */
export class SchemaError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "SchemaError";
  }
}

/** One knot of one profile curve, exactly as stored in the file. */
export interface CurveRow {
  solver: string;
  tau: number;
  abscissa: number;
  ordinate: number;
}

const HEADER = ["solver", "tau", "abscissa", "ordinate"];

// Plain decimal or scientific notation; rejects "", "Infinity", "0x10", ...
const NUMBER = /^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/;

/** Split one CSV record, honoring RFC-4180 double-quote escaping. */
function splitRecord(line: string, lineno: number): string[] {
  const fields: string[] = [];
  let field = "";
  let quoted = false;
  let i = 0;
  while (i < line.length) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"') {
        if (line[i + 1] === '"') {
          field += '"';
          i += 2;
        } else {
          quoted = false;
          i += 1;
        }
      } else {
        field += ch;
        i += 1;
      }
    } else if (ch === '"') {
      if (field.length > 0) {
        throw new SchemaError(`line ${lineno}: quote inside unquoted field`);
      }
      quoted = true;
      i += 1;
    } else if (ch === ",") {
      fields.push(field);
      field = "";
      i += 1;
    } else {
      field += ch;
      i += 1;
    }
  }
  if (quoted) {
    throw new SchemaError(`line ${lineno}: unterminated quoted field`);
  }
  fields.push(field);
  return fields;
}

function parseNumber(field: string, name: string, lineno: number): number {
  if (!NUMBER.test(field)) {
    throw new SchemaError(`line ${lineno}: ${name} is not a number: ${JSON.stringify(field)}`);
  }
  return Number(field);
}

/** Parse curve CSV text into rows, strictly. */
export function parseCurvesCsv(text: string): CurveRow[] {
  const lines = text.split(/\r\n|\n/);
  // a trailing newline leaves one empty final chunk; anything else is data
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new SchemaError("empty file: missing header");
  }
  const header = splitRecord(lines[0]!, 1);
  if (header.length !== HEADER.length || header.some((h, i) => h !== HEADER[i])) {
    throw new SchemaError(`bad header: expected ${HEADER.join(",")}, got ${lines[0]}`);
  }
  const rows: CurveRow[] = [];
  for (let k = 1; k < lines.length; k++) {
    const lineno = k + 1;
    const fields = splitRecord(lines[k]!, lineno);
    if (fields.length !== 4) {
      throw new SchemaError(`line ${lineno}: expected 4 fields, got ${fields.length}`);
    }
    const [solver, tauS, aS, oS] = fields;
    rows.push({
      solver: solver!,
      tau: parseNumber(tauS!, "tau", lineno),
      abscissa: parseNumber(aS!, "abscissa", lineno),
      ordinate: parseNumber(oS!, "ordinate", lineno),
    });
  }
  return rows;
}
