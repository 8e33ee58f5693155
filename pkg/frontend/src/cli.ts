/**
 * Command line entry point.
 *
 *   profile-plots plot --curves FILE --kind performance|data --out FILE.svg
 *
 * Exit codes: 0 on success, 2 for usage/schema problems.
 */

import { readFileSync, realpathSync, writeFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { parseArgs } from "node:util";

import { SchemaError, parseCurvesCsv } from "./csv.js";
import { plottedData, renderProfiles, type ProfileKind } from "./plot.js";

const USAGE =
  "usage: profile-plots plot --curves FILE --kind performance|data --out FILE.svg";

export function main(argv: string[]): number {
  if (argv.includes("--help") || argv.includes("-h")) {
    console.log(USAGE);
    return 0;
  }
  if (argv[0] !== "plot") {
    console.error(USAGE);
    return 2;
  }
  let values: { curves?: string; kind?: string; out?: string };
  try {
    values = parseArgs({
      args: argv.slice(1),
      options: {
        curves: { type: "string" },
        kind: { type: "string" },
        out: { type: "string" },
      },
      strict: true,
    }).values;
  } catch (err) {
    console.error(`${(err as Error).message}\n${USAGE}`);
    return 2;
  }
  const { curves, kind, out } = values;
  if (curves === undefined || kind === undefined || out === undefined) {
    console.error(`--curves, --kind and --out are all required\n${USAGE}`);
    return 2;
  }
  if (kind !== "performance" && kind !== "data") {
    console.error(`--kind must be "performance" or "data", got ${JSON.stringify(kind)}`);
    return 2;
  }

  let text: string;
  try {
    text = readFileSync(curves, "utf-8");
  } catch (err) {
    console.error(`cannot read ${curves}: ${(err as Error).message}`);
    return 2;
  }
  let result;
  try {
    result = renderProfiles(plottedData(parseCurvesCsv(text)), kind as ProfileKind);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`${curves}: ${err.message}`);
      return 2;
    }
    throw err;
  }
  for (const warning of result.warnings) {
    console.error(`warning: ${warning}`);
  }
  writeFileSync(out, result.svg);
  console.log(`SVG -> ${out}`);
  return 0;
}

function isMain(): boolean {
  const entry = process.argv[1];
  if (entry === undefined) return false;
  try {
    return realpathSync(entry) === realpathSync(fileURLToPath(import.meta.url));
  } catch {
    return false;
  }
}

if (isMain()) {
  process.exit(main(process.argv.slice(2)));
}
