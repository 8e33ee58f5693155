import { readFileSync } from "node:fs";

import { describe, expect, it } from "vitest";

import { SchemaError, parseCurvesCsv } from "../src/csv.js";

const HEADER = "solver,tau,abscissa,ordinate";
const perfText = readFileSync(
  new URL("./fixtures/curves_performance.csv", import.meta.url),
  "utf-8",
);

describe("parseCurvesCsv", () => {
  it("reads the real benchmark output", () => {
    const rows = parseCurvesCsv(perfText);
    expect(rows.length).toBeGreaterThan(0);
    for (const row of rows) {
      expect(typeof row.solver).toBe("string");
      expect(Number.isFinite(row.tau)).toBe(true);
      expect(Number.isFinite(row.abscissa)).toBe(true);
      expect(row.ordinate).toBeGreaterThanOrEqual(0);
      expect(row.ordinate).toBeLessThanOrEqual(1);
    }
    expect(new Set(rows.map((r) => r.solver))).toEqual(
      new Set(["full", "coordinate"]),
    );
  });

  it("keeps values bit-exact", () => {
    const rows = parseCurvesCsv(
      `${HEADER}\ns1,0.001,1.0,0.6666666666666666\ns1,0.001,2.5,1e-300\n`,
    );
    expect(rows).toEqual([
      { solver: "s1", tau: 0.001, abscissa: 1.0, ordinate: 0.6666666666666666 },
      { solver: "s1", tau: 0.001, abscissa: 2.5, ordinate: 1e-300 },
    ]);
  });

  it("accepts both LF and CRLF endings", () => {
    const lf = parseCurvesCsv(`${HEADER}\na,0.1,1.0,0.5\n`);
    const crlf = parseCurvesCsv(`${HEADER}\r\na,0.1,1.0,0.5\r\n`);
    expect(lf).toEqual(crlf);
  });

  it("accepts a header-only file", () => {
    expect(parseCurvesCsv(`${HEADER}\n`)).toEqual([]);
  });

  it("handles quoted solver names", () => {
    const rows = parseCurvesCsv(`${HEADER}\n"sol,ver",0.1,1.0,0.5\n`);
    expect(rows[0]!.solver).toBe("sol,ver");
  });

  it("rejects a reordered header", () => {
    expect(() => parseCurvesCsv("tau,solver,abscissa,ordinate\n")).toThrow(
      SchemaError,
    );
  });

  it("rejects extra columns", () => {
    expect(() => parseCurvesCsv(`${HEADER},extra\n`)).toThrow(SchemaError);
  });

  it("rejects rows with the wrong field count", () => {
    expect(() => parseCurvesCsv(`${HEADER}\na,0.1,1.0\n`)).toThrow(SchemaError);
    expect(() => parseCurvesCsv(`${HEADER}\na,0.1,1.0,0.5,9\n`)).toThrow(
      SchemaError,
    );
  });

  it("rejects non-numeric and non-finite fields", () => {
    expect(() => parseCurvesCsv(`${HEADER}\na,lots,1.0,0.5\n`)).toThrow(
      SchemaError,
    );
    expect(() => parseCurvesCsv(`${HEADER}\na,0.1,1.0,\n`)).toThrow(SchemaError);
    expect(() => parseCurvesCsv(`${HEADER}\na,0.1,Infinity,0.5\n`)).toThrow(
      SchemaError,
    );
    expect(() => parseCurvesCsv(`${HEADER}\na,0.1,0x10,0.5\n`)).toThrow(
      SchemaError,
    );
  });

  it("rejects malformed quoting", () => {
    expect(() => parseCurvesCsv(`${HEADER}\nab"c,0.1,1.0,0.5\n`)).toThrow(
      SchemaError,
    );
    expect(() => parseCurvesCsv(`${HEADER}\n"abc,0.1,1.0,0.5\n`)).toThrow(
      SchemaError,
    );
  });

  it("rejects an empty file", () => {
    expect(() => parseCurvesCsv("")).toThrow(SchemaError);
  });
});
