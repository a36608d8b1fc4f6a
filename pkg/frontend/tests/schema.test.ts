import { describe, expect, it } from "vitest";

import { CSV_COLUMNS, SchemaError, extractPoints, parseCsv } from "../src/schema.js";

const HEADER = CSV_COLUMNS.join(",");

function row(overrides: Partial<Record<string, string>> = {}): string {
  const base: Record<string, string> = {
    schema_version: "1",
    gate: "v1",
    scenario: "I",
    param1_name: "R",
    param1: "32.5",
    param2_name: "gamma",
    param2: "0.5",
    p_init: "0.002",
    infidelity: "0.00012999999999999999",
    p_code: "0.00034000000000000002",
    p_code_stderr: "0",
    backend: "exact_dm",
    n_samples: "0",
    seed: "42",
  };
  Object.assign(base, overrides);
  return CSV_COLUMNS.map((c) => base[c]).join(",");
}

describe("parseCsv", () => {
  it("parses a valid file", () => {
    const rows = parseCsv(`${HEADER}\n${row()}\n`);
    expect(rows).toHaveLength(1);
    expect(rows[0].gate).toBe("v1");
    expect(rows[0].infidelity).toBeCloseTo(1.3e-4, 10);
    expect(rows[0].raw.p_code).toBe("0.00034000000000000002");
  });

  it("rejects an empty file", () => {
    expect(() => parseCsv("")).toThrow(SchemaError);
  });

  it("names missing columns", () => {
    const header = CSV_COLUMNS.filter((c) => c !== "p_code").join(",");
    expect(() => parseCsv(`${header}\n`)).toThrow(/missing columns: p_code/);
  });

  it("names unexpected columns", () => {
    expect(() => parseCsv(`${HEADER},extra\n`)).toThrow(/unexpected columns: extra/);
  });

  it("rejects reordered columns", () => {
    const shuffled = [...CSV_COLUMNS].reverse().join(",");
    expect(() => parseCsv(`${shuffled}\n`)).toThrow(/out of order/);
  });

  it("rejects an unsupported schema version with a location", () => {
    const text = `${HEADER}\n${row({ schema_version: "2" })}\n`;
    expect(() => parseCsv(text, "in.csv")).toThrow(/in\.csv:2: schema_version 2/);
  });

  it("rejects non-numeric values naming the column", () => {
    const text = `${HEADER}\n${row({ p_code: "oops" })}\n`;
    expect(() => parseCsv(text)).toThrow(/column p_code: not a number/);
  });

  it("rejects rows with the wrong field count", () => {
    expect(() => parseCsv(`${HEADER}\n1,v1,I\n`)).toThrow(/expected 14 fields, got 3/);
  });
});

describe("extractPoints", () => {
  it("copies the input bytes verbatim", () => {
    const line = row();
    const rows = parseCsv(`${HEADER}\n${line}\n`);
    const dump = extractPoints(rows, "p_init");
    expect(dump).toBe(
      "p_init,infidelity,p_code,p_code_stderr\n" +
        "0.002,0.00012999999999999999,0.00034000000000000002,0\n",
    );
  });
});
