/**
 * Versioned CSV schema of the s17bench sweep output.
 *
 * Rows keep the original column strings alongside parsed numbers so the
 * point-extraction dump can reproduce the input bytes exactly.
 */

export const SCHEMA_VERSION = "1";

export const CSV_COLUMNS = [
  "schema_version",
  "gate",
  "scenario",
  "param1_name",
  "param1",
  "param2_name",
  "param2",
  "p_init",
  "infidelity",
  "p_code",
  "p_code_stderr",
  "backend",
  "n_samples",
  "seed",
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

export class SchemaError extends Error {}

export interface BenchmarkRow {
  /** raw column strings, by column name */
  raw: Record<ColumnName, string>;
  gate: string;
  scenario: string;
  pInit: number;
  infidelity: number;
  pCode: number;
  pCodeStderr: number;
}

const NUMERIC_COLUMNS: ColumnName[] = [
  "param1",
  "param2",
  "p_init",
  "infidelity",
  "p_code",
  "p_code_stderr",
];

function splitLines(text: string): string[] {
  return text.split(/\r?\n/).filter((line) => line.length > 0);
}

export function parseCsv(text: string, source = "<input>"): BenchmarkRow[] {
  const lines = splitLines(text);
  if (lines.length === 0) {
    throw new SchemaError(`${source}: empty file, expected a header row`);
  }
  const header = lines[0].split(",");
  const missing = CSV_COLUMNS.filter((c) => !header.includes(c));
  const unexpected = header.filter((c) => !(CSV_COLUMNS as readonly string[]).includes(c));
  if (missing.length > 0 || unexpected.length > 0) {
    const parts: string[] = [];
    if (missing.length > 0) parts.push(`missing columns: ${missing.join(", ")}`);
    if (unexpected.length > 0) parts.push(`unexpected columns: ${unexpected.join(", ")}`);
    throw new SchemaError(`${source}: header does not match schema (${parts.join("; ")})`);
  }
  if (header.join(",") !== CSV_COLUMNS.join(",")) {
    throw new SchemaError(
      `${source}: columns out of order, expected ${CSV_COLUMNS.join(",")}`,
    );
  }

  const rows: BenchmarkRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const fields = lines[i].split(",");
    if (fields.length !== CSV_COLUMNS.length) {
      throw new SchemaError(
        `${source}:${i + 1}: expected ${CSV_COLUMNS.length} fields, got ${fields.length}`,
      );
    }
    const raw = Object.fromEntries(
      CSV_COLUMNS.map((c, j) => [c, fields[j]]),
    ) as Record<ColumnName, string>;
    if (raw.schema_version !== SCHEMA_VERSION) {
      throw new SchemaError(
        `${source}:${i + 1}: schema_version ${raw.schema_version} unsupported ` +
          `(this tool reads version ${SCHEMA_VERSION})`,
      );
    }
    for (const col of NUMERIC_COLUMNS) {
      if (!Number.isFinite(Number(raw[col]))) {
        throw new SchemaError(`${source}:${i + 1}: column ${col}: not a number: '${raw[col]}'`);
      }
    }
    rows.push({
      raw,
      gate: raw.gate,
      scenario: raw.scenario,
      pInit: Number(raw.p_init),
      infidelity: Number(raw.infidelity),
      pCode: Number(raw.p_code),
      pCodeStderr: Number(raw.p_code_stderr),
    });
  }
  return rows;
}

/**
 * Point-extraction dump: the plotted columns, bytes copied verbatim from
 * the input CSV so the dump is directly comparable against it.
 */
export function extractPoints(rows: BenchmarkRow[], seriesKey: ColumnName): string {
  const columns: ColumnName[] = [seriesKey, "infidelity", "p_code", "p_code_stderr"];
  const lines = [columns.join(",")];
  for (const row of rows) {
    lines.push(columns.map((c) => row.raw[c]).join(","));
  }
  return lines.join("\n") + "\n";
}
