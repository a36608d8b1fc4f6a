import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const __dirname = dirname(fileURLToPath(import.meta.url));

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { PRESETS } from "../src/plot.js";
import { CSV_COLUMNS, parseCsv } from "../src/schema.js";
import { renderSvg } from "../src/svg.js";

const GOLDEN = join(__dirname, "golden");
const FIG5 = join(GOLDEN, "fig5.csv");
const FIG11 = join(GOLDEN, "fig11.csv");

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "plot-report-"));
}

describe("presets", () => {
  it("exist for fig5 and fig11", () => {
    expect(Object.keys(PRESETS).sort()).toEqual(["fig11", "fig5"]);
  });
});

describe("rendering golden sweeps", () => {
  it("fig5 renders a three-series log-log scatter with guides", () => {
    const dir = tmp();
    const out = join(dir, "fig5.svg");
    const code = main(["--preset", "fig5", "--input", FIG5, "--output", out]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("<svg");
    expect(svg).toContain("p_init=0.002");
    expect(svg).toContain("p_init=0.07");
    expect(svg).toContain("stroke-dasharray"); // slope guide lines
    expect(svg).toContain("gate infidelity");
  });

  it("fig11 renders two panels with shared axes", () => {
    const dir = tmp();
    const out = join(dir, "fig11.svg");
    const code = main(["--preset", "fig11", "--input", FIG11, "--output", out]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg).toContain("gate = ldiv");
    expect(svg).toContain("gate = ldiv_no_k2");
  });

  it("output is byte-identical across runs", () => {
    const dir = tmp();
    const a = join(dir, "a.svg");
    const b = join(dir, "b.svg");
    expect(main(["--preset", "fig5", "--input", FIG5, "--output", a])).toBe(0);
    expect(main(["--preset", "fig5", "--input", FIG5, "--output", b])).toBe(0);
    expect(readFileSync(a)).toEqual(readFileSync(b));
  });

  it("point-extraction dump matches the input columns byte for byte", () => {
    const dir = tmp();
    const dump = join(dir, "points.csv");
    const code = main([
      "--preset",
      "fig5",
      "--input",
      FIG5,
      "--output",
      join(dir, "fig.svg"),
      "--dump",
      dump,
    ]);
    expect(code).toBe(0);
    // rebuild the expected dump directly from the input text, keeping the
    // original byte representation of every field
    const lines = readFileSync(FIG5, "utf-8").split("\n").filter((l) => l.length > 0);
    const idx = ["p_init", "infidelity", "p_code", "p_code_stderr"].map((c) =>
      CSV_COLUMNS.indexOf(c as (typeof CSV_COLUMNS)[number]),
    );
    const expected =
      ["p_init,infidelity,p_code,p_code_stderr"]
        .concat(lines.slice(1).map((l) => idx.map((i) => l.split(",")[i]).join(",")))
        .join("\n") + "\n";
    expect(readFileSync(dump, "utf-8")).toBe(expected);
  });
});

describe("degenerate inputs", () => {
  it("empty series renders a 'no data' placeholder and exits 0", () => {
    const dir = tmp();
    const empty = join(dir, "empty.csv");
    writeFileSync(empty, CSV_COLUMNS.join(",") + "\n");
    const out = join(dir, "empty.svg");
    const code = main(["--preset", "fig5", "--input", empty, "--output", out]);
    expect(code).toBe(0);
    expect(readFileSync(out, "utf-8")).toContain("no data");
  });

  it("schema mismatch exits nonzero with a column diagnostic", () => {
    const dir = tmp();
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, "gate,p_code\nv1,0.1\n");
    const code = main(["--preset", "fig5", "--input", bad, "--output", join(dir, "x.svg")]);
    expect(code).toBe(2);
  });

  it("usage errors exit 2", () => {
    expect(main(["--output", "x.svg"])).toBe(2);
    expect(main(["--preset", "fig99", "--input", "a.csv", "--output", "x.svg"])).toBe(2);
  });

  it("missing input file exits 1", () => {
    const dir = tmp();
    expect(main(["--preset", "fig5", "--input", join(dir, "nope.csv"), "--output", join(dir, "x.svg")])).toBe(1);
  });

  it("points with zero p_code are dropped from log plots but kept in the dump", () => {
    const golden = readFileSync(FIG5, "utf-8").trimEnd();
    // append a p_code = 0 row, as an ideal-gate sweep would produce
    const zeroLine = golden.split("\n")[1].split(",");
    zeroLine[CSV_COLUMNS.indexOf("p_code")] = "0";
    const rows = parseCsv(golden + "\n" + zeroLine.join(",") + "\n", "fig5.csv");
    const zeroRows = rows.filter((r) => r.pCode === 0);
    expect(zeroRows.length).toBe(1);
    const svg = renderSvg([{ title: "", rows }], {
      seriesKey: "p_init",
      xScale: "log",
      yScale: "log",
      guides: [],
      title: "t",
    });
    expect(svg).not.toContain("NaN");
    expect(svg).not.toContain("Infinity");
  });
});
