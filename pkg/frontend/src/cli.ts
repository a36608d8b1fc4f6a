#!/usr/bin/env node
/**
 * plot-report: render s17bench sweep CSVs as SVG scatter plots.
 *
 * Exit codes: 0 success (including empty input, which renders a "no data"
 * placeholder); 2 on schema or usage errors; 1 on other failures.
 */

import { parseArgs } from "node:util";

import { PRESETS, render, type PlotSpec } from "./plot.js";
import { SchemaError } from "./schema.js";

const USAGE = `usage: plot-report --input sweep.csv [--input more.csv ...] --output fig.svg
  [--preset fig5|fig11] [--series-key p_init|gate] [--panel-key gate]
  [--x-scale log|linear] [--y-scale log|linear] [--guides 1,2]
  [--title text] [--dump points.csv]`;

class UsageError extends Error {}

function parseScale(value: string, flag: string): "log" | "linear" {
  if (value !== "log" && value !== "linear") {
    throw new UsageError(`${flag}: expected log or linear, got '${value}'`);
  }
  return value;
}

export function buildSpec(argv: string[]): PlotSpec {
  const { values } = parseArgs({
    args: argv,
    options: {
      input: { type: "string", multiple: true },
      output: { type: "string" },
      preset: { type: "string" },
      "series-key": { type: "string" },
      "panel-key": { type: "string" },
      "x-scale": { type: "string" },
      "y-scale": { type: "string" },
      guides: { type: "string" },
      title: { type: "string" },
      dump: { type: "string" },
      help: { type: "boolean" },
    },
  });
  if (values.help) {
    console.log(USAGE);
    process.exit(0);
  }
  const spec: PlotSpec = {
    inputs: [],
    seriesKey: "p_init",
    xScale: "log",
    yScale: "log",
    guides: [],
    panelKey: "",
    title: "",
    output: "",
  };
  if (values.preset !== undefined) {
    const preset = PRESETS[values.preset];
    if (!preset) {
      throw new UsageError(
        `unknown preset '${values.preset}' (known: ${Object.keys(PRESETS).join(", ")})`,
      );
    }
    Object.assign(spec, preset);
  }
  if (values.input) spec.inputs = values.input;
  if (values.output) spec.output = values.output;
  if (values["series-key"] !== undefined) {
    if (values["series-key"] !== "p_init" && values["series-key"] !== "gate") {
      throw new UsageError(`--series-key: expected p_init or gate`);
    }
    spec.seriesKey = values["series-key"];
  }
  if (values["panel-key"] !== undefined) {
    if (values["panel-key"] !== "" && values["panel-key"] !== "gate") {
      throw new UsageError(`--panel-key: expected gate or empty`);
    }
    spec.panelKey = values["panel-key"];
  }
  if (values["x-scale"] !== undefined) spec.xScale = parseScale(values["x-scale"], "--x-scale");
  if (values["y-scale"] !== undefined) spec.yScale = parseScale(values["y-scale"], "--y-scale");
  if (values.guides !== undefined) {
    spec.guides = values.guides
      .split(",")
      .filter((tok) => tok.trim() !== "")
      .map((tok) => {
        const v = Number(tok);
        if (!Number.isFinite(v)) throw new UsageError(`--guides: not a number: '${tok}'`);
        return v;
      });
  }
  if (values.title !== undefined) spec.title = values.title;
  if (values.dump !== undefined) spec.dump = values.dump;

  if (spec.inputs.length === 0) throw new UsageError(`--input is required\n${USAGE}`);
  if (!spec.output) throw new UsageError(`--output is required\n${USAGE}`);
  return spec;
}

export function main(argv: string[]): number {
  let spec: PlotSpec;
  try {
    spec = buildSpec(argv);
  } catch (err) {
    console.error(`plot-report: ${(err as Error).message}`);
    return 2;
  }
  try {
    render(spec);
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`plot-report: schema error: ${err.message}`);
      return 2;
    }
    console.error(`plot-report: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
