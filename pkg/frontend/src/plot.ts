/** Plot assembly: presets, panel grouping and file output. */

import { readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { parseCsv, extractPoints, type BenchmarkRow, type ColumnName } from "./schema.js";
import { renderSvg, type PanelSpec, type RenderOptions, type Scale } from "./svg.js";

export interface PlotSpec {
  inputs: string[];
  seriesKey: "p_init" | "gate";
  xScale: Scale;
  yScale: Scale;
  guides: number[];
  /** split rows into side-by-side panels by this column ("" = single panel) */
  panelKey: "" | "gate";
  title: string;
  output: string;
  /** optional path for the point-extraction debug dump */
  dump?: string;
}

export const PRESETS: Record<string, Partial<PlotSpec>> = {
  // three p_init series, log-log, slope guides for the quadratic and
  // linear regimes
  fig5: {
    seriesKey: "p_init",
    xScale: "log",
    yScale: "log",
    guides: [1, 2],
    panelKey: "",
    title: "scenario I: p_code vs gate infidelity",
  },
  // side-by-side comparison of the exchange channel with and without
  // the K2 term, shared axes
  fig11: {
    seriesKey: "p_init",
    xScale: "log",
    yScale: "log",
    guides: [1],
    panelKey: "gate",
    title: "exchange CNOT: effect of the K2 term",
  },
};

export function loadRows(spec: PlotSpec): BenchmarkRow[] {
  const rows: BenchmarkRow[] = [];
  for (const path of spec.inputs) {
    const text = readFileSync(path, "utf-8");
    rows.push(...parseCsv(text, basename(path)));
  }
  return rows;
}

export function buildPanels(rows: BenchmarkRow[], spec: PlotSpec): PanelSpec[] {
  if (!spec.panelKey) {
    return [{ title: "", rows }];
  }
  const key = spec.panelKey as ColumnName;
  const values = [...new Set(rows.map((r) => r.raw[key]))].sort();
  return values.map((v) => ({
    title: `${spec.panelKey} = ${v}`,
    rows: rows.filter((r) => r.raw[key] === v),
  }));
}

export function render(spec: PlotSpec): void {
  const rows = loadRows(spec);
  const opts: RenderOptions = {
    seriesKey: spec.seriesKey,
    xScale: spec.xScale,
    yScale: spec.yScale,
    guides: spec.guides,
    title: spec.title,
  };
  const panels: PanelSpec[] = rows.length === 0 ? [{ title: "", rows: [] }] : buildPanels(rows, spec);
  writeFileSync(spec.output, renderSvg(panels, opts));
  if (spec.dump) {
    writeFileSync(spec.dump, extractPoints(rows, spec.seriesKey));
  }
}
