/**
 * Deterministic SVG scatter plots: no timestamps, no randomness, fixed
 * coordinate formatting, so identical input always yields identical bytes.
 */

import type { BenchmarkRow } from "./schema.js";

export type Scale = "log" | "linear";

export interface PanelSpec {
  title: string;
  rows: BenchmarkRow[];
}

export interface RenderOptions {
  seriesKey: "p_init" | "gate";
  xScale: Scale;
  yScale: Scale;
  /** log-log reference slopes to draw as dashed guide lines */
  guides: number[];
  title: string;
}

const WIDTH = 520;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 16, top: 36, bottom: 48 };

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const MARKERS = ["circle", "square", "diamond", "triangle"] as const;

function fmt(x: number): string {
  return x.toFixed(2);
}

function pow10Label(exp: number): string {
  return `1e${exp}`;
}

interface Axis {
  min: number;
  max: number;
  scale: Scale;
  toPixel(value: number, lo: number, hi: number): number;
  ticks(): number[];
}

function makeAxis(values: number[], scale: Scale): Axis {
  let pts = scale === "log" ? values.filter((v) => v > 0) : values;
  if (pts.length === 0) pts = [1e-6, 1];
  let min = Math.min(...pts);
  let max = Math.max(...pts);
  if (scale === "log") {
    min = Math.pow(10, Math.floor(Math.log10(min)));
    max = Math.pow(10, Math.ceil(Math.log10(max)));
    if (min === max) max = min * 10;
  } else {
    if (min === max) {
      min -= 0.5;
      max += 0.5;
    }
    const pad = 0.05 * (max - min);
    min -= pad;
    max += pad;
  }
  const transform = (v: number) => (scale === "log" ? Math.log10(v) : v);
  return {
    min,
    max,
    scale,
    toPixel(value, lo, hi) {
      const t = (transform(value) - transform(min)) / (transform(max) - transform(min));
      return lo + t * (hi - lo);
    },
    ticks() {
      if (scale === "log") {
        const lo = Math.round(Math.log10(min));
        const hi = Math.round(Math.log10(max));
        const step = Math.max(1, Math.ceil((hi - lo) / 8));
        const out: number[] = [];
        for (let e = lo; e <= hi; e += step) out.push(Math.pow(10, e));
        return out;
      }
      const out: number[] = [];
      const step = (max - min) / 5;
      for (let i = 0; i <= 5; i++) out.push(min + i * step);
      return out;
    },
  };
}

function marker(kind: (typeof MARKERS)[number], x: number, y: number, color: string): string {
  const r = 3.2;
  switch (kind) {
    case "circle":
      return `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${color}"/>`;
    case "square":
      return `<rect x="${fmt(x - r)}" y="${fmt(y - r)}" width="${fmt(2 * r)}" height="${fmt(2 * r)}" fill="${color}"/>`;
    case "diamond":
      return `<path d="M${fmt(x)} ${fmt(y - r - 1)}L${fmt(x + r + 1)} ${fmt(y)}L${fmt(x)} ${fmt(y + r + 1)}L${fmt(x - r - 1)} ${fmt(y)}Z" fill="${color}"/>`;
    case "triangle":
      return `<path d="M${fmt(x)} ${fmt(y - r - 1)}L${fmt(x + r + 1)} ${fmt(y + r)}L${fmt(x - r - 1)} ${fmt(y + r)}Z" fill="${color}"/>`;
  }
}

function seriesLabel(key: RenderOptions["seriesKey"], value: string): string {
  return key === "p_init" ? `p_init=${Number(value)}` : value;
}

/** Render one or more panels with shared axis ranges into a single SVG. */
export function renderSvg(panels: PanelSpec[], opts: RenderOptions): string {
  const allRows = panels.flatMap((p) => p.rows);
  const plottable = (r: BenchmarkRow) =>
    (opts.xScale !== "log" || r.infidelity > 0) && (opts.yScale !== "log" || r.pCode > 0);
  const visible = allRows.filter(plottable);

  const totalWidth = WIDTH * Math.max(1, panels.length);
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" width="${totalWidth}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${totalWidth} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`;
  const parts: string[] = [head, `<rect width="${totalWidth}" height="${HEIGHT}" fill="white"/>`];

  if (visible.length === 0) {
    parts.push(
      `<text x="${totalWidth / 2}" y="${HEIGHT / 2}" text-anchor="middle" font-size="16" fill="#666">no data</text>`,
    );
    parts.push("</svg>");
    return parts.join("\n") + "\n";
  }

  // shared axes across panels
  const xAxis = makeAxis(visible.map((r) => r.infidelity), opts.xScale);
  const yAxis = makeAxis(visible.map((r) => r.pCode), opts.yScale);
  const seriesValues = [...new Set(allRows.map((r) => r.raw[opts.seriesKey]))].sort(
    (a, b) => Number(a) - Number(b) || a.localeCompare(b),
  );

  panels.forEach((panel, pi) => {
    const x0 = pi * WIDTH + MARGIN.left;
    const x1 = (pi + 1) * WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    const px = (v: number) => xAxis.toPixel(v, x0, x1);
    const py = (v: number) => yAxis.toPixel(v, y0, y1);

    parts.push(
      `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#333"/>`,
    );
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="${y1 - 12}" text-anchor="middle" font-size="13">${panel.title}</text>`,
    );
    for (const t of xAxis.ticks()) {
      const x = px(t);
      const label = opts.xScale === "log" ? pow10Label(Math.round(Math.log10(t))) : t.toPrecision(3);
      parts.push(`<line x1="${fmt(x)}" y1="${y0}" x2="${fmt(x)}" y2="${y0 + 4}" stroke="#333"/>`);
      parts.push(
        `<text x="${fmt(x)}" y="${y0 + 18}" text-anchor="middle" font-size="10">${label}</text>`,
      );
    }
    for (const t of yAxis.ticks()) {
      const y = py(t);
      const label = opts.yScale === "log" ? pow10Label(Math.round(Math.log10(t))) : t.toPrecision(3);
      parts.push(`<line x1="${x0 - 4}" y1="${fmt(y)}" x2="${x0}" y2="${fmt(y)}" stroke="#333"/>`);
      parts.push(
        `<text x="${x0 - 7}" y="${fmt(y + 3)}" text-anchor="end" font-size="10">${label}</text>`,
      );
    }
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 10}" text-anchor="middle" font-size="12">gate infidelity</text>`,
    );
    parts.push(
      `<text x="${pi * WIDTH + 16}" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="12" transform="rotate(-90 ${pi * WIDTH + 16} ${(y0 + y1) / 2})">p_code</text>`,
    );

    // slope guides through the geometric mean of the panel's points
    const panelVisible = panel.rows.filter(plottable);
    if (opts.xScale === "log" && opts.yScale === "log" && panelVisible.length > 0) {
      parts.push(
        `<clipPath id="clip${pi}"><rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}"/></clipPath>`,
      );
      const gx =
        panelVisible.reduce((acc, r) => acc + Math.log10(r.infidelity), 0) / panelVisible.length;
      const gy =
        panelVisible.reduce((acc, r) => acc + Math.log10(r.pCode), 0) / panelVisible.length;
      for (const slope of opts.guides) {
        const xs = [Math.log10(xAxis.min), Math.log10(xAxis.max)];
        const pts = xs.map((lx) => {
          const ly = gy + slope * (lx - gx);
          return [px(Math.pow(10, lx)), py(Math.pow(10, ly))];
        });
        parts.push(
          `<line x1="${fmt(pts[0][0])}" y1="${fmt(pts[0][1])}" x2="${fmt(pts[1][0])}" y2="${fmt(pts[1][1])}" ` +
            `stroke="#999" stroke-dasharray="6 4" clip-path="url(#clip${pi})"/>`,
        );
      }
    }

    for (const r of panelVisible) {
      const si = seriesValues.indexOf(r.raw[opts.seriesKey]);
      const color = COLORS[si % COLORS.length];
      const x = px(r.infidelity);
      const y = py(r.pCode);
      if (r.pCodeStderr > 0) {
        const hiY = py(r.pCode + r.pCodeStderr);
        const loVal =
          opts.yScale === "log"
            ? Math.max(r.pCode - r.pCodeStderr, yAxis.min)
            : r.pCode - r.pCodeStderr;
        parts.push(
          `<line x1="${fmt(x)}" y1="${fmt(py(loVal))}" x2="${fmt(x)}" y2="${fmt(hiY)}" stroke="${color}" stroke-width="0.8"/>`,
        );
      }
      parts.push(marker(MARKERS[si % MARKERS.length], x, y, color));
    }
  });

  // legend in the first panel
  seriesValues.forEach((value, si) => {
    const lx = MARGIN.left + 10;
    const ly = MARGIN.top + 14 + 16 * si;
    parts.push(marker(MARKERS[si % MARKERS.length], lx, ly - 3, COLORS[si % COLORS.length]));
    parts.push(
      `<text x="${lx + 10}" y="${ly}" font-size="11">${seriesLabel(opts.seriesKey, value)}</text>`,
    );
  });
  parts.push(
    `<text x="${totalWidth / 2}" y="16" text-anchor="middle" font-size="14">${opts.title}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
