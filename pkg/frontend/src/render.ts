import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { binSeries, modeBin, sharedGrid } from "./binning.js";
import { column, loadCsv, numericColumn } from "./csv.js";
import { HEIGHT, MARGIN, SvgDoc, WIDTH, linearScale, ticks } from "./svg.js";

export type FigureKind = "weights_overlay" | "restricted_overlay" | "dfr_curve";

export interface FigureSpec {
  kind: FigureKind;
  /** weight histogram CSV (weight,count) for overlay kinds */
  weights_csv?: string;
  /** analytic pmf CSV (weight,prob) for overlay kinds */
  binomial_csv?: string;
  /** DFR CSV (x,failures,trials,log2_dfr,ci_low,ci_high) */
  dfr_csv?: string;
  output: string;
  /** y axis: "linear" for overlays, "log2" for DFR curves */
  y_scale?: "linear" | "log2";
  title?: string;
}

export interface RenderResult {
  svg: string;
  /** overlay kinds: bin indices of the empirical and analytic modes */
  empiricalModeBin?: number;
  analyticModeBin?: number;
  binWidth?: number;
}

export function render(spec: FigureSpec): RenderResult {
  switch (spec.kind) {
    case "weights_overlay":
    case "restricted_overlay":
      return renderOverlay(spec);
    case "dfr_curve":
      return renderDfrCurve(spec);
    default:
      throw new Error(`unknown figure kind: ${String(spec.kind)}`);
  }
}

export function renderToFile(spec: FigureSpec): RenderResult {
  const result = render(spec);
  mkdirSync(dirname(spec.output), { recursive: true });
  writeFileSync(spec.output, result.svg);
  return result;
}

function require_(v: string | undefined, what: string): string {
  if (!v) throw new Error(`figure spec needs ${what}`);
  return v;
}

function renderOverlay(spec: FigureSpec): RenderResult {
  const wt = loadCsv(require_(spec.weights_csv, "weights_csv"));
  const bn = loadCsv(require_(spec.binomial_csv, "binomial_csv"));
  const weights = numericColumn(wt, "weight");
  const counts = numericColumn(wt, "count");
  const xs = numericColumn(bn, "weight");
  const probs = numericColumn(bn, "prob");

  const trials = counts.reduce((a, b) => a + b, 0);
  const density = counts.map((c) => c / trials);

  const grid = sharedGrid(weights, xs);
  const emp = binSeries(weights, density, grid.binStart, grid.binWidth, grid.nBins);
  const ana = binSeries(xs, probs, grid.binStart, grid.binWidth, grid.nBins);

  const doc = new SvgDoc();
  const yMax = Math.max(...emp.mass, ...ana.mass) * 1.08 || 1;
  const x0 = grid.binStart;
  const x1 = grid.binStart + grid.binWidth * grid.nBins;
  const sx = linearScale(x0, x1, MARGIN.left, WIDTH - MARGIN.right);
  const sy = linearScale(0, yMax, HEIGHT - MARGIN.bottom, MARGIN.top);

  drawAxes(doc, sx, sy, x0, x1, 0, yMax, "weight", "probability mass / bin");

  for (let b = 0; b < grid.nBins; b++) {
    const m = emp.mass[b]!;
    if (m === 0) continue;
    const px = sx(x0 + b * grid.binWidth);
    const pw = sx(x0 + (b + 1) * grid.binWidth) - px;
    doc.rect(px, sy(m), pw - 1, sy(0) - sy(m), "#4878a8", 0.65);
  }
  const line: [number, number][] = [];
  for (let b = 0; b < grid.nBins; b++) {
    line.push([sx(x0 + (b + 0.5) * grid.binWidth), sy(ana.mass[b]!)]);
  }
  doc.polyline(line, "#c03028", 2);

  doc.text(WIDTH / 2, 24, spec.title ?? titleFor(spec.kind), 14);
  doc.text(WIDTH - MARGIN.right, 36, "bars: simulated  line: binomial model", 11, "end");

  return {
    svg: doc.render(),
    empiricalModeBin: modeBin(emp),
    analyticModeBin: modeBin(ana),
    binWidth: grid.binWidth,
  };
}

function renderDfrCurve(spec: FigureSpec): RenderResult {
  const table = loadCsv(require_(spec.dfr_csv, "dfr_csv"));
  const xs = numericColumn(table, "x");
  const log2 = column(table, "log2_dfr");
  const ciLow = column(table, "ci_low");
  const ciHigh = column(table, "ci_high");

  const finite = [...log2, ...ciLow, ...ciHigh].filter((v): v is number => v !== null);
  if (xs.length === 0) throw new Error("dfr CSV has no rows");
  const yLo = Math.min(...finite, -2) - 1;
  const yHi = Math.max(...finite, 0) + 1;
  const xPad = (Math.max(...xs) - Math.min(...xs)) * 0.05 || 1;

  const doc = new SvgDoc();
  const sx = linearScale(Math.min(...xs) - xPad, Math.max(...xs) + xPad,
    MARGIN.left, WIDTH - MARGIN.right);
  const sy = linearScale(yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  drawAxes(doc, sx, sy, Math.min(...xs) - xPad, Math.max(...xs) + xPad, yLo, yHi,
    "outer code length", "log2 decoding failure rate");

  const lined: [number, number][] = [];
  for (let i = 0; i < xs.length; i++) {
    const x = sx(xs[i]!);
    const v = log2[i] ?? null;
    const hi = ciHigh[i] ?? null;
    const lo = ciLow[i] ?? null;
    if (v === null) {
      // censored: no failures observed; mark the upper confidence limit
      if (hi !== null) doc.triangle(x, sy(hi), 6, "#777777");
      continue;
    }
    if (hi !== null && lo !== null) {
      doc.line(x, sy(lo), x, sy(hi), "#9ab0c8", 3);
    }
    doc.circle(x, sy(v), 4, "#1f4e79");
    lined.push([x, sy(v)]);
  }
  if (lined.length > 1) doc.polyline(lined, "#1f4e79", 1.5);

  doc.text(WIDTH / 2, 24, spec.title ?? "decoding failure rate", 14);
  doc.text(WIDTH - MARGIN.right, 36,
    "dots: measured  band: 95% Wilson  triangle: censored (0 failures)", 11, "end");

  return { svg: doc.render() };
}

function titleFor(kind: FigureKind): string {
  return kind === "restricted_overlay"
    ? "error weight on a restricted support vs binomial model"
    : "error-vector weight vs binomial model";
}

function drawAxes(
  doc: SvgDoc,
  sx: (v: number) => number,
  sy: (v: number) => number,
  x0: number,
  x1: number,
  y0: number,
  y1: number,
  xLabel: string,
  yLabel: string,
): void {
  const bottom = HEIGHT - MARGIN.bottom;
  doc.line(MARGIN.left, bottom, WIDTH - MARGIN.right, bottom, "#222222", 1);
  doc.line(MARGIN.left, MARGIN.top, MARGIN.left, bottom, "#222222", 1);
  for (const t of ticks(x0, x1, 8)) {
    doc.line(sx(t), bottom, sx(t), bottom + 5, "#222222", 1);
    doc.text(sx(t), bottom + 20, trimNum(t), 11);
  }
  for (const t of ticks(y0, y1, 8)) {
    doc.line(MARGIN.left - 5, sy(t), MARGIN.left, sy(t), "#222222", 1);
    doc.text(MARGIN.left - 8, sy(t) + 4, trimNum(t), 11, "end");
  }
  doc.text(WIDTH / 2, HEIGHT - 12, xLabel, 12);
  doc.text(16, MARGIN.top - 16, yLabel, 12, "start");
}

function trimNum(v: number): string {
  if (Number.isInteger(v)) return String(v);
  if (Math.abs(v) >= 1) return v.toFixed(2).replace(/\.?0+$/, "");
  return v.toPrecision(3);
}
