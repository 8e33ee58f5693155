/**
 * Profile figures from curve rows.
 *
 * The pipeline has two stages so it can be checked halfway: plottedData
 * groups CSV rows into per-tau panels without touching a single value,
 * and renderProfiles turns those panels into one SVG document — a row of
 * panels (one per tau), post-step curves, a shared legend, and a log2
 * abscissa for performance profiles (evaluation-count ratios) versus a
 * linear one for data profiles (budget groups).
 */

import type { CurveRow } from "./csv.js";
import { PALETTE, fmt, lineEl, rectEl, textEl } from "./svg.js";

export type ProfileKind = "performance" | "data";

/** One solver's curve within a panel; values verbatim from the file. */
export interface PlottedSeries {
  solver: string;
  abscissae: number[];
  ordinates: number[];
}

/** All curves sharing one accuracy level tau. */
export interface PlottedPanel {
  tau: number;
  series: PlottedSeries[];
}

export interface RenderResult {
  svg: string;
  warnings: string[];
}

/**
 * Group rows into panels: one per tau (ascending), series per solver
 * (by name), knots in file order.  Values are copied, never transformed.
 */
export function plottedData(rows: CurveRow[]): PlottedPanel[] {
  const byTau = new Map<number, Map<string, PlottedSeries>>();
  for (const row of rows) {
    let panel = byTau.get(row.tau);
    if (panel === undefined) {
      panel = new Map();
      byTau.set(row.tau, panel);
    }
    let series = panel.get(row.solver);
    if (series === undefined) {
      series = { solver: row.solver, abscissae: [], ordinates: [] };
      panel.set(row.solver, series);
    }
    series.abscissae.push(row.abscissa);
    series.ordinates.push(row.ordinate);
  }
  const taus = [...byTau.keys()].sort((a, b) => a - b);
  return taus.map((tau) => {
    const panel = byTau.get(tau)!;
    const solvers = [...panel.keys()].sort();
    return { tau, series: solvers.map((s) => panel.get(s)!) };
  });
}

// panel geometry (pixels)
const PANEL_W = 300;
const PANEL_H = 210;
const GAP = 26;
const LEFT = 52;
const TOP = 74;
const BOTTOM = 48;

function niceStep(span: number, maxTicks: number): number {
  let step = 1;
  for (;;) {
    for (const s of [step, 2 * step, 5 * step]) {
      if (span / s <= maxTicks) return s;
    }
    step *= 10;
  }
}

/** Render panels to a single SVG document; empty panels are dropped. */
export function renderProfiles(
  panels: PlottedPanel[],
  kind: ProfileKind,
): RenderResult {
  const warnings: string[] = [];
  const kept = panels.filter((p) => {
    if (p.series.some((s) => s.abscissae.length > 0)) return true;
    warnings.push(`panel for tau ${p.tau.toExponential()} omitted: no curve data`);
    return false;
  });

  const solvers: string[] = [];
  for (const p of kept) {
    for (const s of p.series) {
      if (!solvers.includes(s.solver)) solvers.push(s.solver);
    }
  }
  const color = (solver: string) =>
    PALETTE[solvers.indexOf(solver) % PALETTE.length]!;

  const n = Math.max(kept.length, 1);
  const width = LEFT + n * PANEL_W + (n - 1) * GAP + 18;
  const height = TOP + PANEL_H + BOTTOM;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `font-family="Helvetica, Arial, sans-serif" font-size="12">`,
  );
  parts.push(rectEl(0, 0, width, height, 'fill="#ffffff"'));
  const title = kind === "performance" ? "Performance profiles" : "Data profiles";
  parts.push(textEl(LEFT, 24, title, 'font-size="16" font-weight="bold"'));

  if (kept.length === 0) {
    warnings.push("nothing to plot: every panel was empty");
    parts.push(textEl(LEFT, TOP + PANEL_H / 2, "(no curve data)", 'fill="#666"'));
    parts.push("</svg>");
    return { svg: parts.join("\n") + "\n", warnings };
  }

  // shared legend: one swatch per solver
  let lx = LEFT;
  for (const solver of solvers) {
    parts.push(lineEl(lx, 40, lx + 22, 40, `stroke="${color(solver)}" stroke-width="2.5"`));
    parts.push(textEl(lx + 27, 44, solver));
    lx += 27 + 7.2 * solver.length + 24;
  }

  kept.forEach((panel, idx) => {
    const x0 = LEFT + idx * (PANEL_W + GAP);
    const y0 = TOP;
    parts.push(panelSvg(panel, kind, x0, y0, idx === 0, color));
  });

  parts.push("</svg>");
  return { svg: parts.join("\n") + "\n", warnings };
}

function panelSvg(
  panel: PlottedPanel,
  kind: ProfileKind,
  x0: number,
  y0: number,
  first: boolean,
  color: (solver: string) => string,
): string {
  const parts: string[] = [];
  const toY = (o: number) => y0 + PANEL_H - o * PANEL_H; // ordinates live in [0, 1]

  // abscissa mapping: log2 of the evaluation ratio for performance
  // profiles (ratios start at 1), linear budget groups for data profiles
  const xsAll = panel.series.flatMap((s) => s.abscissae);
  const u = (a: number) => (kind === "performance" ? Math.log2(Math.max(a, 1)) : a);
  const uMax = Math.max(...xsAll.map(u), kind === "performance" ? 1 : 1e-9);
  const toX = (a: number) => x0 + (Math.min(u(a), uMax) / uMax) * PANEL_W;

  parts.push(rectEl(x0, y0, PANEL_W, PANEL_H, 'fill="none" stroke="#333"'));
  parts.push(
    textEl(x0 + PANEL_W / 2, y0 - 10, `tau = ${panel.tau.toExponential()}`,
           'text-anchor="middle" font-size="13"'),
  );

  // horizontal grid and ordinate labels at 0, 1/4, ..., 1
  for (let q = 0; q <= 4; q++) {
    const o = q / 4;
    const y = toY(o);
    if (q > 0 && q < 4) {
      parts.push(lineEl(x0, y, x0 + PANEL_W, y, 'stroke="#ddd" stroke-width="0.6"'));
    }
    if (first) {
      parts.push(textEl(x0 - 8, y + 4, o.toFixed(2), 'text-anchor="end" fill="#444"'));
    }
  }
  if (first) {
    const cy = y0 + PANEL_H / 2;
    parts.push(
      textEl(x0 - 40, cy, "fraction of problems",
             `text-anchor="middle" transform="rotate(-90 ${fmt(x0 - 40)} ${fmt(cy)})"`),
    );
  }

  // abscissa ticks: powers of two for ratios, nice integers for groups
  if (kind === "performance") {
    const step = niceStep(uMax, 6);
    for (let t = 0; t <= uMax + 1e-9; t += step) {
      const x = x0 + (t / uMax) * PANEL_W;
      parts.push(lineEl(x, y0 + PANEL_H, x, y0 + PANEL_H + 4, 'stroke="#333"'));
      parts.push(textEl(x, y0 + PANEL_H + 17, String(2 ** t), 'text-anchor="middle" fill="#444"'));
    }
  } else {
    const step = niceStep(uMax, 6);
    for (let t = 0; t <= uMax + 1e-9; t += step) {
      const x = x0 + (t / uMax) * PANEL_W;
      parts.push(lineEl(x, y0 + PANEL_H, x, y0 + PANEL_H + 4, 'stroke="#333"'));
      parts.push(textEl(x, y0 + PANEL_H + 17, String(t), 'text-anchor="middle" fill="#444"'));
    }
  }
  const xLabel =
    kind === "performance" ? "evaluation ratio (log2 scale)" : "groups of n+1 evaluations";
  parts.push(
    textEl(x0 + PANEL_W / 2, y0 + PANEL_H + 36, xLabel, 'text-anchor="middle" fill="#444"'),
  );

  // post-step curves: each value holds until the next knot
  for (const series of panel.series) {
    const a = series.abscissae;
    const o = series.ordinates;
    if (a.length === 0) continue;
    let d = `M ${fmt(toX(a[0]!))} ${fmt(toY(o[0]!))}`;
    for (let i = 1; i < a.length; i++) {
      d += ` H ${fmt(toX(a[i]!))} V ${fmt(toY(o[i]!))}`;
    }
    d += ` H ${fmt(x0 + PANEL_W)}`;
    parts.push(
      `<path d="${d}" fill="none" stroke="${color(series.solver)}" ` +
        `stroke-width="2" stroke-linejoin="round"/>`,
    );
  }
  return parts.join("\n");
}
