/** Small helpers for assembling SVG documents as strings. */

/** Escape a string for use inside SVG text nodes and attributes. */
export function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed-point coordinate formatting keeps output byte-deterministic. */
export function fmt(v: number): string {
  return v.toFixed(2);
}

/** Line colors assigned to solvers in order of appearance. */
export const PALETTE = [
  "#4361ee",
  "#e63946",
  "#2d6a4f",
  "#f77f00",
  "#7209b7",
  "#0096c7",
  "#6a994e",
  "#b5179e",
];

export function textEl(
  x: number,
  y: number,
  content: string,
  attrs = "",
): string {
  return `<text x="${fmt(x)}" y="${fmt(y)}" ${attrs}>${esc(content)}</text>`;
}

export function lineEl(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  attrs: string,
): string {
  return `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ${attrs}/>`;
}

export function rectEl(
  x: number,
  y: number,
  w: number,
  h: number,
  attrs: string,
): string {
  return `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ${attrs}/>`;
}
