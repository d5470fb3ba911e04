/** Minimal deterministic SVG assembly: fixed canvas, fixed fonts, no
 *  timestamps or generated ids, so re-rendering is byte-stable. */

export const WIDTH = 860;
export const HEIGHT = 520;
export const MARGIN = { left: 72, right: 24, top: 40, bottom: 56 };

export interface Scale {
  (v: number): number;
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v: number) => r0 + ((v - d0) / span) * (r1 - r0);
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export class SvgDoc {
  private parts: string[] = [];

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" fill-opacity="${opacity}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1): void {
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, width = 2): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${r}" fill="${fill}"/>`);
  }

  triangle(cx: number, cy: number, r: number, stroke: string): void {
    const pts = [
      [cx, cy - r],
      [cx - r, cy + r],
      [cx + r, cy + r],
    ]
      .map(([x, y]) => `${fmt(x!)},${fmt(y!)}`)
      .join(" ");
    this.parts.push(
      `<polygon points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.5"/>`,
    );
  }

  text(x: number, y: number, s: string, size = 12, anchor = "middle"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="monospace" font-size="${size}" ` +
        `text-anchor="${anchor}">${esc(s)}</text>`,
    );
  }

  render(): string {
    return (
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}">\n<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>\n` +
      this.parts.join("\n") +
      "\n</svg>\n"
    );
  }
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(2);
}

/** Evenly spaced axis ticks at round-ish values. */
export function ticks(lo: number, hi: number, count: number): number[] {
  const span = hi - lo || 1;
  const step = niceStep(span / count);
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + 1e-9; v += step) {
    out.push(Number(v.toFixed(10)));
  }
  return out;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(Math.abs(raw) || 1)));
  const norm = raw / mag;
  if (norm <= 1) return mag;
  if (norm <= 2) return 2 * mag;
  if (norm <= 5) return 5 * mag;
  return 10 * mag;
}
