// Minimal deterministic SVG emitter.  Coordinates are rounded to two
// decimals so output bytes do not depend on floating-point printing
// quirks; attribute order is fixed by construction.

import type { Style } from "./style.js";

export function px(v: number): string {
  return v.toFixed(2);
}

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  map(v: number): number {
    const span = this.d1 - this.d0;
    if (span === 0) return (this.r0 + this.r1) / 2;
    return this.r0 + ((v - this.d0) / span) * (this.r1 - this.r0);
  }
}

// Tick positions on the 1-2-5 ladder covering [lo, hi].
export function ticks(lo: number, hi: number, target = 5): number[] {
  if (!(hi > lo)) return [lo];
  const rawStep = (hi - lo) / target;
  const power = Math.floor(Math.log10(rawStep));
  const base = Math.pow(10, power);
  let step = base;
  for (const mult of [1, 2, 5, 10]) {
    step = mult * base;
    if (step >= rawStep) break;
  }
  const out: number[] = [];
  let v = Math.ceil(lo / step) * step;
  // snap to the step grid so labels print cleanly
  for (; v <= hi + 1e-9 * step; v += step) {
    out.push(Number(v.toPrecision(12)));
  }
  return out;
}

// Decade ticks for log axes.
export function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let k = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, k) <= hi * (1 + 1e-9); k++) {
    out.push(Math.pow(10, k));
  }
  return out;
}

export function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e4)) {
    const k = Math.round(Math.log10(Math.abs(v)));
    if (Math.abs(v - Math.sign(v) * Math.pow(10, k)) < 1e-12 * Math.abs(v)) {
      return `${v < 0 ? "-" : ""}1e${k}`;
    }
    return v.toExponential(1);
  }
  return String(v);
}

export interface Frame {
  x: LinearScale;
  y: LinearScale;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export function frame(
  style: Style,
  xDomain: [number, number],
  yDomain: [number, number],
  box?: { x0: number; x1: number; y0: number; y1: number },
): Frame {
  const left = box ? box.x0 : style.margin.left;
  const right = box ? box.x1 : style.width - style.margin.right;
  const top = box ? box.y0 : style.margin.top;
  const bottom = box ? box.y1 : style.height - style.margin.bottom;
  return {
    x: new LinearScale(xDomain[0], xDomain[1], left, right),
    y: new LinearScale(yDomain[0], yDomain[1], bottom, top),
    left,
    right,
    top,
    bottom,
  };
}

export function polyline(
  xs: number[],
  ys: number[],
  f: Frame,
  attrs: string,
): string {
  const pts = xs.map((x, i) => `${px(f.x.map(x))},${px(f.y.map(ys[i]!))}`);
  return `<polyline points="${pts.join(" ")}" ${attrs}/>`;
}

export function xAxis(
  f: Frame,
  tickValues: number[],
  style: Style,
  label: string,
  fmtTick: (v: number) => string = tickLabel,
): string {
  const parts: string[] = [];
  parts.push(
    `<line x1="${px(f.left)}" y1="${px(f.bottom)}" x2="${px(f.right)}" y2="${px(f.bottom)}" stroke="${style.axis_color}" stroke-width="1"/>`,
  );
  for (const v of tickValues) {
    const x = px(f.x.map(v));
    parts.push(
      `<line x1="${x}" y1="${px(f.bottom)}" x2="${x}" y2="${px(f.bottom + 4)}" stroke="${style.axis_color}" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${x}" y="${px(f.bottom + 17)}" text-anchor="middle" font-size="${style.font_size - 2}">${esc(fmtTick(v))}</text>`,
    );
  }
  const cx = px((f.left + f.right) / 2);
  parts.push(
    `<text x="${cx}" y="${px(f.bottom + 34)}" text-anchor="middle" font-size="${style.font_size}">${esc(label)}</text>`,
  );
  return parts.join("\n");
}

export function yAxis(
  f: Frame,
  tickValues: number[],
  style: Style,
  label: string,
  fmtTick: (v: number) => string = tickLabel,
): string {
  const parts: string[] = [];
  parts.push(
    `<line x1="${px(f.left)}" y1="${px(f.top)}" x2="${px(f.left)}" y2="${px(f.bottom)}" stroke="${style.axis_color}" stroke-width="1"/>`,
  );
  for (const v of tickValues) {
    const y = px(f.y.map(v));
    parts.push(
      `<line x1="${px(f.left - 4)}" y1="${y}" x2="${px(f.left)}" y2="${y}" stroke="${style.axis_color}" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${px(f.left - 7)}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="${style.font_size - 2}">${esc(fmtTick(v))}</text>`,
    );
  }
  const cy = (f.top + f.bottom) / 2;
  parts.push(
    `<text x="${px(f.left - 48)}" y="${px(cy)}" text-anchor="middle" font-size="${style.font_size}" transform="rotate(-90 ${px(f.left - 48)} ${px(cy)})">${esc(label)}</text>`,
  );
  return parts.join("\n");
}

export function document(style: Style, title: string, body: string): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${style.width}" height="${style.height}" viewBox="0 0 ${style.width} ${style.height}">`,
    `<rect x="0" y="0" width="${style.width}" height="${style.height}" fill="white"/>`,
    `<g font-family="${esc(style.font_family)}" fill="${style.axis_color}">`,
    `<text x="${px(style.width / 2)}" y="${px(style.margin.top - 10)}" text-anchor="middle" font-size="${style.title_size}">${esc(title)}</text>`,
    body,
    `</g>`,
    `</svg>`,
    ``,
  ].join("\n");
}
