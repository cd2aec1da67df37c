// Growth-fit figure: log-log scatter of frontier increments against the
// fitted power law, annotated with the exponent.
//
//   node dist/plot_holder.js <fits.json> <out.svg>
//
// The fit line is drawn dashed when r^2 < 0.9, i.e. when the power law
// is not actually a good description of the window.

import { readHolderFit } from "./rundir.js";
import { loadStyle } from "./style.js";
import { writeSidecar } from "./sidecar.js";
import * as svg from "./svg.js";
import { writeFileSync } from "node:fs";

const R2_SOLID = 0.9;

export function render(fitsPath: string, outSvg: string): void {
  const style = loadStyle();
  const fit = readHolderFit(fitsPath);
  if (fit === null) throw new Error(`no growth fit in ${fitsPath}`);
  const points = fit.points.filter(([s, d]) => s > 0 && d > 0);
  if (points.length === 0) throw new Error(`no positive increments in ${fitsPath}`);

  const logS = points.map(([s]) => Math.log10(s));
  const logD = points.map(([, d]) => Math.log10(d));
  const sLo = Math.min(...logS);
  const sHi = Math.max(...logS);
  const dLo = Math.min(...logD);
  const dHi = Math.max(...logD);
  const padS = 0.08 * (sHi - sLo || 1);
  const padD = 0.15 * (dHi - dLo || 1);
  const f = svg.frame(style, [sLo - padS, sHi + padS], [dLo - padD, dHi + padD]);

  const dashed = fit.r_squared < R2_SOLID;
  const parts: string[] = [];
  const sTicks = svg.logTicks(Math.pow(10, sLo - padS), Math.pow(10, sHi + padS));
  const dTicks = svg.logTicks(Math.pow(10, dLo - padD), Math.pow(10, dHi + padD));
  parts.push(svg.xAxis(f, sTicks.map(Math.log10), style, "s", (v) => svg.tickLabel(Math.pow(10, v))));
  parts.push(svg.yAxis(f, dTicks.map(Math.log10), style, "frontier advance over s", (v) => svg.tickLabel(Math.pow(10, v))));

  // fitted line in log space: log d = log c + e log s
  const lineY = (ls: number) => Math.log10(fit.constant) + fit.exponent * ls;
  const dash = dashed ? ` stroke-dasharray="${style.fit_dash}"` : "";
  parts.push(
    `<line class="fit-line" x1="${svg.px(f.x.map(sLo))}" y1="${svg.px(f.y.map(lineY(sLo)))}" x2="${svg.px(f.x.map(sHi))}" y2="${svg.px(f.y.map(lineY(sHi)))}" stroke="${style.fit_color}" stroke-width="${style.line_width}"${dash}/>`,
  );
  for (let i = 0; i < points.length; i++) {
    parts.push(
      `<circle class="fit-point" cx="${svg.px(f.x.map(logS[i]!))}" cy="${svg.px(f.y.map(logD[i]!))}" r="${style.point_radius}" fill="${style.point_color}"/>`,
    );
  }
  parts.push(
    `<text class="exponent-note" x="${svg.px(f.left + 10)}" y="${svg.px(f.top + 16)}" font-size="${style.font_size}">exponent ${fit.exponent.toFixed(2)}</text>`,
  );
  parts.push(
    `<text x="${svg.px(f.left + 10)}" y="${svg.px(f.top + 16 + style.font_size + 3)}" font-size="${style.font_size - 1}">r^2 ${fit.r_squared.toFixed(3)}</text>`,
  );

  writeFileSync(outSvg, svg.document(style, "Frontier growth", parts.join("\n")));
  writeSidecar(outSvg, {
    kind: "holder",
    exponent: fit.exponent,
    constant: fit.constant,
    r_squared: fit.r_squared,
    window: fit.window,
    dashed,
    points,
  });
}

function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: plot_holder <fits.json> <out.svg>");
    return 1;
  }
  try {
    render(argv[0]!, argv[1]!);
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
