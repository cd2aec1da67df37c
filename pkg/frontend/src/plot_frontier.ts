// Frontier path figure: lambda(t) with jump glyphs and regime bands.
//
//   node dist/plot_frontier.js <run_dir> <out.svg>
//
// The regime bands come from regimes.csv (one band per classified
// snapshot, extending to the next snapshot or the horizon); jump glyphs
// come from the summary's jump list.  A sidecar <out>.series.json holds
// every number that was drawn.

import { readFrontier, readRegimes, readJumps } from "./rundir.js";
import { loadStyle } from "./style.js";
import { writeSidecar } from "./sidecar.js";
import * as svg from "./svg.js";
import { writeFileSync } from "node:fs";

interface Band {
  t0: number;
  t1: number;
  regime: string;
}

export function render(runDir: string, outSvg: string): void {
  const style = loadStyle();
  const frontier = readFrontier(runDir);
  const regimes = readRegimes(runDir);
  const jumps = readJumps(runDir);
  if (frontier.t.length === 0) throw new Error(`empty frontier in ${runDir}`);

  const tEnd = frontier.t[frontier.t.length - 1]!;
  const lamMax = Math.max(...frontier.lambda);
  const lamMin = Math.min(...frontier.lambda);
  const pad = lamMax > lamMin ? 0.06 * (lamMax - lamMin) : 1.0;
  const f = svg.frame(style, [frontier.t[0]!, tEnd], [lamMin, lamMax + pad]);

  const bands: Band[] = [];
  const parts: string[] = [];
  regimes.forEach((row, i) => {
    const t1 = i + 1 < regimes.length ? regimes[i + 1]!.t : tEnd;
    const color = style.regime_band_colors[row.regime];
    if (color === undefined || t1 <= row.t) return;
    bands.push({ t0: row.t, t1, regime: row.regime });
    const x0 = f.x.map(row.t);
    const x1 = f.x.map(t1);
    parts.push(
      `<rect class="regime-band" x="${svg.px(x0)}" y="${svg.px(f.top)}" width="${svg.px(x1 - x0)}" height="${svg.px(f.bottom - f.top)}" fill="${color}"/>`,
    );
  });
  parts.push(svg.xAxis(f, svg.ticks(frontier.t[0]!, tEnd), style, "t"));
  parts.push(svg.yAxis(f, svg.ticks(lamMin, lamMax + pad), style, "frontier"));
  parts.push(
    svg.polyline(
      frontier.t,
      frontier.lambda,
      f,
      `fill="none" stroke="${style.line_color}" stroke-width="${style.line_width}"`,
    ),
  );
  for (const jump of jumps) {
    // the recorded value at the jump time is pre-jump; the glyph spans
    // the discontinuity itself
    const idx = frontier.t.findIndex((t) => t >= jump.t);
    const base = frontier.lambda[idx >= 0 ? idx : 0]!;
    const x = svg.px(f.x.map(jump.t));
    const y0 = f.y.map(base);
    const y1 = f.y.map(base + jump.size);
    parts.push(
      [
        `<g class="jump-glyph">`,
        `<line x1="${x}" y1="${svg.px(y0)}" x2="${x}" y2="${svg.px(y1)}" stroke="${style.jump_color}" stroke-width="${style.line_width}" stroke-dasharray="2 2"/>`,
        `<circle cx="${x}" cy="${svg.px(y1)}" r="${style.jump_glyph_radius}" fill="${style.jump_color}"/>`,
        `</g>`,
      ].join(""),
    );
  }

  writeFileSync(outSvg, svg.document(style, "Frontier path", parts.join("\n")));
  writeSidecar(outSvg, {
    kind: "frontier",
    series: { t: frontier.t, lambda: frontier.lambda },
    jumps: jumps.map((j) => [j.t, j.size]),
    bands: bands.map((b) => ({ t0: b.t0, t1: b.t1, regime: b.regime })),
  });
}

function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: plot_frontier <run_dir> <out.svg>");
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
