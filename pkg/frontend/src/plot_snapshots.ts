// Density snapshot small multiples with the 1/alpha threshold line.
//
//   node dist/plot_snapshots.js <run_dir> <out.svg>
//
// Panels share both scales so profiles are comparable across times.
// The sidecar records the clipped series per panel plus a crossing flag:
// whether the profile exceeds 1/alpha close to the wall (within the
// first threshold_probe_fraction of the plotted range), which is the
// visual cue that the frontier is about to jump.  An alt_text sentence
// summarizes the figure for non-visual consumers.

import { readSnapshots, readAlpha } from "./rundir.js";
import { loadStyle } from "./style.js";
import { writeSidecar } from "./sidecar.js";
import * as svg from "./svg.js";
import { writeFileSync } from "node:fs";

export function render(runDir: string, outSvg: string): void {
  const style = loadStyle();
  const snaps = readSnapshots(runDir);
  if (snaps.length === 0) throw new Error(`no snapshots in ${runDir}`);
  const alpha = readAlpha(runDir);
  const threshold = alpha > 0 ? 1.0 / alpha : null;

  // clip panels to where anything is nonzero, so a narrow initial
  // condition on a wide grid still fills the frame
  let xCut = 0;
  let pMax = 0;
  for (const s of snaps) {
    for (let j = 0; j < s.x.length; j++) {
      const p = s.p[j]!;
      if (p > 0) {
        xCut = Math.max(xCut, s.x[j]!);
        pMax = Math.max(pMax, p);
      }
    }
  }
  const xHi = xCut > 0 ? Math.min(snaps[0]!.x[snaps[0]!.x.length - 1]!, 1.15 * xCut) : 1.0;
  const yHi = 1.08 * Math.max(pMax, threshold ?? 0, 1e-12);

  const n = snaps.length;
  const plotLeft = style.margin.left;
  const plotRight = style.width - style.margin.right;
  const panelWidth = (plotRight - plotLeft - (n - 1) * style.panel_gap) / n;

  const probeHi = style.threshold_probe_fraction * xHi;
  const parts: string[] = [];
  const panels: { t: number; x: number[]; p: number[]; crossing: boolean }[] = [];

  snaps.forEach((snap, i) => {
    const x0 = plotLeft + i * (panelWidth + style.panel_gap);
    const f = svg.frame(style, [0, xHi], [0, yHi], {
      x0,
      x1: x0 + panelWidth,
      y0: style.margin.top,
      y1: style.height - style.margin.bottom,
    });

    const keep = snap.x.map((x) => x <= xHi);
    const xs = snap.x.filter((_, j) => keep[j]);
    const ps = snap.p.filter((_, j) => keep[j]);
    const crossing =
      threshold !== null && xs.some((x, j) => x <= probeHi && ps[j]! > threshold);
    panels.push({ t: snap.t, x: xs, p: ps, crossing });

    const panelParts: string[] = [];
    panelParts.push(svg.xAxis(f, svg.ticks(0, xHi, 3), style, i === Math.floor(n / 2) ? "x" : ""));
    if (i === 0) {
      panelParts.push(svg.yAxis(f, svg.ticks(0, yHi, 4), style, "density"));
    }
    if (threshold !== null) {
      const y = svg.px(f.y.map(threshold));
      panelParts.push(
        `<line x1="${svg.px(f.left)}" y1="${y}" x2="${svg.px(f.right)}" y2="${y}" stroke="${style.threshold_color}" stroke-width="1" stroke-dasharray="4 3"/>`,
      );
      if (i === 0) {
        panelParts.push(
          `<text x="${svg.px(f.left + 4)}" y="${svg.px(f.y.map(threshold) - 5)}" font-size="${style.font_size - 2}" fill="${style.threshold_color}">1/alpha</text>`,
        );
      }
    }
    panelParts.push(
      svg.polyline(xs, ps, f, `fill="none" stroke="${style.line_color}" stroke-width="${style.line_width}"`),
    );
    panelParts.push(
      `<text x="${svg.px((f.left + f.right) / 2)}" y="${svg.px(f.top - 6)}" text-anchor="middle" font-size="${style.font_size - 1}">t = ${svg.esc(svg.tickLabel(snap.t))}</text>`,
    );
    parts.push(`<g class="panel">\n${panelParts.join("\n")}\n</g>`);
  });

  const crossed = panels.filter((p) => p.crossing).map((p) => svg.tickLabel(p.t));
  const altText =
    `Density snapshots at t = ${panels.map((p) => svg.tickLabel(p.t)).join(", ")}.` +
    (threshold !== null
      ? ` Dashed line marks 1/alpha = ${svg.tickLabel(threshold)}.` +
        (crossed.length > 0
          ? ` The density exceeds the threshold near the wall at t = ${crossed.join(", ")}.`
          : ` The density stays below the threshold near the wall.`)
      : ` No feedback (alpha = 0), so no threshold applies.`);

  writeFileSync(outSvg, svg.document(style, "Density snapshots", parts.join("\n")));
  writeSidecar(outSvg, {
    kind: "snapshots",
    alpha,
    threshold,
    panels,
    alt_text: altText,
  });
}

function main(argv: string[]): number {
  if (argv.length !== 2) {
    console.error("usage: plot_snapshots <run_dir> <out.svg>");
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
