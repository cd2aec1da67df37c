// End-to-end tests for the plot scripts (acceptance gate B1 plus the
// documented edge cases).  Scripts run as real child processes against
// the checked-in fixture run dirs; sidecars must match the frozen files
// byte for byte.  Regenerate fixtures with tests/fixtures/regen.sh.

import { describe, expect, test } from "vitest";
import { execFileSync } from "node:child_process";
import {
  copyFileSync,
  mkdtempSync,
  readFileSync,
  writeFileSync,
} from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

const here = dirname(fileURLToPath(import.meta.url));
const root = join(here, "..");
const fixtures = join(here, "fixtures");
const runJump = join(fixtures, "run_jump");
const runCtrl = join(fixtures, "run_ctrl");

function run(script: string, args: string[]): { status: number; stderr: string } {
  try {
    execFileSync("node", [join(root, "dist", script), ...args], {
      encoding: "utf-8",
    });
    return { status: 0, stderr: "" };
  } catch (err) {
    const e = err as { status?: number; stderr?: string };
    return { status: e.status ?? 1, stderr: String(e.stderr ?? "") };
  }
}

function tmp(): string {
  return mkdtempSync(join(tmpdir(), "icefront-plots-"));
}

function expectBytesEqual(actualPath: string, expectedPath: string): void {
  const actual = readFileSync(actualPath);
  const expected = readFileSync(expectedPath);
  expect(actual.toString("utf-8")).toBe(expected.toString("utf-8"));
  expect(actual.equals(expected)).toBe(true);
}

describe("B1: sidecars match frozen fixtures", () => {
  test("plot_frontier on the jump run", () => {
    const out = join(tmp(), "frontier.svg");
    expect(run("plot_frontier.js", [runJump, out]).status).toBe(0);
    expectBytesEqual(
      join(dirname(out), "frontier.series.json"),
      join(fixtures, "expected", "frontier_jump.series.json"),
    );
  });

  test("plot_snapshots on the jump run", () => {
    const out = join(tmp(), "snapshots.svg");
    expect(run("plot_snapshots.js", [runJump, out]).status).toBe(0);
    expectBytesEqual(
      join(dirname(out), "snapshots.series.json"),
      join(fixtures, "expected", "snapshots_jump.series.json"),
    );
  });

  test("plot_holder on the control fit", () => {
    const out = join(tmp(), "holder.svg");
    expect(run("plot_holder.js", [join(runCtrl, "fits.json"), out]).status).toBe(0);
    expectBytesEqual(
      join(dirname(out), "holder.series.json"),
      join(fixtures, "expected", "holder_ctrl.series.json"),
    );
  });
});

describe("plot_frontier", () => {
  test("one detected jump renders exactly one glyph", () => {
    const out = join(tmp(), "f.svg");
    run("plot_frontier.js", [runJump, out]);
    const glyphs = readFileSync(out, "utf-8").match(/class="jump-glyph"/g) ?? [];
    expect(glyphs.length).toBe(1);
  });

  test("header-only regimes file gives a plain curve", () => {
    const dir = tmp();
    for (const name of ["frontier.csv", "summary.json", "manifest.json"]) {
      copyFileSync(join(runJump, name), join(dir, name));
    }
    writeFileSync(join(dir, "regimes.csv"), "t,regime,rho0,slope_ratio\n");
    const out = join(dir, "f.svg");
    expect(run("plot_frontier.js", [dir, out]).status).toBe(0);
    expect(readFileSync(out, "utf-8")).not.toContain("regime-band");
    const sidecar = JSON.parse(readFileSync(join(dir, "f.series.json"), "utf-8"));
    expect(sidecar.bands).toEqual([]);
  });

  test("missing run dir exits nonzero", () => {
    const r = run("plot_frontier.js", [join(tmp(), "nope"), join(tmp(), "f.svg")]);
    expect(r.status).not.toBe(0);
  });

  test("output is deterministic across runs", () => {
    const a = join(tmp(), "f.svg");
    const b = join(tmp(), "f.svg");
    run("plot_frontier.js", [runJump, a]);
    run("plot_frontier.js", [runJump, b]);
    expect(readFileSync(a).equals(readFileSync(b))).toBe(true);
    expect(
      readFileSync(join(dirname(a), "f.series.json")).equals(
        readFileSync(join(dirname(b), "f.series.json")),
      ),
    ).toBe(true);
  });
});

describe("plot_snapshots", () => {
  test("three snapshots give three panels", () => {
    const out = join(tmp(), "s.svg");
    run("plot_snapshots.js", [runJump, out]);
    const panels = readFileSync(out, "utf-8").match(/class="panel"/g) ?? [];
    expect(panels.length).toBe(3);
  });

  test("threshold crossing near the wall is flagged in the sidecar", () => {
    const dir = tmp();
    run("plot_snapshots.js", [runJump, join(dir, "s.svg")]);
    const sidecar = JSON.parse(readFileSync(join(dir, "s.series.json"), "utf-8"));
    expect(sidecar.panels.map((p: { crossing: boolean }) => p.crossing)).toEqual([
      true,
      false,
      false,
    ]);
    expect(sidecar.alt_text).toContain("exceeds the threshold");
  });

  test("subcritical control never flags a crossing", () => {
    const dir = tmp();
    run("plot_snapshots.js", [runCtrl, join(dir, "s.svg")]);
    const sidecar = JSON.parse(readFileSync(join(dir, "s.series.json"), "utf-8"));
    for (const panel of sidecar.panels) {
      expect(panel.crossing).toBe(false);
    }
    expect(sidecar.alt_text).toContain("stays below the threshold");
  });

  test("a run dir without snapshots exits nonzero", () => {
    const dir = tmp();
    copyFileSync(join(runJump, "manifest.json"), join(dir, "manifest.json"));
    expect(run("plot_snapshots.js", [dir, join(dir, "s.svg")]).status).not.toBe(0);
  });
});

describe("plot_holder", () => {
  const syntheticFit = (r2: number) => ({
    holder: {
      t: 0,
      window: [1e-4, 6.4e-3],
      exponent: 0.5,
      constant: 0.9,
      r_squared: r2,
      points: [
        [1e-4, 0.009],
        [2e-4, 0.0127],
        [4e-4, 0.018],
        [8e-4, 0.0255],
        [1.6e-3, 0.036],
        [3.2e-3, 0.0509],
        [6.4e-3, 0.072],
      ],
    },
  });

  test("exponent 0.5 is annotated as 0.50 with a solid line", () => {
    const dir = tmp();
    const fits = join(dir, "fits.json");
    writeFileSync(fits, JSON.stringify(syntheticFit(0.99)));
    const out = join(dir, "h.svg");
    expect(run("plot_holder.js", [fits, out]).status).toBe(0);
    const body = readFileSync(out, "utf-8");
    expect(body).toContain("exponent 0.50");
    expect(body.match(/class="fit-line"[^>]*stroke-dasharray/)).toBeNull();
    const sidecar = JSON.parse(readFileSync(join(dir, "h.series.json"), "utf-8"));
    expect(sidecar.dashed).toBe(false);
  });

  test("a poor fit draws the line dashed", () => {
    const dir = tmp();
    const fits = join(dir, "fits.json");
    writeFileSync(fits, JSON.stringify(syntheticFit(0.85)));
    const out = join(dir, "h.svg");
    expect(run("plot_holder.js", [fits, out]).status).toBe(0);
    expect(readFileSync(out, "utf-8")).toMatch(/class="fit-line"[^>]*stroke-dasharray/);
    const sidecar = JSON.parse(readFileSync(join(dir, "h.series.json"), "utf-8"));
    expect(sidecar.dashed).toBe(true);
  });

  test("malformed fits JSON exits nonzero", () => {
    const dir = tmp();
    const fits = join(dir, "fits.json");
    writeFileSync(fits, "{not json");
    expect(run("plot_holder.js", [fits, join(dir, "h.svg")]).status).not.toBe(0);
  });

  test("a null fit exits nonzero", () => {
    const dir = tmp();
    const fits = join(dir, "fits.json");
    writeFileSync(fits, JSON.stringify({ holder: null }));
    expect(run("plot_holder.js", [fits, join(dir, "h.svg")]).status).not.toBe(0);
  });
});
