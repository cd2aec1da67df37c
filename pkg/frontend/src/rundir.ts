// Readers for the run-directory layout written by the icefront CLI.
// Everything here is read-only; scripts never write into a run dir.

import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import Papa from "papaparse";

export interface Frontier {
  t: number[];
  lambda: number[];
  aliveMass: number[];
}

export interface RegimeRow {
  t: number;
  regime: string;
}

export interface Snapshot {
  t: number;
  x: number[];
  p: number[];
}

export interface Jump {
  t: number;
  size: number;
}

export interface HolderFit {
  t: number;
  window: [number, number];
  exponent: number;
  constant: number;
  r_squared: number;
  points: [number, number][];
}

function parseCsv(path: string): Record<string, string>[] {
  const text = readFileSync(path, "utf-8");
  const out = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (out.errors.length > 0) {
    const first = out.errors[0]!;
    throw new Error(`${path}: ${first.message} (row ${first.row})`);
  }
  return out.data;
}

function column(rows: Record<string, string>[], key: string, path: string): number[] {
  return rows.map((row) => {
    const cell = row[key];
    if (cell === undefined) throw new Error(`${path}: missing column ${key}`);
    return Number(cell);
  });
}

export function readFrontier(dir: string): Frontier {
  const path = join(dir, "frontier.csv");
  const rows = parseCsv(path);
  return {
    t: column(rows, "t", path),
    lambda: column(rows, "lambda", path),
    aliveMass: column(rows, "alive_mass", path),
  };
}

export function readRegimes(dir: string): RegimeRow[] {
  const path = join(dir, "regimes.csv");
  const rows = parseCsv(path);
  return rows.map((row) => ({
    t: Number(row["t"]),
    regime: String(row["regime"] ?? ""),
  }));
}

export function readSnapshots(dir: string): Snapshot[] {
  const names = readdirSync(dir).filter(
    (name) => name.startsWith("snapshot_") && name.endsWith(".csv"),
  );
  const snaps = names.map((name) => {
    const path = join(dir, name);
    const rows = parseCsv(path);
    const t = Number(name.slice("snapshot_".length, -".csv".length));
    return { t, x: column(rows, "x", path), p: column(rows, "p", path) };
  });
  snaps.sort((a, b) => a.t - b.t);
  return snaps;
}

export function readJumps(dir: string): Jump[] {
  const summary = JSON.parse(readFileSync(join(dir, "summary.json"), "utf-8"));
  const jumps: { t: number; size: number }[] = summary.jumps ?? [];
  return jumps.map((j) => ({ t: j.t, size: j.size }));
}

export function readAlpha(dir: string): number {
  const manifest = JSON.parse(readFileSync(join(dir, "manifest.json"), "utf-8"));
  return Number(manifest.config.alpha);
}

export function readHolderFit(path: string): HolderFit | null {
  const fits = JSON.parse(readFileSync(path, "utf-8"));
  return fits.holder ?? null;
}
