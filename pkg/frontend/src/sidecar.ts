// Every figure writes a sidecar JSON of exactly the series it drew.
// Image bytes are fragile across renderers; the sidecar is the stable
// surface that tests diff against.

import { writeFileSync } from "node:fs";

export function sidecarPath(outImage: string): string {
  return outImage.replace(/\.svg$/, "") + ".series.json";
}

export function writeSidecar(outImage: string, payload: unknown): string {
  const path = sidecarPath(outImage);
  writeFileSync(path, JSON.stringify(payload, null, 2) + "\n");
  return path;
}
