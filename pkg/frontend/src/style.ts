import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export interface Style {
  width: number;
  height: number;
  margin: Margin;
  font_family: string;
  font_size: number;
  title_size: number;
  axis_color: string;
  grid_color: string;
  line_color: string;
  line_width: number;
  jump_color: string;
  jump_glyph_radius: number;
  threshold_color: string;
  point_color: string;
  point_radius: number;
  fit_color: string;
  fit_dash: string;
  panel_gap: number;
  threshold_probe_fraction: number;
  regime_band_colors: Record<string, string>;
}

// style.json sits next to package.json, one level above dist/ and src/.
export function loadStyle(): Style {
  const here = dirname(fileURLToPath(import.meta.url));
  return JSON.parse(readFileSync(join(here, "..", "style.json"), "utf-8"));
}
