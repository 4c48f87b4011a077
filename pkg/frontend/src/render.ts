/**
 * Figure assembly: turns loaded campaign tables into the three batch
 * figures — CDF of the minimum subarray objective, normalized average
 * subarray gain versus subcarrier, and CDF of the minimum user rate.
 */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";

import { CdfRow, GainRow, ResultTables, SchemeTable } from "./schema";
import { buildChart, Series } from "./plot";
import { svgToPng } from "./png";

export type Format = "svg" | "png";

export class EmptyTableError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyTableError";
  }
}

/** Stable scheme colors; unknown schemes cycle through a fallback palette. */
const SCHEME_COLORS: Record<string, string> = {
  proposed_alg1: "#4361ee",
  uniform_alg1: "#e63946",
  proposed_iasp: "#2d6a4f",
};
const FALLBACK_COLORS = ["#9d4edd", "#f77f00", "#457b9d", "#606c38"];

function schemeColor(scheme: string, index: number): string {
  return SCHEME_COLORS[scheme] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function schemeDash(scheme: string): string | undefined {
  // The ideal-subprecoder reference reads better dashed over the solver curve.
  return scheme.endsWith("_iasp") ? "5,3" : undefined;
}

export type CdfMetric = "min_rate" | "min_objective";

const CDF_META: Record<CdfMetric, { title: string; xLabel: string }> = {
  min_rate: {
    title: "CDF of minimum user rate",
    xLabel: "minimum user rate (bit/s/Hz)",
  },
  min_objective: {
    title: "CDF of minimum subarray objective",
    xLabel: "minimum weighted-gain objective",
  },
};

/**
 * Render an empirical CDF with one right-continuous step curve per scheme.
 * Rows per scheme must describe a CDF: after sorting by value, cumulative
 * probabilities are non-decreasing.
 */
export function renderCdf(table: SchemeTable<CdfRow>, metric: CdfMetric): string {
  const schemes = Object.keys(table).filter((s) => table[s].length > 0);
  if (schemes.length === 0) {
    throw new EmptyTableError(`cdf table for ${metric} has no rows`);
  }
  const series: Series[] = schemes.map((scheme, i) => {
    const rows = [...table[scheme]].sort((a, b) => a.value - b.value);
    for (let j = 1; j < rows.length; j++) {
      if (rows[j].prob < rows[j - 1].prob) {
        throw new Error(
          `cdf table for ${metric}, scheme ${scheme}: prob decreases at value ${rows[j].value}`
        );
      }
    }
    return {
      points: rows.map((r): [number, number] => [r.value, r.prob]),
      color: schemeColor(scheme, i),
      label: scheme,
      dash: schemeDash(scheme),
      step: true,
      id: scheme,
    };
  });
  const trials = Math.max(...schemes.map((s) => table[s].length));
  return buildChart({
    title: CDF_META[metric].title,
    subtitle: `${schemes.length} scheme(s) · ${trials} trial(s)`,
    xLabel: CDF_META[metric].xLabel,
    yLabel: "empirical CDF",
    yMin: 0,
    yMax: 1.02,
    series,
    legend: "tl",
  });
}

/**
 * Render normalized average subarray gain versus subcarrier index, one
 * polyline per scheme.  The ideal-subprecoder curve is flat at 1.0 by
 * construction; solver curves sit at or below it.
 */
export function renderGain(table: SchemeTable<GainRow>): string {
  const schemes = Object.keys(table).filter((s) => table[s].length > 0);
  if (schemes.length === 0) {
    throw new EmptyTableError("gain table has no rows");
  }
  const series: Series[] = schemes.map((scheme, i) => {
    const rows = [...table[scheme]].sort((a, b) => a.k - b.k);
    return {
      points: rows.map((r): [number, number] => [r.k, r.normalized_gain_mean]),
      color: schemeColor(scheme, i),
      label: scheme,
      dash: schemeDash(scheme),
      id: scheme,
    };
  });
  const points = Math.max(...schemes.map((s) => table[s].length));
  return buildChart({
    title: "Average subarray gain vs. subcarrier",
    subtitle: `${schemes.length} scheme(s) · ${points} subcarriers`,
    xLabel: "subcarrier index",
    yLabel: "normalized average gain",
    yMin: 0,
    yMax: 1.05,
    series,
    legend: "br",
  });
}

export interface FigureOutput {
  name: string;
  svg: string;
}

/** Build all three figures from loaded tables (no file I/O). */
export function buildFigures(tables: ResultTables): FigureOutput[] {
  return [
    { name: "cdf_min_objective", svg: renderCdf(tables.cdfMinObjective, "min_objective") },
    { name: "gain_vs_subcarrier", svg: renderGain(tables.gain) },
    { name: "cdf_min_rate", svg: renderCdf(tables.cdfMinRate, "min_rate") },
  ];
}

/**
 * Render every figure to `outDir` in the requested formats.  Returns the
 * list of files written, in a deterministic order.
 */
export function renderAll(
  tables: ResultTables,
  outDir: string,
  formats: Format[]
): string[] {
  mkdirSync(outDir, { recursive: true });
  const written: string[] = [];
  for (const fig of buildFigures(tables)) {
    if (formats.includes("svg")) {
      const file = path.join(outDir, `${fig.name}.svg`);
      writeFileSync(file, fig.svg);
      written.push(file);
    }
    if (formats.includes("png")) {
      const file = path.join(outDir, `${fig.name}.png`);
      writeFileSync(file, svgToPng(fig.svg));
      written.push(file);
    }
  }
  return written;
}
