/**
 * CSV loading and validation for campaign result directories.
 *
 * Values never contain commas, quotes, or escapes (numbers and scheme
 * identifiers only), so a plain split parser is sufficient.  Validation is
 * strict about required columns and cell types — errors name the offending
 * file and column — while unknown extra columns are accepted with a warning
 * for forward compatibility.
 */

import { existsSync, readFileSync } from "fs";
import path from "path";

import {
  ALLOCATION_SPEC,
  CDF_MINOBJ_SPEC,
  CDF_MINRATE_SPEC,
  GAIN_SPEC,
  RATES_SPEC,
  ResultTables,
  SchemeTable,
  TableSpec,
} from "./schema";

/** Raised for missing files, missing/renamed columns, and bad cell values. */
export class LoadError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "LoadError";
  }
}

function parseCell(
  raw: string,
  spec: TableSpec,
  column: string,
  kind: "int" | "float" | "string",
  rowNum: number
): number | string {
  if (kind === "string") return raw;
  const v = Number(raw);
  if (!Number.isFinite(v) && raw.trim().toLowerCase() !== "inf") {
    throw new LoadError(
      `${spec.file} row ${rowNum}: column "${column}" is not a number: "${raw}"`
    );
  }
  if (kind === "int" && !Number.isInteger(v)) {
    throw new LoadError(
      `${spec.file} row ${rowNum}: column "${column}" is not an integer: "${raw}"`
    );
  }
  return v;
}

/**
 * Parse one CSV text against its table spec.  Rows come back as plain
 * objects with the spec's column names as keys.
 */
export function parseTable<R extends Record<string, number | string>>(
  text: string,
  spec: TableSpec
): R[] {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length === 0 || lines[0].trim() === "") {
    throw new LoadError(`${spec.file}: empty file (no header row)`);
  }
  const header = lines[0].split(",").map((h) => h.trim());

  const position = new Map<string, number>();
  header.forEach((name, i) => position.set(name, i));

  for (const col of spec.columns) {
    if (!position.has(col.name)) {
      throw new LoadError(`${spec.file}: missing required column "${col.name}"`);
    }
  }
  for (const name of header) {
    if (!spec.columns.some((c) => c.name === name)) {
      console.warn(`${spec.file}: ignoring unknown column "${name}"`);
    }
  }

  const rows: R[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].trim() === "") continue;
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new LoadError(
        `${spec.file} row ${i}: expected ${header.length} cells, got ${cells.length}`
      );
    }
    const row: Record<string, number | string> = {};
    for (const col of spec.columns) {
      const raw = cells[position.get(col.name)!];
      row[col.name] = parseCell(raw, spec, col.name, col.kind, i);
    }
    rows.push(row as R);
  }
  return rows;
}

function groupByScheme<R extends { scheme: string }>(rows: R[]): SchemeTable<R> {
  const out: SchemeTable<R> = {};
  for (const row of rows) {
    (out[row.scheme] ??= []).push(row);
  }
  return out;
}

function loadTable<R extends { scheme: string }>(
  inputDir: string,
  spec: TableSpec
): SchemeTable<R> {
  const file = path.join(inputDir, spec.file);
  if (!existsSync(file)) {
    throw new LoadError(`missing input file: ${spec.file} (looked in ${inputDir})`);
  }
  const rows = parseTable<Record<string, number | string>>(
    readFileSync(file, "utf-8"),
    spec
  );
  return groupByScheme(rows as unknown as R[]);
}

/**
 * Load and validate all five campaign tables from a result directory,
 * grouped by scheme.
 */
export function loadResults(inputDir: string): ResultTables {
  const allocation = loadTable<import("./schema").AllocationRow>(inputDir, ALLOCATION_SPEC);
  const rates = loadTable<import("./schema").RateRow>(inputDir, RATES_SPEC);
  const gain = loadTable<import("./schema").GainRow>(inputDir, GAIN_SPEC);
  const cdfMinRate = loadTable<import("./schema").CdfRow>(inputDir, CDF_MINRATE_SPEC);
  const cdfMinObjective = loadTable<import("./schema").CdfRow>(inputDir, CDF_MINOBJ_SPEC);

  const schemes: string[] = [];
  for (const table of [allocation, rates, gain, cdfMinRate, cdfMinObjective]) {
    for (const scheme of Object.keys(table)) {
      if (!schemes.includes(scheme)) schemes.push(scheme);
    }
  }
  return { allocation, rates, gain, cdfMinRate, cdfMinObjective, schemes };
}
