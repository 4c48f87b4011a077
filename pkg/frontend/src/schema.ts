/**
 * Column schemas and row types for the five campaign CSV outputs.
 *
 * The simulator writes one row per (trial, scheme, user) for allocation and
 * rate tables, one row per (scheme, subcarrier) for the gain table, and one
 * row per (scheme, sorted sample) for the two CDF tables.  Every file has a
 * header row, '.' decimal separator, and full round-trip float precision.
 */

export type ColumnKind = "int" | "float" | "string";

export interface ColumnSpec {
  name: string;
  kind: ColumnKind;
}

export interface TableSpec {
  /** File name inside the campaign output directory. */
  file: string;
  columns: ColumnSpec[];
}

export interface AllocationRow {
  trial: number;
  scheme: string;
  user: number;
  alpha_tilde: number;
  s_count: number;
  min_objective: number;
}

export interface RateRow {
  trial: number;
  scheme: string;
  user: number;
  rate: number;
  min_rate: number;
  bound_lemma1: number;
  bound_finite: number;
}

export interface GainRow {
  scheme: string;
  k: number;
  f_hz: number;
  raw_gain_mean: number;
  normalized_gain_mean: number;
}

export interface CdfRow {
  scheme: string;
  value: number;
  prob: number;
}

/** Rows of any campaign table, grouped by scheme in file order. */
export type SchemeTable<R> = Record<string, R[]>;

export interface ResultTables {
  allocation: SchemeTable<AllocationRow>;
  rates: SchemeTable<RateRow>;
  gain: SchemeTable<GainRow>;
  cdfMinRate: SchemeTable<CdfRow>;
  cdfMinObjective: SchemeTable<CdfRow>;
  /** Scheme identifiers in first-seen order across all tables. */
  schemes: string[];
}

export const ALLOCATION_SPEC: TableSpec = {
  file: "allocation.csv",
  columns: [
    { name: "trial", kind: "int" },
    { name: "scheme", kind: "string" },
    { name: "user", kind: "int" },
    { name: "alpha_tilde", kind: "float" },
    { name: "s_count", kind: "int" },
    { name: "min_objective", kind: "float" },
  ],
};

export const RATES_SPEC: TableSpec = {
  file: "rates.csv",
  columns: [
    { name: "trial", kind: "int" },
    { name: "scheme", kind: "string" },
    { name: "user", kind: "int" },
    { name: "rate", kind: "float" },
    { name: "min_rate", kind: "float" },
    { name: "bound_lemma1", kind: "float" },
    { name: "bound_finite", kind: "float" },
  ],
};

export const GAIN_SPEC: TableSpec = {
  file: "gain.csv",
  columns: [
    { name: "scheme", kind: "string" },
    { name: "k", kind: "int" },
    { name: "f_hz", kind: "float" },
    { name: "raw_gain_mean", kind: "float" },
    { name: "normalized_gain_mean", kind: "float" },
  ],
};

export const CDF_MINRATE_SPEC: TableSpec = {
  file: "cdf_minrate.csv",
  columns: [
    { name: "scheme", kind: "string" },
    { name: "value", kind: "float" },
    { name: "prob", kind: "float" },
  ],
};

export const CDF_MINOBJ_SPEC: TableSpec = {
  file: "cdf_minobj.csv",
  columns: [
    { name: "scheme", kind: "string" },
    { name: "value", kind: "float" },
    { name: "prob", kind: "float" },
  ],
};

export const ALL_SPECS: TableSpec[] = [
  ALLOCATION_SPEC,
  RATES_SPEC,
  GAIN_SPEC,
  CDF_MINRATE_SPEC,
  CDF_MINOBJ_SPEC,
];
