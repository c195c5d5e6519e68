/** CSV ingestion for the documented qudisc output schemas. */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

/** Raised for any contract violation in an input file; the CLI exits 1 on it. */
export class FigureError extends Error {}

export interface Table {
  path: string;
  header: string[];
  rows: string[][];
}

export const CURVE_HEADER = ["n", "p_exact", "p_asymptotic", "helstrom", "excess_risk"];
export const SAMPLE_HEADER = ["theta", "frequency", "stderr", "p_closed_form"];

export function readTable(path: string): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch (cause) {
    throw new FigureError(`cannot read ${path}: ${(cause as Error).message}`);
  }
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0]!;
    throw new FigureError(`${path}: malformed CSV (${first.message})`);
  }
  const [header, ...rows] = parsed.data;
  if (header === undefined) {
    throw new FigureError(`${path}: empty CSV`);
  }
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new FigureError(`${path}: ragged row with ${row.length} fields`);
    }
  }
  if (rows.length === 0) {
    throw new FigureError(`${path}: no data rows`);
  }
  return { path, header, rows };
}

export function requireHeader(table: Table, expected: string[]): void {
  if (
    table.header.length !== expected.length ||
    expected.some((name, i) => table.header[i] !== name)
  ) {
    throw new FigureError(
      `${table.path}: header [${table.header.join(",")}] does not match ` +
        `the documented [${expected.join(",")}]`,
    );
  }
}

/** Numeric column; empty cells (omitted values) become null. */
export function column(table: Table, name: string): (number | null)[] {
  const index = table.header.indexOf(name);
  if (index < 0) {
    throw new FigureError(`${table.path}: no column ${name}`);
  }
  return table.rows.map((row, line) => {
    const cell = row[index]!;
    if (cell === "") {
      return null;
    }
    const value = Number(cell);
    if (!Number.isFinite(value)) {
      throw new FigureError(`${table.path}: row ${line + 2}: bad number ${cell}`);
    }
    return value;
  });
}

export function numbers(table: Table, name: string): number[] {
  return column(table, name).map((value, line) => {
    if (value === null) {
      throw new FigureError(`${table.path}: row ${line + 2}: column ${name} is empty`);
    }
    return value;
  });
}
