import Papa from "papaparse";

/** Parsed sweep table: header plus numeric cells (empty cells are null). */
export interface SweepTable {
  columns: string[];
  rows: Record<string, number | null>[];
  source: string;
}

export class CsvError extends Error {}

/** Parse sweep CSV text; `source` names the file in error messages. */
export function parseSweepCsv(text: string, source: string): SweepTable {
  const parsed = Papa.parse<string[]>(text.trim(), { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    throw new CsvError(`cannot parse ${source}: ${parsed.errors[0].message}`);
  }
  const grid = parsed.data;
  if (grid.length === 0) {
    throw new CsvError(`empty CSV: ${source}`);
  }
  const columns = grid[0].map((c) => c.trim());
  if (grid.length === 1) {
    throw new CsvError(`empty CSV (header only): ${source}`);
  }
  const rows: Record<string, number | null>[] = [];
  for (let i = 1; i < grid.length; i++) {
    const cells = grid[i];
    const row: Record<string, number | null> = {};
    columns.forEach((name, j) => {
      const cell = (cells[j] ?? "").trim();
      if (cell === "") {
        row[name] = null;
        return;
      }
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new CsvError(`${source} line ${i + 1}: non-numeric cell "${cell}" in column "${name}"`);
      }
      row[name] = value;
    });
    rows.push(row);
  }
  return { columns, rows, source };
}

/** Ensure every named column exists in the header, else fail naming it. */
export function requireColumns(table: SweepTable, names: readonly string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new CsvError(`missing required column "${name}" in ${table.source}`);
    }
  }
}
