/** Minimal CSV reading for the simulator's numeric output files. */

export class EmptyCsvError extends Error {
  constructor(path: string) {
    super(`CSV has no data rows: ${path}`);
    this.name = "EmptyCsvError";
  }
}

export class MissingColumnError extends Error {
  constructor(column: string, path: string) {
    super(`column "${column}" not found in ${path}`);
    this.name = "MissingColumnError";
  }
}

export interface CsvTable {
  path: string;
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, path = "<string>"): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new EmptyCsvError(path);
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  if (rows.length === 0) throw new EmptyCsvError(path);
  return { path, header, rows };
}

/** Numeric column by name; throws MissingColumnError when absent. */
export function numericColumn(table: CsvTable, column: string): number[] {
  const idx = table.header.indexOf(column);
  if (idx < 0) throw new MissingColumnError(column, table.path);
  return table.rows.map((row) => Number(row[idx]));
}

/** String column by name (labels, tags). */
export function stringColumn(table: CsvTable, column: string): string[] {
  const idx = table.header.indexOf(column);
  if (idx < 0) throw new MissingColumnError(column, table.path);
  return table.rows.map((row) => row[idx]);
}

export function requireColumns(table: CsvTable, columns: string[]): void {
  for (const column of columns) {
    if (!table.header.includes(column)) {
      throw new MissingColumnError(column, table.path);
    }
  }
}
