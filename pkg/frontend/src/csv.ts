/**
 * CSV reader for paleylab output files.
 *
 * Files start with optional `#` provenance/comment lines, then a header row,
 * then data rows.  Required columns are checked by name; unknown columns are
 * kept (and warned about once) so schema growth stays non-breaking.
 */

export class SchemaMismatch extends Error {}
export class EmptyInput extends Error {}

export interface Table {
  columns: string[];
  rows: Record<string, string>[];
}

export function parseCsv(text: string): Table {
  const lines = text
    .split(/\r?\n/)
    .filter((ln) => ln.length > 0 && !ln.startsWith("#"));
  if (lines.length === 0) {
    throw new EmptyInput("no header row found");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  const rows = lines.slice(1).map((ln, i) => {
    const cells = ln.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaMismatch(
        `row ${i + 1} has ${cells.length} cells, header has ${columns.length}`,
      );
    }
    const row: Record<string, string> = {};
    columns.forEach((c, j) => (row[c] = cells[j].trim()));
    return row;
  });
  return { columns, rows };
}

export function requireColumns(table: Table, required: string[], label: string): void {
  for (const col of required) {
    if (!table.columns.includes(col)) {
      throw new SchemaMismatch(`${label}: missing column '${col}' (have: ${table.columns.join(",")})`);
    }
  }
  const extra = table.columns.filter((c) => !required.includes(c));
  if (extra.length > 0) {
    console.warn(`${label}: ignoring unknown columns ${extra.join(",")}`);
  }
  if (table.rows.length === 0) {
    throw new EmptyInput(`${label}: header present but no data rows`);
  }
}

export function num(row: Record<string, string>, col: string): number {
  const v = Number(row[col]);
  if (!Number.isFinite(v)) {
    throw new SchemaMismatch(`column '${col}' has non-numeric value '${row[col]}'`);
  }
  return v;
}
