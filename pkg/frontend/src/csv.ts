import { readFileSync } from "node:fs";

/** Parsed simulator CSV: optional `# {json}` provenance line, then a
 *  header row and numeric data rows (empty cells stay null). */
export interface CsvTable {
  provenance: Record<string, unknown> | null;
  columns: string[];
  rows: (number | null)[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  let provenance: Record<string, unknown> | null = null;
  let start = 0;
  const first = lines[0];
  if (first !== undefined && first.startsWith("#")) {
    const body = first.replace(/^#\s*/, "");
    try {
      provenance = JSON.parse(body) as Record<string, unknown>;
    } catch {
      provenance = null; // header comment without JSON payload
    }
    start = 1;
  }
  const header = lines[start];
  if (header === undefined) {
    throw new Error("CSV has no header row");
  }
  const columns = header.split(",").map((c) => c.trim());
  const rows: (number | null)[][] = [];
  for (const line of lines.slice(start + 1)) {
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new Error(
        `CSV row has ${cells.length} cells, expected ${columns.length}: ${line}`,
      );
    }
    rows.push(
      cells.map((c) => {
        const t = c.trim();
        if (t === "") return null;
        const v = Number(t);
        if (!Number.isFinite(v)) throw new Error(`non-numeric CSV cell: ${t}`);
        return v;
      }),
    );
  }
  return { provenance, columns, rows };
}

export function loadCsv(path: string): CsvTable {
  return parseCsv(readFileSync(path, "utf8"));
}

/** Column values by name; throws a descriptive error when missing. */
export function column(table: CsvTable, name: string): (number | null)[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(
      `missing column '${name}' (have: ${table.columns.join(", ")})`,
    );
  }
  return table.rows.map((r) => {
    const v = r[idx];
    return v === undefined ? null : v;
  });
}

export function numericColumn(table: CsvTable, name: string): number[] {
  return column(table, name).map((v, i) => {
    if (v === null) throw new Error(`column '${name}' has an empty cell at row ${i}`);
    return v;
  });
}
