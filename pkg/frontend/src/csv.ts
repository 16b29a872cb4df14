/** Reader for the run CSV emitted by the experiment CLI. */

export interface RunRow {
  runId: string;
  family: string;
  n: number;
  seed: string;
  initId: number;
  k: number;
  lambda: number;
  gamma: number;
  eG: number;
  /** null when the run carried no mitigated column */
  eGMitigated: number | null;
  p: number;
  d: number;
  shots: number;
  settingsUsed: number;
}

export const REQUIRED_COLUMNS = [
  "run_id",
  "family",
  "n",
  "seed",
  "init_id",
  "k",
  "lambda",
  "gamma",
  "e_g",
  "e_g_mitigated",
  "p",
  "d",
  "shots",
  "settings_used",
] as const;

export class SchemaError extends Error {}

function toNumber(raw: string, column: string, line: number): number {
  const value = Number(raw);
  if (raw === "" || Number.isNaN(value)) {
    throw new SchemaError(`line ${line}: column '${column}' is not numeric: '${raw}'`);
  }
  return value;
}

export function parseRunCsv(text: string): RunRow[] {
  const lines = text.split("\n").filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new SchemaError("empty CSV");
  }
  const header = lines[0].split(",");
  const index = new Map(header.map((name, i) => [name, i]));
  for (const column of REQUIRED_COLUMNS) {
    if (!index.has(column)) {
      throw new SchemaError(`missing column '${column}'`);
    }
  }
  const at = (cells: string[], column: string) => cells[index.get(column)!] ?? "";
  const rows: RunRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new SchemaError(`line ${i + 1}: expected ${header.length} cells, got ${cells.length}`);
    }
    const mitigatedRaw = at(cells, "e_g_mitigated");
    rows.push({
      runId: at(cells, "run_id"),
      family: at(cells, "family"),
      n: toNumber(at(cells, "n"), "n", i + 1),
      seed: at(cells, "seed"),
      initId: toNumber(at(cells, "init_id"), "init_id", i + 1),
      k: toNumber(at(cells, "k"), "k", i + 1),
      lambda: toNumber(at(cells, "lambda"), "lambda", i + 1),
      gamma: toNumber(at(cells, "gamma"), "gamma", i + 1),
      eG: toNumber(at(cells, "e_g"), "e_g", i + 1),
      eGMitigated: mitigatedRaw === "" ? null : toNumber(mitigatedRaw, "e_g_mitigated", i + 1),
      p: toNumber(at(cells, "p"), "p", i + 1),
      d: toNumber(at(cells, "d"), "d", i + 1),
      shots: toNumber(at(cells, "shots"), "shots", i + 1),
      settingsUsed: toNumber(at(cells, "settings_used"), "settings_used", i + 1),
    });
  }
  return rows;
}
