/** Median/IQR series rebuilt from raw rows (never read from the summary JSON). */

import type { RunRow } from "./csv.js";

export type GroupBy = "noise_p" | "n_qubits";

export interface BandSeries {
  /** legend label for the group */
  label: string;
  /** sort key so legends come out ordered */
  order: number;
  k: number[];
  median: number[];
  q1: number[];
  q3: number[];
}

export function median(values: number[]): number {
  if (values.length === 0) throw new Error("median of empty list");
  const sorted = [...values].sort((a, b) => a - b);
  const mid = sorted.length / 2;
  return sorted.length % 2 === 1 ? sorted[(sorted.length - 1) / 2] : (sorted[mid - 1] + sorted[mid]) / 2;
}

/** Linear-interpolation quantile, matching numpy's default. */
export function quantile(values: number[], q: number): number {
  if (values.length === 0) throw new Error("quantile of empty list");
  const sorted = [...values].sort((a, b) => a - b);
  const pos = q * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  if (lo === hi) return sorted[lo];
  return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
}

export function groupValue(row: RunRow, groupBy: GroupBy): number {
  return groupBy === "noise_p" ? row.p : row.n;
}

export function groupLabel(value: number, groupBy: GroupBy): string {
  return groupBy === "noise_p" ? `p=${value}` : `n=${value}`;
}

/**
 * Per-sweep median and quartiles over the runs of one group.
 *
 * Runs that stopped early hold their last value, so every sweep index up to
 * the group's longest run has one value per run.
 */
export function bandSeries(
  rows: RunRow[],
  groupBy: GroupBy,
  value: (row: RunRow) => number | null
): BandSeries[] {
  const groups = new Map<number, Map<string, Map<number, number>>>();
  for (const row of rows) {
    const v = value(row);
    if (v === null) continue;
    const g = groupValue(row, groupBy);
    if (!groups.has(g)) groups.set(g, new Map());
    const runs = groups.get(g)!;
    if (!runs.has(row.runId)) runs.set(row.runId, new Map());
    runs.get(row.runId)!.set(row.k, v);
  }
  const out: BandSeries[] = [];
  for (const [g, runs] of [...groups.entries()].sort((a, b) => a[0] - b[0])) {
    const kMax = Math.max(...[...runs.values()].map((m) => Math.max(...m.keys())));
    const ks: number[] = [];
    const med: number[] = [];
    const q1: number[] = [];
    const q3: number[] = [];
    for (let k = 1; k <= kMax; k++) {
      const column: number[] = [];
      for (const perRun of runs.values()) {
        let held: number | undefined;
        for (let kk = k; kk >= 1; kk--) {
          if (perRun.has(kk)) {
            held = perRun.get(kk)!;
            break;
          }
        }
        if (held !== undefined) column.push(held);
      }
      if (column.length === 0) continue;
      ks.push(k);
      med.push(median(column));
      q1.push(quantile(column, 0.25));
      q3.push(quantile(column, 0.75));
    }
    out.push({ label: groupLabel(g, groupBy), order: g, k: ks, median: med, q1, q3 });
  }
  return out;
}
