#!/usr/bin/env node
/**
 * plot --csv <file> --panel <name> --out <img> [--group-by noise_p|n_qubits]
 *      [--reference [group=]value ...]
 *
 * Consumes the run CSV schema and writes one SVG per invocation.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseRunCsv, SchemaError } from "./csv.js";
import { buildPanelData, renderPanel, type Panel, type PlotSpec } from "./panels.js";
import type { GroupBy } from "./stats.js";

interface Args {
  csv: string;
  panel: Panel;
  out: string;
  groupBy: GroupBy;
  references: Map<string, number>;
}

const PANELS: Panel[] = ["convergence", "abs_error", "mitigation_compare"];
const GROUPS: GroupBy[] = ["noise_p", "n_qubits"];

export function parseArgs(argv: string[]): Args {
  const args: Partial<Args> = { groupBy: "noise_p", references: new Map() };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const value = argv[++i];
    if (value === undefined) throw new Error(`flag ${flag} needs a value`);
    switch (flag) {
      case "--csv":
        args.csv = value;
        break;
      case "--panel":
        if (!PANELS.includes(value as Panel)) {
          throw new Error(`unknown panel '${value}' (expected ${PANELS.join(", ")})`);
        }
        args.panel = value as Panel;
        break;
      case "--out":
        args.out = value;
        break;
      case "--group-by":
        if (!GROUPS.includes(value as GroupBy)) {
          throw new Error(`unknown group '${value}' (expected ${GROUPS.join(", ")})`);
        }
        args.groupBy = value as GroupBy;
        break;
      case "--reference": {
        const eq = value.indexOf("=");
        const key = eq === -1 ? "" : value.slice(0, eq);
        const num = Number(eq === -1 ? value : value.slice(eq + 1));
        if (Number.isNaN(num)) throw new Error(`bad reference '${value}'`);
        args.references!.set(key, num);
        break;
      }
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!args.csv || !args.panel || !args.out) {
    throw new Error("usage: plot --csv <file> --panel <name> --out <img>");
  }
  return args as Args;
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const rows = parseRunCsv(readFileSync(args.csv, "utf-8"));
    const spec: PlotSpec = {
      panel: args.panel,
      groupBy: args.groupBy,
      references: args.references,
    };
    writeFileSync(args.out, renderPanel(buildPanelData(rows, spec)), "utf-8");
    return 0;
  } catch (err) {
    const prefix = err instanceof SchemaError ? "schema error" : "error";
    console.error(`${prefix}: ${err instanceof Error ? err.message : err}`);
    return err instanceof SchemaError ? 3 : 2;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
