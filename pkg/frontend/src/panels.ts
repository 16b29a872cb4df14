/** The three figure layouts: convergence bands, log-scale error, mitigation. */

import type { RunRow } from "./csv.js";
import { bandSeries, median, type BandSeries, type GroupBy } from "./stats.js";
import {
  DEFAULT_FRAME,
  PALETTE,
  SvgScene,
  linearScale,
  logScale,
  ticksLinear,
  ticksLog,
  type Scale,
} from "./svg.js";

export type Panel = "convergence" | "abs_error" | "mitigation_compare";

export interface PlotSpec {
  panel: Panel;
  groupBy: GroupBy;
  /** dotted reference per group label ("" keys the shared default) */
  references: Map<string, number>;
}

export interface PanelData {
  title: string;
  yLabel: string;
  logY: boolean;
  series: { band: BandSeries; color: string; dashed: boolean; legend: string }[];
  references: { value: number; label: string }[];
}

const LOG_FLOOR = 1e-6;

function refFor(spec: PlotSpec, label: string): number | undefined {
  return spec.references.get(label) ?? spec.references.get("");
}

export function buildPanelData(rows: RunRow[], spec: PlotSpec): PanelData {
  if (rows.length === 0) throw new Error("no data rows");
  if (spec.panel === "convergence") {
    const bands = bandSeries(rows, spec.groupBy, (r) => r.eG);
    return {
      title: "Convergence of the entanglement estimate",
      yLabel: "E_G",
      logY: false,
      series: bands.map((band, i) => ({
        band,
        color: PALETTE[i % PALETTE.length],
        dashed: false,
        legend: band.label,
      })),
      references: dedupeRefs(bands.map((b) => refFor(spec, b.label))),
    };
  }
  if (spec.panel === "abs_error") {
    const bands = bandSeries(rows, spec.groupBy, (r) => r.eG);
    const series = bands.map((band, i) => {
      const ref = refFor(spec, band.label);
      if (ref === undefined) {
        throw new Error(`abs_error needs a reference value for group '${band.label}'`);
      }
      const abs = (vals: number[]) => vals.map((v) => Math.max(Math.abs(v - ref), LOG_FLOOR));
      return {
        band: { ...band, median: abs(band.median), q1: abs(band.q1), q3: abs(band.q3) },
        color: PALETTE[i % PALETTE.length],
        dashed: false,
        legend: band.label,
      };
    });
    return {
      title: "Absolute error of the estimate",
      yLabel: "|E_G - reference|",
      logY: true,
      series,
      references: [],
    };
  }
  // mitigation_compare: measured solid, mitigated dashed, per group
  const measured = bandSeries(rows, spec.groupBy, (r) => r.eG);
  const mitigated = bandSeries(rows, spec.groupBy, (r) => r.eGMitigated);
  if (mitigated.length === 0) {
    throw new Error("mitigation_compare needs a populated e_g_mitigated column");
  }
  const series: PanelData["series"] = [];
  measured.forEach((band, i) => {
    series.push({
      band,
      color: PALETTE[i % PALETTE.length],
      dashed: false,
      legend: `${band.label} measured`,
    });
  });
  mitigated.forEach((band, i) => {
    series.push({
      band,
      color: PALETTE[i % PALETTE.length],
      dashed: true,
      legend: `${band.label} mitigated`,
    });
  });
  return {
    title: "Measured vs mitigated estimate",
    yLabel: "E_G",
    logY: false,
    series,
    references: dedupeRefs(measured.map((b) => refFor(spec, b.label))),
  };
}

function dedupeRefs(values: (number | undefined)[]): { value: number; label: string }[] {
  const seen = new Set<number>();
  const out: { value: number; label: string }[] = [];
  for (const v of values) {
    if (v === undefined || seen.has(v)) continue;
    seen.add(v);
    out.push({ value: v, label: `reference ${v}` });
  }
  return out;
}

export function renderPanel(data: PanelData): string {
  const frame = DEFAULT_FRAME;
  const ks = data.series.flatMap((s) => s.band.k);
  const kMin = Math.min(...ks);
  const kMax = Math.max(...ks);
  const values = data.series.flatMap((s) => [...s.band.q1, ...s.band.q3, ...s.band.median]);
  const refVals = data.references.map((r) => r.value);
  let yMin = Math.min(...values, ...(data.logY ? [] : refVals));
  let yMax = Math.max(...values, ...(data.logY ? [] : refVals));
  if (yMin === yMax) {
    yMin -= 0.5;
    yMax += 0.5;
  }
  const pad = data.logY ? 0 : 0.06 * (yMax - yMin);
  const x: Scale = linearScale(kMin, kMax === kMin ? kMin + 1 : kMax, frame.left, frame.right);
  const y: Scale = data.logY
    ? logScale(yMin, yMax, frame.bottom, frame.top)
    : linearScale(yMin - pad, yMax + pad, frame.bottom, frame.top);

  const scene = new SvgScene(frame);
  for (const s of data.series) {
    const xs = s.band.k.map((k) => x.toPixel(k));
    if (!s.dashed) {
      scene.band(xs, s.band.q1.map((v) => y.toPixel(v)), s.band.q3.map((v) => y.toPixel(v)), s.color);
    }
    scene.polyline(xs, s.band.median.map((v) => y.toPixel(v)), s.color, s.dashed);
  }
  for (const ref of data.references) {
    scene.hline(y.toPixel(ref.value), "#c22");
  }
  const xTickVals = ticksLinear(kMin, kMax === kMin ? kMin + 1 : kMax, Math.min(8, kMax - kMin || 1));
  const yTickVals = data.logY ? ticksLog(yMin, yMax) : ticksLinear(yMin - pad, yMax + pad, 6);
  scene.axes(
    xTickVals.map((v) => ({ v, label: String(Math.round(v)), pix: x.toPixel(v) })),
    yTickVals.map((v) => ({
      v,
      label: data.logY ? `1e${Math.round(Math.log10(v))}` : v.toFixed(3),
      pix: y.toPixel(v),
    })),
    "iteration",
    data.yLabel
  );
  scene.legend(data.series.map((s) => ({ label: s.legend, color: s.color, dashed: s.dashed })));
  return scene.render(data.title);
}

/** Compact digest of the plotted data, used by byte-stability checks. */
export function seriesDigest(data: PanelData): string {
  return data.series
    .map(
      (s) =>
        `${s.legend}|${s.band.k.join(",")}|${s.band.median.map((v) => v.toPrecision(12)).join(",")}`
    )
    .join("\n");
}

export { median };
