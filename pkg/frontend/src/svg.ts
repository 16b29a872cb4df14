/** Hand-rendered SVG: deterministic output, no DOM, no canvas. */

export interface Scale {
  toPixel(v: number): number;
}

export function linearScale(lo: number, hi: number, pixLo: number, pixHi: number): Scale {
  const span = hi - lo || 1;
  return { toPixel: (v) => pixLo + ((v - lo) / span) * (pixHi - pixLo) };
}

export function logScale(lo: number, hi: number, pixLo: number, pixHi: number): Scale {
  const a = Math.log10(lo);
  const span = Math.log10(hi) - a || 1;
  return { toPixel: (v) => pixLo + ((Math.log10(v) - a) / span) * (pixHi - pixLo) };
}

/** Fixed-width number formatting keeps re-renders byte-identical. */
export function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`cannot render non-finite coordinate ${v}`);
  return v.toFixed(2);
}

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface Frame {
  width: number;
  height: number;
  left: number;
  right: number;
  top: number;
  bottom: number;
}

export const DEFAULT_FRAME: Frame = {
  width: 640,
  height: 420,
  left: 70,
  right: 620,
  top: 30,
  bottom: 370,
};

export class SvgScene {
  private parts: string[] = [];

  constructor(private frame: Frame) {}

  polyline(xs: number[], ys: number[], stroke: string, dashed = false, width = 1.8): void {
    const pts = xs.map((x, i) => `${fmt(x)},${fmt(ys[i])}`).join(" ");
    const dash = dashed ? ' stroke-dasharray="6,4"' : "";
    this.parts.push(
      `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${dash} points="${pts}" />`
    );
  }

  band(xs: number[], yLow: number[], yHigh: number[], fill: string): void {
    const upper = xs.map((x, i) => `${fmt(x)},${fmt(yHigh[i])}`);
    const lower = [...xs].reverse().map((x, i) => `${fmt(x)},${fmt(yLow[xs.length - 1 - i])}`);
    this.parts.push(
      `<polygon fill="${fill}" fill-opacity="0.25" stroke="none" points="${[...upper, ...lower].join(" ")}" />`
    );
  }

  hline(yPix: number, stroke: string, label?: string): void {
    const { left, right } = this.frame;
    this.parts.push(
      `<line x1="${fmt(left)}" y1="${fmt(yPix)}" x2="${fmt(right)}" y2="${fmt(yPix)}" ` +
        `stroke="${stroke}" stroke-width="1.4" stroke-dasharray="2,3" />`
    );
    if (label) {
      this.parts.push(
        `<text x="${fmt(right + 4)}" y="${fmt(yPix + 4)}" font-size="11" fill="${stroke}">${label}</text>`
      );
    }
  }

  text(x: number, y: number, content: string, anchor = "middle", size = 12): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-size="${size}" text-anchor="${anchor}" fill="#222">${content}</text>`
    );
  }

  axes(
    xTicks: { v: number; label: string; pix: number }[],
    yTicks: { v: number; label: string; pix: number }[],
    xLabel: string,
    yLabel: string
  ): void {
    const { left, right, top, bottom } = this.frame;
    this.parts.push(
      `<line x1="${fmt(left)}" y1="${fmt(bottom)}" x2="${fmt(right)}" y2="${fmt(bottom)}" stroke="#222" />`,
      `<line x1="${fmt(left)}" y1="${fmt(top)}" x2="${fmt(left)}" y2="${fmt(bottom)}" stroke="#222" />`
    );
    for (const t of xTicks) {
      this.parts.push(
        `<line x1="${fmt(t.pix)}" y1="${fmt(bottom)}" x2="${fmt(t.pix)}" y2="${fmt(bottom + 5)}" stroke="#222" />`
      );
      this.text(t.pix, bottom + 18, t.label, "middle", 11);
    }
    for (const t of yTicks) {
      this.parts.push(
        `<line x1="${fmt(left - 5)}" y1="${fmt(t.pix)}" x2="${fmt(left)}" y2="${fmt(t.pix)}" stroke="#222" />`
      );
      this.text(left - 9, t.pix + 4, t.label, "end", 11);
    }
    this.text((left + right) / 2, bottom + 36, xLabel);
    this.parts.push(
      `<text x="18" y="${fmt((top + bottom) / 2)}" font-size="12" text-anchor="middle" ` +
        `fill="#222" transform="rotate(-90 18 ${fmt((top + bottom) / 2)})">${yLabel}</text>`
    );
  }

  legend(entries: { label: string; color: string; dashed?: boolean }[]): void {
    const { right, top } = this.frame;
    entries.forEach((e, i) => {
      const y = top + 14 + 16 * i;
      const dash = e.dashed ? ' stroke-dasharray="6,4"' : "";
      this.parts.push(
        `<line x1="${fmt(right - 120)}" y1="${fmt(y)}" x2="${fmt(right - 96)}" y2="${fmt(y)}" ` +
          `stroke="${e.color}" stroke-width="2"${dash} />`
      );
      this.text(right - 90, y + 4, e.label, "start", 11);
    });
  }

  render(title: string): string {
    const { width, height } = this.frame;
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
      `<rect width="${width}" height="${height}" fill="white" />`,
      `<text x="${fmt(width / 2)}" y="18" font-size="14" text-anchor="middle" fill="#222">${title}</text>`,
      ...this.parts,
      "</svg>",
      "",
    ].join("\n");
  }
}

export function ticksLinear(lo: number, hi: number, count: number): number[] {
  const out: number[] = [];
  for (let i = 0; i <= count; i++) out.push(lo + ((hi - lo) * i) / count);
  return out;
}

export function ticksLog(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi)); e++) {
    out.push(10 ** e);
  }
  return out.length ? out : [lo, hi];
}
