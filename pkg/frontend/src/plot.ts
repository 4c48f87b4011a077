/**
 * Minimal hand-built SVG line/step charts.
 *
 * One generic builder covers both figure families: step curves for
 * empirical CDFs and polylines for per-subcarrier gain traces.  No DOM,
 * no plotting framework — the output is a deterministic SVG string, so
 * re-rendering the same tables is byte-identical.
 */

/** A single data series to plot. */
export interface Series {
  /** (x, y) pairs in data coordinates, ascending in x. */
  points: Array<[number, number]>;
  color: string;
  label: string;
  width?: number;
  opacity?: number;
  dash?: string; // stroke-dasharray
  /** Render as a right-continuous step curve rising from the y-axis floor. */
  step?: boolean;
  /** Optional machine-readable id attached to the curve element. */
  id?: string;
}

export interface ChartOpts {
  title: string;
  subtitle?: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  xMin?: number;
  xMax?: number;
  yMin?: number;
  yMax?: number;
  xFormat?: (v: number) => string;
  yFormat?: (v: number) => string;
  legend?: "tl" | "tr" | "bl" | "br";
}

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function niceTicks(min: number, max: number, count: number): number[] {
  const range = max - min || 1;
  const rough = range / count;
  const mag = Math.pow(10, Math.floor(Math.log10(rough)));
  const nice = [1, 2, 5, 10].map((m) => m * mag);
  const step = nice.find((n) => n >= rough) ?? rough;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + step * 0.01; v += step) ticks.push(v);
  return ticks;
}

/** Compact tick label: plain decimal near 1, exponent notation for tiny/huge. */
export function fmtTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(parseFloat(v.toPrecision(6)));
  }
  return v.toExponential(2).replace(/\.?0+e/, "e");
}

/**
 * Expand (x, y) samples into the vertices of a right-continuous step curve
 * starting at (x0, yBase): riser at each sample, tread to the next x.
 */
export function stepVertices(
  points: Array<[number, number]>,
  yBase: number
): Array<[number, number]> {
  if (points.length === 0) return [];
  const out: Array<[number, number]> = [[points[0][0], yBase]];
  for (let i = 0; i < points.length; i++) {
    const [x, y] = points[i];
    if (i > 0) out.push([x, points[i - 1][1]]); // tread from previous level
    out.push([x, y]); // riser
  }
  return out;
}

export function buildChart(opts: ChartOpts): string {
  const { series, legend = "tr" } = opts;

  // Layout
  const W = 700,
    H = 280;
  const ml = 64,
    mr = 20,
    mt = 28,
    mb = 46;
  const pw = W - ml - mr;
  const ph = H - mt - mb;

  // Data ranges (2% padding when not pinned by the caller)
  const allX = series.flatMap((s) => s.points.map((p) => p[0]));
  const allY = series.flatMap((s) => s.points.map((p) => p[1]));
  let xMin = opts.xMin ?? Math.min(...allX);
  let xMax = opts.xMax ?? Math.max(...allX);
  if (xMin === xMax) {
    const pad = Math.abs(xMin) * 0.05 || 1;
    xMin -= pad;
    xMax += pad;
  } else if (opts.xMin === undefined && opts.xMax === undefined) {
    const pad = (xMax - xMin) * 0.02;
    xMin -= pad;
    xMax += pad;
  }
  const yMin = opts.yMin ?? Math.min(...allY);
  const yMax = opts.yMax ?? Math.max(...allY) * 1.05;

  const xOf = (v: number) => ml + ((v - xMin) / (xMax - xMin || 1)) * pw;
  const yOf = (v: number) => mt + ph - ((v - yMin) / (yMax - yMin || 1)) * ph;
  const xFmt = opts.xFormat ?? fmtTick;
  const yFmt = opts.yFormat ?? fmtTick;

  let s = `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${W} ${H}" font-family="Helvetica, Arial, sans-serif">\n`;
  s += `<rect width="${W}" height="${H}" fill="#fff"/>\n`;

  // Title + subtitle
  s += `<text x="${ml}" y="${mt - 14}" font-size="10" font-weight="600" fill="#222">${esc(opts.title)}</text>\n`;
  if (opts.subtitle) {
    s += `<text x="${ml}" y="${mt - 4}" font-size="7" fill="#888">${esc(opts.subtitle)}</text>\n`;
  }

  // Clip path
  s += `<defs><clipPath id="clip"><rect x="${ml}" y="${mt}" width="${pw}" height="${ph}"/></clipPath></defs>\n`;

  // Grid
  const yTicks = niceTicks(yMin, yMax, 5);
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ml}" y1="${y.toFixed(1)}" x2="${ml + pw}" y2="${y.toFixed(1)}" stroke="#eee" stroke-width="0.5"/>\n`;
  }

  // Curves
  for (const sr of series) {
    const vertices = sr.step ? stepVertices(sr.points, yMin) : sr.points;
    const pts = vertices
      .map(([x, y]) => `${xOf(x).toFixed(2)},${yOf(y).toFixed(2)}`)
      .join(" ");
    const idAttr = sr.id ? ` data-series="${esc(sr.id)}"` : "";
    s += `<polyline${idAttr} clip-path="url(#clip)" fill="none" stroke="${sr.color}" stroke-width="${sr.width ?? 1.2}" opacity="${sr.opacity ?? 1}" ${sr.dash ? `stroke-dasharray="${sr.dash}" ` : ""}points="${pts}"/>\n`;
  }

  // Axes frame
  s += `<line x1="${ml}" y1="${mt}" x2="${ml}" y2="${mt + ph}" stroke="#333" stroke-width="0.7"/>\n`;
  s += `<line x1="${ml}" y1="${mt + ph}" x2="${ml + pw}" y2="${mt + ph}" stroke="#333" stroke-width="0.7"/>\n`;

  // X ticks + label
  const xTicks = niceTicks(xMin, xMax, 6);
  for (const v of xTicks) {
    const x = xOf(v);
    s += `<line x1="${x.toFixed(1)}" y1="${mt + ph}" x2="${x.toFixed(1)}" y2="${mt + ph + 3}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${x.toFixed(1)}" y="${mt + ph + 13}" text-anchor="middle" font-size="6.5" fill="#666">${esc(xFmt(v))}</text>\n`;
  }
  s += `<text x="${ml + pw / 2}" y="${H - 6}" text-anchor="middle" font-size="8" fill="#444">${esc(opts.xLabel)}</text>\n`;

  // Y ticks + label
  for (const v of yTicks) {
    const y = yOf(v);
    s += `<line x1="${ml - 3}" y1="${y.toFixed(1)}" x2="${ml}" y2="${y.toFixed(1)}" stroke="#333" stroke-width="0.5"/>\n`;
    s += `<text x="${ml - 5}" y="${(y + 3).toFixed(1)}" text-anchor="end" font-size="6.5" fill="#666">${esc(yFmt(v))}</text>\n`;
  }
  s += `<text x="12" y="${mt + ph / 2}" text-anchor="middle" font-size="8" fill="#444" transform="rotate(-90,12,${mt + ph / 2})">${esc(opts.yLabel)}</text>\n`;

  // Legend
  const legendW = Math.max(...series.map((sr) => sr.label.length)) * 4.5 + 24;
  const legendH = series.length * 11 + 4;
  const lx =
    legend === "tl" || legend === "bl" ? ml + 8 : ml + pw - legendW - 4;
  const ly =
    legend === "tl" || legend === "tr" ? mt + 6 : mt + ph - legendH + 1;
  s += `<rect x="${lx}" y="${ly - 5}" width="${legendW + 8}" height="${legendH}" rx="2" fill="white" fill-opacity="0.85"/>\n`;
  let legendIdx = 0;
  for (const sr of series) {
    const lyy = ly + legendIdx * 11;
    s += `<line x1="${lx + 4}" y1="${lyy}" x2="${lx + 18}" y2="${lyy}" stroke="${sr.color}" stroke-width="${Math.min(sr.width ?? 1.2, 1.5)}" ${sr.dash ? `stroke-dasharray="${sr.dash}" ` : ""}opacity="${sr.opacity ?? 1}"/>\n`;
    s += `<text x="${lx + 22}" y="${lyy + 3}" font-size="6.5" fill="#444">${esc(sr.label)}</text>\n`;
    legendIdx++;
  }

  s += `</svg>\n`;
  return s;
}
