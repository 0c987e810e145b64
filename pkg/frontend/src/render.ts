import { Curve, FigureSpec, figureSpec, groupCurves, selectRows } from './figures.js';
import { PlotError, ResultRow, fmtG6, parseResultsCsv } from './schema.js';
import {
  Scale,
  curveStyle,
  escapeXml,
  linearScale,
  logScale,
  markerPath,
  px,
  tickLabel,
} from './svg.js';

const WIDTH = 860;
const HEIGHT = 540;
const MARGIN = { left: 72, right: 214, top: 44, bottom: 56 };
const X0 = MARGIN.left;
const X1 = WIDTH - MARGIN.right;
const Y0 = MARGIN.top;
const Y1 = HEIGHT - MARGIN.bottom;

interface Point {
  x: number; // plotted x (inf remapped on the buffer-size axis)
  y: number; // plotted y (clipped to the MC floor on log plots)
  clipped: boolean;
  row: ResultRow;
}

interface PlottedCurve extends Curve {
  points: Point[];
}

function xValue(row: ResultRow, spec: FigureSpec): number {
  return row[spec.xColumn];
}

function yValue(row: ResultRow, spec: FigureSpec): number {
  const y = row[spec.yColumn];
  if (y === null) {
    throw new PlotError(`row has no ${spec.yColumn} value (policy ${row.policy})`);
  }
  return y;
}

function buildPoints(curves: Curve[], spec: FigureSpec, infX: number | null): PlottedCurve[] {
  return curves.map((curve) => {
    const points = curve.rows.map((row) => {
      const rawX = xValue(row, spec);
      const x = Number.isFinite(rawX) ? rawX : (infX as number);
      let y = yValue(row, spec);
      let clipped = false;
      if (spec.logY) {
        // log axes cannot show zero; clip at the resolution of the run
        const floor = 1 / row.attempts;
        if (y < floor) {
          y = floor;
          clipped = true;
        }
      }
      return { x, y, clipped, row };
    });
    points.sort((p, q) => p.x - q.x);
    return { ...curve, points };
  });
}

function yDomain(curves: PlottedCurve[], spec: FigureSpec): [number, number] {
  const ys = curves.flatMap((c) => c.points.map((p) => p.y));
  const lo = Math.min(...ys);
  const hi = Math.max(...ys);
  if (spec.logY) {
    let k0 = Math.floor(Math.log10(lo) + 1e-9);
    let k1 = Math.ceil(Math.log10(hi) - 1e-9);
    if (k0 === k1) k0 -= 1;
    return [Math.pow(10, k0), Math.pow(10, k1)];
  }
  return [Math.min(0, lo), hi <= 0 ? 1 : hi * 1.05];
}

function xAxis(curves: PlottedCurve[], infX: number | null) {
  const xs = [...new Set(curves.flatMap((c) => c.points.map((p) => p.x)))].sort(
    (a, b) => a - b,
  );
  const lo = xs[0];
  const hi = xs[xs.length - 1];
  const pad = (hi - lo || 1) * 0.04;
  const ticks = xs.map((x) => ({
    x,
    label: x === infX ? 'inf' : tickLabel(x),
  }));
  return { lo: lo - pad, hi: hi + pad, ticks };
}

function axesSvg(
  spec: FigureSpec,
  sx: Scale,
  sy: Scale,
  xTicks: { x: number; label: string }[],
): string[] {
  const out: string[] = [];
  out.push(
    `<rect x="${X0}" y="${Y0}" width="${X1 - X0}" height="${Y1 - Y0}" fill="none" stroke="#333"/>`,
  );
  for (const t of xTicks) {
    const x = px(sx.map(t.x));
    out.push(`<line x1="${x}" y1="${Y1}" x2="${x}" y2="${Y1 + 5}" stroke="#333"/>`);
    out.push(
      `<line x1="${x}" y1="${Y0}" x2="${x}" y2="${Y1}" stroke="#ddd" stroke-width="0.5"/>`,
    );
    out.push(
      `<text x="${x}" y="${Y1 + 18}" text-anchor="middle" font-size="11">${escapeXml(t.label)}</text>`,
    );
  }
  for (const t of sy.ticks) {
    const y = px(sy.map(t));
    out.push(`<line x1="${X0 - 5}" y1="${y}" x2="${X0}" y2="${y}" stroke="#333"/>`);
    out.push(
      `<line x1="${X0}" y1="${y}" x2="${X1}" y2="${y}" stroke="#ddd" stroke-width="0.5"/>`,
    );
    out.push(
      `<text x="${X0 - 8}" y="${y}" text-anchor="end" dominant-baseline="middle" font-size="11">${escapeXml(tickLabel(t))}</text>`,
    );
  }
  const cx = (X0 + X1) / 2;
  out.push(
    `<text x="${cx}" y="${Y1 + 40}" text-anchor="middle" font-size="13">${escapeXml(spec.xLabel)}</text>`,
  );
  out.push(
    `<text x="20" y="${(Y0 + Y1) / 2}" text-anchor="middle" font-size="13" transform="rotate(-90 20 ${(Y0 + Y1) / 2})">${escapeXml(spec.yLabel)}</text>`,
  );
  out.push(
    `<text x="${cx}" y="${Y0 - 14}" text-anchor="middle" font-size="15">${escapeXml(spec.title)}</text>`,
  );
  return out;
}

function curveSvg(
  curve: PlottedCurve,
  i: number,
  spec: FigureSpec,
  sx: Scale,
  sy: Scale,
): string[] {
  const { color, shape } = curveStyle(i);
  const out: string[] = [`<g data-curve="${escapeXml(curve.label)}">`];
  const path = curve.points
    .map((p, j) => `${j === 0 ? 'M' : 'L'} ${px(sx.map(p.x))} ${px(sy.map(p.y))}`)
    .join(' ');
  out.push(`<path d="${path}" fill="none" stroke="${color}" stroke-width="1.6"/>`);
  for (const p of curve.points) {
    const d = markerPath(shape, sx.map(p.x), sy.map(p.y));
    // markers carry the original CSV text of their coordinates
    const raw = p.row.raw;
    const attrs = [
      `d="${d}"`,
      `stroke="${color}"`,
      // open marker flags a value clipped to the Monte Carlo floor
      `fill="${p.clipped ? 'none' : color}"`,
      `data-x="${escapeXml(raw[spec.xColumn])}"`,
      `data-y="${escapeXml(raw[spec.yColumn])}"`,
    ];
    if (p.clipped) {
      attrs.push('data-clipped="1"');
      attrs.push(`data-floor="${fmtG6(1 / p.row.attempts)}"`);
    }
    out.push(`<path ${attrs.join(' ')}/>`);
  }
  out.push('</g>');
  return out;
}

function floorSvg(curves: PlottedCurve[], sy: Scale): string[] {
  const attempts = [
    ...new Set(curves.flatMap((c) => c.points.filter((p) => p.clipped).map((p) => p.row.attempts))),
  ].sort((a, b) => a - b);
  const out: string[] = [];
  for (const n of attempts) {
    const floor = 1 / n;
    const y = px(sy.map(floor));
    out.push(
      `<line x1="${X0}" y1="${y}" x2="${X1}" y2="${y}" stroke="#888" stroke-width="0.8" stroke-dasharray="5 4"/>`,
    );
    out.push(
      `<text x="${X0 + 6}" y="${Number(y) - 4}" font-size="10" fill="#666" data-floor="${fmtG6(floor)}">MC floor 1/${n} = ${fmtG6(floor)}</text>`,
    );
  }
  return out;
}

function legendSvg(curves: PlottedCurve[]): string[] {
  const out: string[] = ['<g font-size="12">'];
  curves.forEach((curve, i) => {
    const { color, shape } = curveStyle(i);
    const y = Y0 + 8 + i * 19;
    out.push(
      `<line x1="${X1 + 14}" y1="${y}" x2="${X1 + 40}" y2="${y}" stroke="${color}" stroke-width="1.6"/>`,
    );
    out.push(`<path d="${markerPath(shape, X1 + 27, y)}" stroke="${color}" fill="${color}"/>`);
    out.push(
      `<text x="${X1 + 46}" y="${y}" dominant-baseline="middle">${escapeXml(curve.label)}</text>`,
    );
  });
  out.push('</g>');
  return out;
}

export function renderFigure(csvText: string, figure: number): string {
  const spec = figureSpec(figure);
  const rows = selectRows(parseResultsCsv(csvText), spec);
  const curves = groupCurves(rows, spec);

  let infX: number | null = null;
  if (spec.xColumn === 'q_max' && rows.some((r) => !Number.isFinite(r.q_max))) {
    const finite = rows.map((r) => r.q_max).filter((q) => Number.isFinite(q));
    // place the unbounded point one slot beyond the largest finite cap
    infX = finite.length > 0 ? Math.max(...finite) * 2 : 1;
  }

  const plotted = buildPoints(curves, spec, infX);
  const ax = xAxis(plotted, infX);
  const [yLo, yHi] = yDomain(plotted, spec);
  const sx = linearScale(ax.lo, ax.hi, X0, X1);
  const sy = spec.logY ? logScale(yLo, yHi, Y1, Y0) : linearScale(yLo, yHi, Y1, Y0);

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" ` +
      `data-figure="${figure}" data-yscale="${spec.logY ? 'log' : 'linear'}" ` +
      `data-curves="${plotted.length}">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(...axesSvg(spec, sx, sy, ax.ticks));
  if (spec.logY) {
    parts.push(...floorSvg(plotted, sy));
  }
  plotted.forEach((curve, i) => parts.push(...curveSvg(curve, i, spec, sx, sy)));
  parts.push(...legendSvg(plotted));
  parts.push('</svg>');
  return parts.join('\n') + '\n';
}
