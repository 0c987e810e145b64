export function escapeXml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** fixed-point pixel coordinate, keeps output byte-stable */
export function px(x: number): string {
  return x.toFixed(2);
}

export interface Scale {
  map(x: number): number;
  ticks: number[];
}

export function linearScale(lo: number, hi: number, r0: number, r1: number): Scale {
  const span = hi - lo || 1;
  return {
    map: (x) => r0 + ((x - lo) / span) * (r1 - r0),
    ticks: linearTicks(lo, hi),
  };
}

export function logScale(lo: number, hi: number, r0: number, r1: number): Scale {
  const l0 = Math.log10(lo);
  const span = Math.log10(hi) - l0 || 1;
  return {
    map: (x) => r0 + ((Math.log10(x) - l0) / span) * (r1 - r0),
    ticks: decadeTicks(lo, hi),
  };
}

export function linearTicks(lo: number, hi: number, target = 6): number[] {
  const span = hi - lo;
  if (span <= 0) return [lo];
  const rawStep = span / target;
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (mag * m >= rawStep) {
      step = mag * m;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
    // snap away float drift so tick labels stay clean
    ticks.push(Math.abs(t) < step * 1e-6 ? 0 : t);
  }
  return ticks;
}

export function decadeTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let k = Math.ceil(Math.log10(lo) - 1e-9); ; k++) {
    // Math.pow(10, k) can land one ulp off the literal; parse instead
    const t = Number(`1e${k}`);
    if (t > hi * (1 + 1e-9)) break;
    ticks.push(t);
  }
  return ticks;
}

export function tickLabel(x: number): string {
  if (x === 0) return '0';
  const exp = Math.log10(Math.abs(x));
  if (Number.isInteger(exp) && (exp <= -4 || exp >= 5)) {
    return `1e${exp >= 0 ? '+' : ''}${exp}`;
  }
  // trim float noise (0.30000000000000004 -> 0.3)
  return String(Number(x.toPrecision(10)));
}

export const PALETTE = [
  '#1f77b4',
  '#ff7f0e',
  '#2ca02c',
  '#d62728',
  '#9467bd',
  '#8c564b',
  '#e377c2',
  '#7f7f7f',
  '#bcbd22',
  '#17becf',
  '#393b79',
  '#ad494a',
  '#637939',
  '#7b4173',
  '#3182bd',
  '#e6550d',
] as const;

const MARKER_SHAPES = ['circle', 'square', 'diamond', 'triangle'] as const;

export type MarkerShape = (typeof MARKER_SHAPES)[number];

export function curveStyle(i: number): { color: string; shape: MarkerShape } {
  return {
    color: PALETTE[i % PALETTE.length],
    shape: MARKER_SHAPES[i % MARKER_SHAPES.length],
  };
}

/** marker outline; open markers (fill none) flag clipped points */
export function markerPath(shape: MarkerShape, cx: number, cy: number, r = 3.2): string {
  switch (shape) {
    case 'circle':
      return `M ${px(cx - r)} ${px(cy)} a ${r} ${r} 0 1 0 ${2 * r} 0 a ${r} ${r} 0 1 0 ${-2 * r} 0`;
    case 'square':
      return `M ${px(cx - r)} ${px(cy - r)} h ${2 * r} v ${2 * r} h ${-2 * r} Z`;
    case 'diamond':
      return `M ${px(cx)} ${px(cy - r)} L ${px(cx + r)} ${px(cy)} L ${px(cx)} ${px(cy + r)} L ${px(cx - r)} ${px(cy)} Z`;
    case 'triangle':
      return `M ${px(cx)} ${px(cy - r)} L ${px(cx + r)} ${px(cy + r)} L ${px(cx - r)} ${px(cy + r)} Z`;
  }
}
