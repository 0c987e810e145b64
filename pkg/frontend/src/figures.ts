import { PlotError, ResultRow } from './schema.js';

export interface FigureSpec {
  figure: number;
  title: string;
  xColumn: 'snr_db' | 'K' | 'q_max';
  yColumn: 'avg_rate_bpcu' | 'outage_prob';
  groupColumn: 'policy';
  /** columns that split one policy into per-variant curves when the CSV
   *  carries several values for it (interference level, target rate) */
  variantColumns: ('sigma_rr_db' | 'c0')[];
  logY: boolean;
  mode: 'adaptive' | 'fixed';
  xLabel: string;
  yLabel: string;
}

const RATE_LABEL = 'Average end-to-end rate (BPCU)';

export const FIGURES: Record<number, FigureSpec> = {
  2: {
    figure: 2,
    title: 'Average rate vs SNR, two relays',
    xColumn: 'snr_db',
    yColumn: 'avg_rate_bpcu',
    groupColumn: 'policy',
    variantColumns: ['sigma_rr_db'],
    logY: false,
    mode: 'adaptive',
    xLabel: 'SNR (dB)',
    yLabel: RATE_LABEL,
  },
  3: {
    figure: 3,
    title: 'Average rate vs number of relays at 20 dB',
    xColumn: 'K',
    yColumn: 'avg_rate_bpcu',
    groupColumn: 'policy',
    variantColumns: ['sigma_rr_db'],
    logY: false,
    mode: 'adaptive',
    xLabel: 'Number of relays',
    yLabel: RATE_LABEL,
  },
  4: {
    figure: 4,
    title: 'Average rate vs maximum buffer size at 20 dB',
    xColumn: 'q_max',
    yColumn: 'avg_rate_bpcu',
    groupColumn: 'policy',
    variantColumns: [],
    logY: false,
    mode: 'adaptive',
    xLabel: 'Maximum buffer size (BPCU)',
    yLabel: RATE_LABEL,
  },
  5: {
    figure: 5,
    title: 'Outage probability vs SNR, unit target rate',
    xColumn: 'snr_db',
    yColumn: 'outage_prob',
    groupColumn: 'policy',
    variantColumns: [],
    logY: true,
    mode: 'fixed',
    xLabel: 'SNR (dB)',
    yLabel: 'Outage probability',
  },
  6: {
    figure: 6,
    title: 'Fixed-rate throughput vs SNR, capped buffers',
    xColumn: 'snr_db',
    yColumn: 'avg_rate_bpcu',
    groupColumn: 'policy',
    variantColumns: ['c0'],
    logY: false,
    mode: 'fixed',
    xLabel: 'SNR (dB)',
    yLabel: RATE_LABEL,
  },
};

export function figureSpec(figure: number): FigureSpec {
  const spec = FIGURES[figure];
  if (!spec) {
    throw new PlotError(`unknown figure: ${figure} (expected 2..6)`);
  }
  return spec;
}

export interface Curve {
  /** legend label: the policy, qualified by variant values when needed */
  label: string;
  rows: ResultRow[];
}

/**
 * Group rows into curves. Curves are keyed by policy; a variant column
 * joins the key only when the same policy appears with several of its
 * values, so single-variant figures keep one curve per policy value.
 */
export function groupCurves(rows: ResultRow[], spec: FigureSpec): Curve[] {
  const byPolicy = new Map<string, ResultRow[]>();
  for (const row of rows) {
    const list = byPolicy.get(row.policy);
    if (list) list.push(row);
    else byPolicy.set(row.policy, [row]);
  }
  const curves: Curve[] = [];
  for (const [policy, policyRows] of byPolicy) {
    const splitOn = spec.variantColumns.filter(
      (col) => new Set(policyRows.map((r) => r.raw[col])).size > 1,
    );
    if (splitOn.length === 0) {
      curves.push({ label: policy, rows: policyRows });
      continue;
    }
    const byVariant = new Map<string, ResultRow[]>();
    for (const row of policyRows) {
      const key = splitOn.map((col) => row.raw[col]).join('|');
      const list = byVariant.get(key);
      if (list) list.push(row);
      else byVariant.set(key, [row]);
    }
    for (const [, variantRows] of byVariant) {
      const qual = splitOn
        .map((col) => {
          const value = variantRows[0].raw[col];
          return col === 'sigma_rr_db' ? `sigma_rr ${value} dB` : `c0 ${value}`;
        })
        .join(', ');
      curves.push({ label: `${policy} (${qual})`, rows: variantRows });
    }
  }
  return curves;
}

export function selectRows(rows: ResultRow[], spec: FigureSpec): ResultRow[] {
  const picked = rows.filter((r) => r.mode === spec.mode);
  if (picked.length === 0) {
    throw new PlotError(`no rows for figure ${spec.figure}`);
  }
  return picked;
}
