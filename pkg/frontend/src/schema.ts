import Papa from 'papaparse';

// Column order of the simulator's sweep CSV; consumed bit-exactly.
export const CSV_COLUMNS = [
  'policy',
  'mode',
  'K',
  'nu',
  'snr_db',
  'sigma_rr_db',
  'q_max',
  'c0',
  'slots',
  'seed',
  'avg_rate_bpcu',
  'outage_prob',
  'attempts',
  'successes',
] as const;

export type ColumnName = (typeof CSV_COLUMNS)[number];

export interface ResultRow {
  policy: string;
  mode: 'adaptive' | 'fixed';
  K: number;
  nu: number;
  snr_db: number;
  sigma_rr_db: number;
  q_max: number;
  c0: number | null;
  slots: number;
  seed: number;
  avg_rate_bpcu: number;
  outage_prob: number | null;
  attempts: number;
  successes: number;
  // original cell text, keyed by column, for lossless annotation
  raw: Record<ColumnName, string>;
}

export class PlotError extends Error {}

/** Parse a numeric cell; the writer renders infinities as inf / -inf. */
export function parseNum(cell: string): number {
  if (cell === 'inf') return Infinity;
  if (cell === '-inf') return -Infinity;
  const x = Number(cell);
  if (cell === '' || Number.isNaN(x)) {
    throw new PlotError(`not a number: ${JSON.stringify(cell)}`);
  }
  return x;
}

/**
 * Format with 6 significant digits, printf %.6g style: trailing zeros
 * dropped, scientific notation outside [1e-4, 1e6), two-digit exponent.
 * Matches the simulator's float formatting so parsed values can be
 * re-rendered verbatim.
 */
export function fmtG6(x: number): string {
  if (Number.isNaN(x)) return 'nan';
  if (!Number.isFinite(x)) return x > 0 ? 'inf' : '-inf';
  if (x === 0) return '0';
  const [mant, expStr] = x.toExponential(5).split('e');
  const exp = Number(expStr);
  const neg = mant.startsWith('-');
  const digits = mant.replace('-', '').replace('.', '');
  let out: string;
  if (exp < -4 || exp >= 6) {
    const m = digits.replace(/0+$/, '');
    out = m.length > 1 ? `${m[0]}.${m.slice(1)}` : m[0];
    const sign = exp < 0 ? '-' : '+';
    const abs = Math.abs(exp);
    out += `e${sign}${abs < 10 ? '0' : ''}${abs}`;
  } else if (exp >= 0) {
    const head = digits.slice(0, exp + 1);
    const tail = digits.slice(exp + 1).replace(/0+$/, '');
    out = tail ? `${head}.${tail}` : head;
  } else {
    const tail = digits.replace(/0+$/, '');
    out = `0.${'0'.repeat(-exp - 1)}${tail}`;
  }
  return neg ? `-${out}` : out;
}

function toRow(cells: string[], line: number): ResultRow {
  const raw = {} as Record<ColumnName, string>;
  CSV_COLUMNS.forEach((name, i) => {
    raw[name] = cells[i];
  });
  const mode = raw.mode;
  if (mode !== 'adaptive' && mode !== 'fixed') {
    throw new PlotError(`line ${line}: unknown mode ${JSON.stringify(mode)}`);
  }
  try {
    return {
      policy: raw.policy,
      mode,
      K: parseNum(raw.K),
      nu: parseNum(raw.nu),
      snr_db: parseNum(raw.snr_db),
      sigma_rr_db: parseNum(raw.sigma_rr_db),
      q_max: parseNum(raw.q_max),
      c0: raw.c0 === '' ? null : parseNum(raw.c0),
      slots: parseNum(raw.slots),
      seed: parseNum(raw.seed),
      avg_rate_bpcu: parseNum(raw.avg_rate_bpcu),
      outage_prob: raw.outage_prob === '' ? null : parseNum(raw.outage_prob),
      attempts: parseNum(raw.attempts),
      successes: parseNum(raw.successes),
      raw,
    };
  } catch (err) {
    if (err instanceof PlotError) {
      throw new PlotError(`line ${line}: ${err.message}`);
    }
    throw err;
  }
}

export function parseResultsCsv(text: string): ResultRow[] {
  // header: false keeps the raw cell strings; dynamicTyping would lose
  // the exact formatting the annotations re-emit
  const parsed = Papa.parse<string[]>(text, { skipEmptyLines: true });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new PlotError(`CSV parse error: ${e.message} (row ${e.row})`);
  }
  const data = parsed.data;
  if (data.length === 0) {
    throw new PlotError('empty CSV: no header');
  }
  const header = data[0];
  const missing = CSV_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new PlotError(`missing column(s): ${missing.join(', ')}`);
  }
  if (header.length !== CSV_COLUMNS.length || header.some((c, i) => c !== CSV_COLUMNS[i])) {
    throw new PlotError(`unexpected header ${JSON.stringify(header.join(','))}`);
  }
  return data.slice(1).map((cells, i) => {
    if (cells.length !== CSV_COLUMNS.length) {
      throw new PlotError(`line ${i + 2}: expected ${CSV_COLUMNS.length} cells, got ${cells.length}`);
    }
    return toRow(cells, i + 2);
  });
}
