import { readFileSync } from 'fs';
import { describe, expect, it } from 'vitest';

import { CSV_COLUMNS, parseResultsCsv } from '../src/schema.js';

const HEADER =
  'policy,mode,K,nu,snr_db,sigma_rr_db,q_max,c0,slots,seed,avg_rate_bpcu,outage_prob,attempts,successes';

const ADAPTIVE_ROW = 'ba_sprs,adaptive,3,2,10,0,inf,,4000,1,3.5,,7000,7000';
const FIXED_ROW = 'ba_pars,fixed,3,2,20,0,10,1.5,4000,1,1.5,0.003,6999,6980';

describe('parseResultsCsv', () => {
  it('pins the column layout', () => {
    expect(CSV_COLUMNS.join(',')).toBe(HEADER);
  });

  it('parses adaptive rows with empty fixed-mode columns', () => {
    const [row] = parseResultsCsv(`${HEADER}\n${ADAPTIVE_ROW}\n`);
    expect(row.policy).toBe('ba_sprs');
    expect(row.mode).toBe('adaptive');
    expect(row.q_max).toBe(Infinity);
    expect(row.c0).toBeNull();
    expect(row.outage_prob).toBeNull();
    expect(row.avg_rate_bpcu).toBe(3.5);
    expect(row.raw.avg_rate_bpcu).toBe('3.5');
  });

  it('parses fixed rows completely', () => {
    const [row] = parseResultsCsv(`${HEADER}\n${FIXED_ROW}\n`);
    expect(row.c0).toBe(1.5);
    expect(row.outage_prob).toBe(0.003);
    expect(row.attempts).toBe(6999);
  });

  it('accepts a header-only file as zero rows', () => {
    expect(parseResultsCsv(`${HEADER}\n`)).toEqual([]);
  });

  it('names missing columns', () => {
    const chopped = HEADER.replace(',outage_prob', '').replace(',sigma_rr_db', '');
    expect(() => parseResultsCsv(`${chopped}\n`)).toThrow(
      'missing column(s): sigma_rr_db, outage_prob',
    );
  });

  it('rejects reordered headers', () => {
    const swapped = HEADER.replace('policy,mode', 'mode,policy');
    expect(() => parseResultsCsv(`${swapped}\n`)).toThrow('unexpected header');
  });

  it('rejects rows with the wrong cell count', () => {
    expect(() => parseResultsCsv(`${HEADER}\nba_sprs,adaptive,3\n`)).toThrow(
      'expected 14 cells',
    );
  });

  it('rejects junk numerics with the offending line', () => {
    const bad = FIXED_ROW.replace('6999', 'many');
    expect(() => parseResultsCsv(`${HEADER}\n${ADAPTIVE_ROW}\n${bad}\n`)).toThrow(
      'line 3',
    );
  });

  it('reads every committed fixture', () => {
    for (const fig of [2, 3, 4, 5, 6]) {
      const rows = parseResultsCsv(
        readFileSync(new URL(`../fixtures/fig${fig}.csv`, import.meta.url), 'utf8'),
      );
      expect(rows.length).toBeGreaterThan(40);
      for (const row of rows) {
        expect(row.successes).toBeLessThanOrEqual(row.attempts);
      }
    }
  });
});
