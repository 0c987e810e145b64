import { describe, expect, it } from 'vitest';

import {
  decadeTicks,
  escapeXml,
  linearScale,
  linearTicks,
  logScale,
  tickLabel,
} from '../src/svg.js';

describe('linearTicks', () => {
  it('uses round steps covering the span', () => {
    expect(linearTicks(0, 30)).toEqual([0, 5, 10, 15, 20, 25, 30]);
    expect(linearTicks(0, 7.2)).toEqual([0, 2, 4, 6]);
  });

  it('handles a degenerate span', () => {
    expect(linearTicks(3, 3)).toEqual([3]);
  });
});

describe('decadeTicks', () => {
  it('emits one tick per decade inclusive', () => {
    expect(decadeTicks(1e-4, 1)).toEqual([1e-4, 1e-3, 1e-2, 1e-1, 1]);
  });
});

describe('tickLabel', () => {
  it('keeps small magnitudes plain and large ones exponential', () => {
    expect(tickLabel(0)).toBe('0');
    expect(tickLabel(25)).toBe('25');
    expect(tickLabel(0.001)).toBe('0.001');
    expect(tickLabel(1e-4)).toBe('1e-4');
    expect(tickLabel(1e6)).toBe('1e+6');
  });

  it('trims float drift from accumulated steps', () => {
    expect(tickLabel(0.1 + 0.2)).toBe('0.3');
  });
});

describe('scales', () => {
  it('maps domain endpoints onto range endpoints', () => {
    const s = linearScale(0, 10, 100, 300);
    expect(s.map(0)).toBe(100);
    expect(s.map(10)).toBe(300);
    expect(s.map(5)).toBe(200);
  });

  it('maps decades evenly on the log scale', () => {
    const s = logScale(1e-4, 1, 400, 0);
    expect(s.map(1e-4)).toBe(400);
    expect(s.map(1)).toBe(0);
    expect(s.map(1e-2)).toBe(200);
  });
});

describe('escapeXml', () => {
  it('escapes markup characters', () => {
    expect(escapeXml('a<b&"c"')).toBe('a&lt;b&amp;&quot;c&quot;');
  });
});
