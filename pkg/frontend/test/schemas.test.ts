import { describe, expect, it } from 'vitest';
import {
  DIAGNOSTICS_COLUMNS, machField, parseCsv, parseFieldDump, SCATTER_COLUMNS,
} from '../src/schemas.js';

function dumpText(nx: number, ny: number, rho = 1.0, e = 2.5): string {
  const lines = [`${nx} ${ny} ${1 / nx} ${1 / ny} 0.0 0.0 0.25`];
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      lines.push(`${i} ${j} ${rho} 0.0 0.0 ${e}`);
    }
  }
  return lines.join('\n') + '\n';
}

describe('parseFieldDump', () => {
  it('reads extents, header and cells', () => {
    const dump = parseFieldDump(dumpText(4, 3));
    expect(dump.nx).toBe(4);
    expect(dump.ny).toBe(3);
    expect(dump.time).toBe(0.25);
    expect(dump.rho.length).toBe(4);
    expect(dump.rho[0].length).toBe(3);
    expect(dump.e[3][2]).toBe(2.5);
  });

  it('rejects a short header', () => {
    expect(() => parseFieldDump('4 3 0.25 0.33 0.0 0.0\n')).toThrow(/header/);
  });

  it('rejects missing cells', () => {
    const text = dumpText(2, 2).split('\n').slice(0, 4).join('\n');
    expect(() => parseFieldDump(text)).toThrow(/expected 4 cell rows/);
  });

  it('rejects malformed rows naming the column', () => {
    const text = '1 3 1.0 0.33 0.0 0.0 0.0\n0 0 1.0 0.0 0.0 2.5\n0 1 1.0 x 0.0 2.5\n0 2 1.0 0.0 0.0 2.5\n';
    expect(() => parseFieldDump(text)).toThrow(/column rho_u/);
  });

  it('rejects out-of-range indices', () => {
    const text = '1 3 1.0 0.33 0.0 0.0 0.0\n0 0 1 0 0 2.5\n0 1 1 0 0 2.5\n0 5 1 0 0 2.5\n';
    expect(() => parseFieldDump(text)).toThrow(/out of range/);
  });
});

describe('parseCsv', () => {
  it('accepts the documented schema', () => {
    const text = SCATTER_COLUMNS.join(',') + '\n0.5,1.0,0.0,1.0\n0.7,0.125,0.0,0.1\n';
    const table = parseCsv(text, SCATTER_COLUMNS, 'scatter');
    expect(table.rows.length).toBe(2);
    expect(table.rows[1][1]).toBe(0.125);
  });

  it('rejects renamed columns naming the offender', () => {
    const text = 'r,density,vrad,p\n0.5,1.0,0.0,1.0\n';
    expect(() => parseCsv(text, SCATTER_COLUMNS, 'scatter')).toThrow(/"rho".*"density"/);
  });

  it('rejects extra columns', () => {
    const cols = [...DIAGNOSTICS_COLUMNS, 'extra'].join(',');
    expect(() => parseCsv(cols + '\n', DIAGNOSTICS_COLUMNS, 'diag')).toThrow(/expected columns/);
  });

  it('rejects ragged rows', () => {
    const text = SCATTER_COLUMNS.join(',') + '\n0.5,1.0,0.0\n';
    expect(() => parseCsv(text, SCATTER_COLUMNS, 'scatter')).toThrow(/row 1/);
  });
});

describe('machField', () => {
  it('computes the Mach number from conserved data', () => {
    // rho=1, u=1, v=0, p=1 at gamma=1.4: M = 1/sqrt(1.4)
    const text = '1 3 1 0.33 0 0 0\n0 0 1 1 0 3.0\n0 1 1 1 0 3.0\n0 2 1 1 0 3.0\n';
    const mach = machField(parseFieldDump(text), 1.4);
    expect(mach[0][0]).toBeCloseTo(1 / Math.sqrt(1.4), 12);
  });

  it('rejects invalid states with the cell index', () => {
    const text = '1 3 1 0.33 0 0 0\n0 0 1 0 0 2.5\n0 1 1 0 0 -1\n0 2 1 0 0 2.5\n';
    expect(() => machField(parseFieldDump(text), 1.4)).toThrow(/cell \(0, 1\)/);
  });
});
