/**
 * Parsers for the solver's output files. Each parser validates the schema
 * strictly and throws naming the offending column instead of guessing.
 */

export interface FieldDump {
  nx: number;
  ny: number;
  dx: number;
  dy: number;
  x0: number;
  y0: number;
  time: number;
  /** row-major [i][j] arrays of the conserved components */
  rho: number[][];
  rhoU: number[][];
  rhoV: number[][];
  e: number[][];
}

export const DIAGNOSTICS_COLUMNS = [
  'time', 'l1_gradp_x', 'l1_gradp_y', 'l1_div_multid', 'l1_div_central',
  'l1_d2u', 'mass', 'mom_x', 'mom_y', 'energy', 'max_mach',
] as const;

export const STABILITY_COLUMNS = ['beta_x', 'beta_y', 'spectral_radius'] as const;

export const SCATTER_COLUMNS = ['r', 'rho', 'vrad', 'p'] as const;

export interface Table {
  columns: string[];
  rows: number[][];
}

function parseNumber(token: string, where: string): number {
  const value = Number(token);
  if (!Number.isFinite(value)) {
    throw new Error(`${where}: expected a number, got ${JSON.stringify(token)}`);
  }
  return value;
}

export function parseFieldDump(text: string): FieldDump {
  const lines = text.split('\n').filter((l) => l.trim().length > 0);
  if (lines.length === 0) throw new Error('field dump: empty file');
  const head = lines[0].trim().split(/\s+/);
  if (head.length !== 7) {
    throw new Error(`field dump: header needs 7 entries (nx ny dx dy x0 y0 time), got ${head.length}`);
  }
  const [nx, ny] = [parseNumber(head[0], 'header nx'), parseNumber(head[1], 'header ny')];
  const [dx, dy, x0, y0, time] = head.slice(2).map((t, k) => parseNumber(t, `header field ${k + 2}`));
  if (lines.length - 1 !== nx * ny) {
    throw new Error(`field dump: expected ${nx * ny} cell rows, got ${lines.length - 1}`);
  }
  const alloc = () => Array.from({ length: nx }, () => new Array<number>(ny).fill(NaN));
  const dump: FieldDump = { nx, ny, dx, dy, x0, y0, time, rho: alloc(), rhoU: alloc(), rhoV: alloc(), e: alloc() };
  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].trim().split(/\s+/);
    if (parts.length !== 6) {
      throw new Error(`field dump row ${k}: expected "i j rho rho_u rho_v e" (6 columns), got ${parts.length}`);
    }
    const i = parseNumber(parts[0], `row ${k} column i`);
    const j = parseNumber(parts[1], `row ${k} column j`);
    if (!Number.isInteger(i) || i < 0 || i >= nx) throw new Error(`field dump row ${k}: index i out of range`);
    if (!Number.isInteger(j) || j < 0 || j >= ny) throw new Error(`field dump row ${k}: index j out of range`);
    dump.rho[i][j] = parseNumber(parts[2], `row ${k} column rho`);
    dump.rhoU[i][j] = parseNumber(parts[3], `row ${k} column rho_u`);
    dump.rhoV[i][j] = parseNumber(parts[4], `row ${k} column rho_v`);
    dump.e[i][j] = parseNumber(parts[5], `row ${k} column e`);
  }
  for (let i = 0; i < nx; i++) {
    for (let j = 0; j < ny; j++) {
      if (Number.isNaN(dump.rho[i][j])) throw new Error(`field dump: missing cell (${i}, ${j})`);
    }
  }
  return dump;
}

export function parseCsv(text: string, expected: readonly string[], what: string): Table {
  const lines = text.split('\n').filter((l) => l.trim().length > 0);
  if (lines.length === 0) throw new Error(`${what}: empty file`);
  const columns = lines[0].split(',').map((c) => c.trim());
  if (columns.length !== expected.length) {
    throw new Error(`${what}: expected columns ${expected.join(',')}, got ${columns.join(',')}`);
  }
  for (let k = 0; k < expected.length; k++) {
    if (columns[k] !== expected[k]) {
      throw new Error(`${what}: column ${k} must be ${JSON.stringify(expected[k])}, got ${JSON.stringify(columns[k])}`);
    }
  }
  const rows: number[][] = [];
  for (let k = 1; k < lines.length; k++) {
    const parts = lines[k].split(',');
    if (parts.length !== expected.length) {
      throw new Error(`${what} row ${k}: expected ${expected.length} values, got ${parts.length}`);
    }
    rows.push(parts.map((t, c) => parseNumber(t, `${what} row ${k} column ${expected[c]}`)));
  }
  return { columns, rows };
}

/** Mach number field of a dump for a given adiabatic index. */
export function machField(dump: FieldDump, gamma: number): number[][] {
  return dump.rho.map((col, i) =>
    col.map((rho, j) => {
      const u = dump.rhoU[i][j] / rho;
      const v = dump.rhoV[i][j] / rho;
      const p = (gamma - 1) * (dump.e[i][j] - 0.5 * rho * (u * u + v * v));
      if (rho <= 0 || p <= 0) {
        throw new Error(`invalid state at cell (${i}, ${j}): rho=${rho}, p=${p}`);
      }
      return Math.sqrt((u * u + v * v) / (gamma * p / rho));
    }),
  );
}
