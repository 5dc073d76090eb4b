/**
 * The five figure kinds: heatmaps of Mach number or density from field
 * dumps, radial scatter panels, log-log diagnostic time series overlays,
 * and the stability-scan surface.
 */

import {
  DIAGNOSTICS_COLUMNS, FieldDump, SCATTER_COLUMNS, STABILITY_COLUMNS,
  Table, machField, parseCsv, parseFieldDump,
} from './schemas.js';
import { Svg, colorOf, extentOf } from './svg.js';

export const FIGURE_KINDS = [
  'mach-heatmap', 'density-heatmap', 'radial-scatter', 'timeseries-loglog',
  'stability-surface',
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface FigureJob {
  kind: FigureKind;
  inputs: string[];     // file contents, pre-read
  labels?: string[];    // one per input, for overlays
  gamma?: number;       // heatmaps: adiabatic index, default 1.4
  column?: string;      // timeseries: diagnostics column, default l1_div_multid
  title?: string;
}

const CELL = 4;          // heatmap pixels per cell
const MARGIN = 40;

export function render(job: FigureJob): string {
  switch (job.kind) {
    case 'mach-heatmap':
      return heatmapFromDump(job, true);
    case 'density-heatmap':
      return heatmapFromDump(job, false);
    case 'radial-scatter':
      return radialScatter(job);
    case 'timeseries-loglog':
      return timeseriesLogLog(job);
    case 'stability-surface':
      return stabilitySurface(job);
  }
}

function requireSingleInput(job: FigureJob): string {
  if (job.inputs.length !== 1) {
    throw new Error(`${job.kind} takes exactly one input, got ${job.inputs.length}`);
  }
  return job.inputs[0];
}

function heatmap(svg: Svg, values: number[][], x0: number, y0: number, cell: number): void {
  const flat = values.flat();
  const ext = extentOf(flat);
  const ny = values[0].length;
  for (let i = 0; i < values.length; i++) {
    for (let j = 0; j < ny; j++) {
      const t = (values[i][j] - ext.min) / (ext.max - ext.min);
      // SVG y grows downward; grid j grows upward
      svg.rect(x0 + i * cell, y0 + (ny - 1 - j) * cell, cell, cell, colorOf(t));
    }
  }
}

function heatmapFromDump(job: FigureJob, mach: boolean): string {
  const dump: FieldDump = parseFieldDump(requireSingleInput(job));
  const values = mach ? machField(dump, job.gamma ?? 1.4) : dump.rho;
  const width = dump.nx * CELL + 2 * MARGIN;
  const height = dump.ny * CELL + 2 * MARGIN;
  const svg = new Svg(width, height);
  heatmap(svg, values, MARGIN, MARGIN, CELL);
  const what = mach ? 'Mach number' : 'density';
  svg.text(MARGIN, MARGIN - 10, job.title ?? `${what} at t=${dump.time}`, 14);
  const ext = extentOf(values.flat());
  svg.text(MARGIN, height - 8, `range [${ext.min.toExponential(3)}, ${ext.max.toExponential(3)}]`, 10);
  return svg.render();
}

function radialScatter(job: FigureJob): string {
  const table: Table = parseCsv(requireSingleInput(job), SCATTER_COLUMNS, 'radial scatter');
  const panels = [
    { col: 1, label: 'density' },
    { col: 2, label: '|radial velocity|' },
    { col: 3, label: 'pressure' },
  ];
  const pw = 300;
  const ph = 220;
  const width = panels.length * (pw + MARGIN) + MARGIN;
  const height = ph + 2 * MARGIN;
  const svg = new Svg(width, height);
  const rExt = extentOf(table.rows.map((r) => r[0]));
  panels.forEach((panel, k) => {
    const x0 = MARGIN + k * (pw + MARGIN);
    const y0 = MARGIN;
    const vExt = extentOf(table.rows.map((r) => r[panel.col]));
    svg.line(x0, y0 + ph, x0 + pw, y0 + ph, '#333');
    svg.line(x0, y0, x0, y0 + ph, '#333');
    for (const row of table.rows) {
      const x = x0 + ((row[0] - rExt.min) / (rExt.max - rExt.min)) * pw;
      const y = y0 + ph - ((row[panel.col] - vExt.min) / (vExt.max - vExt.min)) * ph;
      svg.circle(x, y, 1.1, '#1f77b4');
    }
    svg.text(x0, y0 - 8, panel.label, 12);
    svg.text(x0 + pw / 2, y0 + ph + 16, 'r', 11, 'middle');
  });
  return svg.render();
}

const SERIES_COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#9467bd', '#8c564b', '#e377c2'];

function timeseriesLogLog(job: FigureJob): string {
  const column = job.column ?? 'l1_div_multid';
  const colIdx = (DIAGNOSTICS_COLUMNS as readonly string[]).indexOf(column);
  if (colIdx < 0) {
    throw new Error(`timeseries column must be one of ${DIAGNOSTICS_COLUMNS.join(',')}, got ${column}`);
  }
  if (job.inputs.length < 1) throw new Error('timeseries-loglog needs at least one input');
  const tables = job.inputs.map((text, k) =>
    parseCsv(text, DIAGNOSTICS_COLUMNS, `diagnostics[${k}]`));
  const pw = 520;
  const ph = 340;
  const svg = new Svg(pw + 2 * MARGIN, ph + 2 * MARGIN);
  const pts = tables.map((t) =>
    t.rows.filter((r) => r[0] > 0 && r[colIdx] > 0)
      .map((r): [number, number] => [Math.log10(r[0]), Math.log10(r[colIdx])]));
  const all = pts.flat();
  if (all.length === 0) throw new Error(`no positive data to plot for column ${column}`);
  const xExt = extentOf(all.map((p) => p[0]));
  const yExt = extentOf(all.map((p) => p[1]));
  svg.line(MARGIN, MARGIN + ph, MARGIN + pw, MARGIN + ph, '#333');
  svg.line(MARGIN, MARGIN, MARGIN, MARGIN + ph, '#333');
  pts.forEach((series, k) => {
    const mapped = series.map(([lx, ly]): [number, number] => [
      MARGIN + ((lx - xExt.min) / (xExt.max - xExt.min)) * pw,
      MARGIN + ph - ((ly - yExt.min) / (yExt.max - yExt.min)) * ph,
    ]);
    svg.polyline(mapped, SERIES_COLORS[k % SERIES_COLORS.length]);
    const label = job.labels?.[k] ?? `run ${k}`;
    svg.text(MARGIN + pw - 150, MARGIN + 16 * (k + 1), label, 11);
    svg.line(MARGIN + pw - 170, MARGIN + 16 * (k + 1) - 4, MARGIN + pw - 155,
      MARGIN + 16 * (k + 1) - 4, SERIES_COLORS[k % SERIES_COLORS.length], 2);
  });
  svg.text(MARGIN + pw / 2, MARGIN + ph + 24, 'log10 t', 11, 'middle');
  svg.text(MARGIN, MARGIN - 10, job.title ?? `log10 ${column} vs log10 t`, 13);
  return svg.render();
}

function stabilitySurface(job: FigureJob): string {
  const table = parseCsv(requireSingleInput(job), STABILITY_COLUMNS, 'stability scan');
  const bx = [...new Set(table.rows.map((r) => r[0]))].sort((a, b) => a - b);
  const by = [...new Set(table.rows.map((r) => r[1]))].sort((a, b) => a - b);
  if (bx.length * by.length !== table.rows.length) {
    throw new Error(`stability scan: ${table.rows.length} rows do not form a `
      + `${bx.length} x ${by.length} grid`);
  }
  const index = new Map<string, number>();
  table.rows.forEach((r) => index.set(`${r[0]}|${r[1]}`, r[2]));
  const values = bx.map((x) => by.map((y) => {
    const v = index.get(`${x}|${y}`);
    if (v === undefined) throw new Error(`stability scan: missing point (${x}, ${y})`);
    return v;
  }));
  const cell = Math.max(2, Math.floor(512 / bx.length));
  const width = bx.length * cell + 2 * MARGIN;
  const height = by.length * cell + 2 * MARGIN;
  const svg = new Svg(width, height);
  heatmap(svg, values, MARGIN, MARGIN, cell);
  const ext = extentOf(values.flat());
  svg.text(MARGIN, MARGIN - 10, job.title ?? 'spectral radius over (beta_x, beta_y)', 13);
  svg.text(MARGIN, height - 8, `max = ${ext.max.toPrecision(8)}`, 10);
  return svg.render();
}
