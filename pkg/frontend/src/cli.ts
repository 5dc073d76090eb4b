/**
 * Batch figure renderer.
 *
 *   node dist/cli.js --kind mach-heatmap --in out/dump_000001.txt --out fig.svg
 *   node dist/cli.js --kind timeseries-loglog --in a.csv,b.csv --column l1_div_multid --out fig.svg
 *
 * Inputs are the solver's documented formats (field dumps, diagnostics CSV,
 * radial scatter CSV, stability scan CSV); kind selects the figure.
 */

import { readFileSync, writeFileSync } from 'node:fs';
import { basename } from 'node:path';
import { FIGURE_KINDS, FigureJob, FigureKind, render } from './render.js';

interface Args {
  kind: FigureKind;
  inPaths: string[];
  out: string;
  gamma?: number;
  column?: string;
  title?: string;
}

function parseArgs(argv: string[]): Args {
  const opts = new Map<string, string>();
  for (let k = 0; k < argv.length; k += 2) {
    const flag = argv[k];
    if (!flag.startsWith('--') || k + 1 >= argv.length) {
      throw new Error(`expected --flag value pairs, got ${JSON.stringify(argv)}`);
    }
    opts.set(flag.slice(2), argv[k + 1]);
  }
  const kind = opts.get('kind');
  if (!kind || !(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new Error(`--kind must be one of ${FIGURE_KINDS.join(', ')}`);
  }
  const inArg = opts.get('in');
  if (!inArg) throw new Error('--in is required (comma-separated for overlays)');
  const out = opts.get('out');
  if (!out) throw new Error('--out is required');
  const args: Args = { kind: kind as FigureKind, inPaths: inArg.split(','), out };
  if (opts.has('gamma')) args.gamma = Number(opts.get('gamma'));
  if (opts.has('column')) args.column = opts.get('column');
  if (opts.has('title')) args.title = opts.get('title');
  return args;
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const job: FigureJob = {
      kind: args.kind,
      inputs: args.inPaths.map((p) => readFileSync(p, 'utf8')),
      labels: args.inPaths.map((p) => basename(p)),
      gamma: args.gamma,
      column: args.column,
      title: args.title,
    };
    writeFileSync(args.out, render(job));
    console.log(`wrote ${args.out}`);
    return 0;
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
