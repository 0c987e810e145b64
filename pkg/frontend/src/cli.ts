#!/usr/bin/env node
import { readFileSync, writeFileSync } from 'fs';
import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';

import { renderFigure } from './render.js';
import { PlotError } from './schema.js';

interface Options {
  csv: string;
  figure: number;
  out: string;
}

export function runCli(argv: string[]): number {
  const args = yargs(argv)
    .usage('$0 --csv PATH --figure N --out PATH')
    .option('csv', { type: 'string', demandOption: true, describe: 'sweep CSV to plot' })
    .option('figure', {
      type: 'number',
      demandOption: true,
      describe: 'figure family (2..6)',
    })
    .option('out', { type: 'string', demandOption: true, describe: 'output SVG path' })
    .strict()
    .exitProcess(false)
    .fail((msg) => {
      throw new PlotError(msg);
    })
    .parseSync() as Options;

  let text: string;
  try {
    text = readFileSync(args.csv, 'utf8');
  } catch {
    console.error(`error: cannot read ${args.csv}`);
    return 1;
  }
  const svg = renderFigure(text, args.figure);
  writeFileSync(args.out, svg, 'utf8');
  const curves = /data-curves="(\d+)"/.exec(svg);
  console.log(`wrote ${args.out} (${curves ? curves[1] : '?'} curves)`);
  return 0;
}

export function main(argv: string[]): number {
  try {
    return runCli(argv);
  } catch (err) {
    if (err instanceof PlotError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(err);
    return 2;
  }
}

// the vitest suite imports this module; only run when invoked as a script
if (process.argv[1] && /cli\.(js|ts)$/.test(process.argv[1])) {
  process.exit(main(hideBin(process.argv)));
}
