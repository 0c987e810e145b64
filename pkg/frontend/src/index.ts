export { CSV_COLUMNS, PlotError, fmtG6, parseNum, parseResultsCsv } from './schema.js';
export type { ColumnName, ResultRow } from './schema.js';
export { FIGURES, figureSpec, groupCurves, selectRows } from './figures.js';
export type { Curve, FigureSpec } from './figures.js';
export { renderFigure } from './render.js';
export { main, runCli } from './cli.js';
