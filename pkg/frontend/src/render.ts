import { readFileSync, writeFileSync } from "node:fs";

import { CsvError, parseSweepCsv } from "./csv.js";
import { assertRenderable, buildFigure, FigureKind } from "./figure.js";
import { renderFigureSvg, RenderOptions } from "./svg.js";

export interface RenderResult {
  outPath: string;
  seriesCount: number;
  pointCount: number;
}

/** Full pipeline: read a sweep CSV, build the figure, write the SVG. */
export function renderCsvFile(
  csvPath: string,
  kind: FigureKind,
  outPath: string,
  options: RenderOptions = {},
): RenderResult {
  let text: string;
  try {
    text = readFileSync(csvPath, "utf-8");
  } catch (err) {
    throw new CsvError(`cannot read CSV file ${csvPath}: ${(err as Error).message}`);
  }
  const table = parseSweepCsv(text, csvPath);
  const figure = buildFigure(table, kind);
  assertRenderable(figure);
  const svg = renderFigureSvg(figure, options);
  writeFileSync(outPath, svg, "utf-8");
  return {
    outPath,
    seriesCount: figure.series.length,
    pointCount: figure.series.reduce((n, s) => n + s.points.length, 0),
  };
}
