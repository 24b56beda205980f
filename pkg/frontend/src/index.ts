export { CsvError, parseSweepCsv, requireColumns, SweepTable } from "./csv.js";
export {
  assertRenderable,
  buildFigure,
  Figure,
  FigureKind,
  Point,
  REQUIRED_COLUMNS,
  Series,
} from "./figure.js";
export { renderCsvFile, RenderResult } from "./render.js";
export { renderFigureSvg, RenderOptions } from "./svg.js";
