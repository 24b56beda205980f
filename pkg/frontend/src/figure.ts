import { CsvError, requireColumns, SweepTable } from "./csv.js";

export type FigureKind = "dof" | "snr" | "distance";

export interface Point {
  x: number;
  y: number;
  stderr?: number;
}

export interface Series {
  name: string;
  points: Point[];
}

export interface Figure {
  kind: FigureKind;
  title: string;
  xLabel: string;
  yLabel: string;
  xScale: "linear" | "log";
  series: Series[];
}

export const REQUIRED_COLUMNS: Record<FigureKind, readonly string[]> = {
  dof: ["frequency_hz", "distance_m", "dof"],
  snr: ["distance_m", "snr_db", "c_bm_asymptotic", "c_bbs", "se_mc_mean", "se_mc_stderr"],
  distance: ["distance_m", "snr_db", "c_bm_asymptotic", "c_bbs", "se_mc_mean", "se_mc_stderr"],
};

/** First-seen distinct values of a column, preserving file order. */
function groupKeys(table: SweepTable, column: string): number[] {
  const seen: number[] = [];
  for (const row of table.rows) {
    const value = row[column];
    if (value !== null && !seen.includes(value)) {
      seen.push(value);
    }
  }
  return seen;
}

function points(
  table: SweepTable,
  filter: (row: Record<string, number | null>) => boolean,
  xCol: string,
  yCol: string,
  stderrCol?: string,
): Point[] {
  const out: Point[] = [];
  for (const row of table.rows) {
    if (!filter(row)) continue;
    const x = row[xCol];
    const y = row[yCol];
    if (x === null || y === null) continue; // values never resampled, only skipped
    const point: Point = { x, y };
    if (stderrCol !== undefined && row[stderrCol] !== null) {
      point.stderr = row[stderrCol] as number;
    }
    out.push(point);
  }
  return out;
}

/** The three spectral-efficiency series (closed forms + Monte-Carlo) of one group. */
function seSeries(
  table: SweepTable,
  label: string,
  filter: (row: Record<string, number | null>) => boolean,
  xCol: string,
): Series[] {
  const series: Series[] = [
    { name: `C_BM^A ${label}`, points: points(table, filter, xCol, "c_bm_asymptotic") },
    { name: `C_BBS ${label}`, points: points(table, filter, xCol, "c_bbs") },
  ];
  const mc = points(table, filter, xCol, "se_mc_mean", "se_mc_stderr");
  if (mc.length > 0) {
    series.push({ name: `MC SE ${label}`, points: mc });
  }
  return series;
}

export function buildFigure(table: SweepTable, kind: FigureKind): Figure {
  requireColumns(table, REQUIRED_COLUMNS[kind]);

  if (kind === "dof") {
    const series = groupKeys(table, "frequency_hz").map((f) => ({
      name: `${f / 1e9} GHz`,
      points: points(table, (row) => row.frequency_hz === f, "distance_m", "dof"),
    }));
    return {
      kind,
      title: "Effective spatial DoF vs transceiver distance",
      xLabel: "distance (m)",
      yLabel: "effective DoF",
      xScale: "log",
      series,
    };
  }

  if (kind === "snr") {
    const series = groupKeys(table, "distance_m").flatMap((d) =>
      seSeries(table, `@ ${d} m`, (row) => row.distance_m === d, "snr_db"),
    );
    return {
      kind,
      title: "Spectral efficiency vs SNR",
      xLabel: "SNR (dB)",
      yLabel: "spectral efficiency (bits/s/Hz)",
      xScale: "linear",
      series,
    };
  }

  const series = groupKeys(table, "snr_db").flatMap((snr) =>
    seSeries(table, `@ ${snr} dB`, (row) => row.snr_db === snr, "distance_m"),
  );
  return {
    kind,
    title: "Spectral efficiency vs transceiver distance",
    xLabel: "distance (m)",
    yLabel: "spectral efficiency (bits/s/Hz)",
    xScale: "log",
    series,
  };
}

export function assertRenderable(figure: Figure): void {
  if (figure.series.length === 0 || figure.series.every((s) => s.points.length === 0)) {
    throw new CsvError(`no plottable data for figure kind "${figure.kind}"`);
  }
}
