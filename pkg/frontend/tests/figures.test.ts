import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { CsvError, parseSweepCsv } from "../src/csv.js";
import { buildFigure } from "../src/figure.js";
import { renderCsvFile } from "../src/render.js";
import { renderFigureSvg } from "../src/svg.js";

const FIXTURES = join(__dirname, "fixtures");

function fixtureText(name: string): string {
  return readFileSync(join(FIXTURES, name), "utf-8");
}

function fixtureTable(name: string) {
  return parseSweepCsv(fixtureText(name), name);
}

function tmpFile(name: string): string {
  return join(mkdtempSync(join(tmpdir(), "nfbm-figures-")), name);
}

/** All data-x/data-y pairs of one series group in the SVG text. */
function markerData(svg: string, seriesName: string): Array<[number, number]> {
  const pattern = new RegExp(
    `<g class="series" data-series="${seriesName.replace(/[.*+?^${}()|[\]\\]/g, "\\$&")}"[\\s\\S]*?</g>`,
  );
  const group = svg.match(pattern);
  expect(group, seriesName).toBeTruthy();
  const markers = [...group![0].matchAll(
    /<circle class="marker" data-x="([^"]+)" data-y="([^"]+)"/g,
  )];
  return markers.map((m) => [Number(m[1]), Number(m[2])]);
}

describe("csv parsing", () => {
  it("parses the sweep tables with nulls for empty cells", () => {
    const table = fixtureTable("dof_sweep.csv");
    expect(table.columns).toContain("frequency_hz");
    expect(table.rows[0].c_bm_asymptotic).toBeNull();
    expect(table.rows[0].dof).toBeGreaterThan(0);
  });

  it("rejects empty input naming the source", () => {
    expect(() => parseSweepCsv("", "nothing.csv")).toThrowError(/nothing\.csv/);
    expect(() => parseSweepCsv("a,b\n", "only-header.csv")).toThrowError(/only-header\.csv/);
  });

  it("rejects non-numeric cells", () => {
    expect(() => parseSweepCsv("a,b\n1,zap\n", "bad.csv")).toThrowError(/column "b"/);
  });
});

describe("figure building", () => {
  it("dof figure: one series per frequency, points match the CSV exactly", () => {
    const table = fixtureTable("dof_sweep.csv");
    const figure = buildFigure(table, "dof");
    const frequencies = [...new Set(table.rows.map((r) => r.frequency_hz))];
    expect(figure.series.length).toBe(frequencies.length);
    expect(figure.xScale).toBe("log");

    for (const series of figure.series) {
      const f = Number(series.name.replace(" GHz", "")) * 1e9;
      const expected = table.rows.filter((r) => r.frequency_hz === f);
      expect(series.points.length).toBe(expected.length);
      series.points.forEach((p, i) => {
        expect(p.x).toBe(expected[i].distance_m);
        expect(p.y).toBe(expected[i].dof);
      });
    }
  });

  it("snr figure: three series per distance group", () => {
    const table = fixtureTable("snr_sweep.csv");
    const figure = buildFigure(table, "snr");
    const distances = [...new Set(table.rows.map((r) => r.distance_m))];
    expect(figure.series.length).toBe(3 * distances.length);
    const mcSeries = figure.series.filter((s) => s.name.startsWith("MC SE"));
    expect(mcSeries.length).toBe(distances.length);
    for (const series of mcSeries) {
      expect(series.points.every((p) => p.stderr !== undefined)).toBe(true);
    }
  });

  it("distance figure: closed forms plus Monte-Carlo at one SNR", () => {
    const table = fixtureTable("distance_sweep.csv");
    const figure = buildFigure(table, "distance");
    expect(figure.series.length).toBe(3);
    expect(figure.xScale).toBe("log");
    const cbm = figure.series[0];
    expect(cbm.name).toMatch(/^C_BM\^A/);
    cbm.points.forEach((p, i) => {
      expect(p.x).toBe(table.rows[i].distance_m);
      expect(p.y).toBe(table.rows[i].c_bm_asymptotic);
    });
  });

  it("missing required column fails naming the column", () => {
    const text = "distance_m,snr_db,c_bbs\n2,30,1\n";
    const table = parseSweepCsv(text, "trimmed.csv");
    expect(() => buildFigure(table, "distance")).toThrowError(
      /missing required column "c_bm_asymptotic" in trimmed\.csv/,
    );
  });

  it("dof columns are not required for se figures and vice versa", () => {
    const table = fixtureTable("snr_sweep.csv");
    expect(() => buildFigure(table, "dof")).toThrowError(/frequency_hz/);
  });
});

describe("svg rendering", () => {
  it("marker data equals the CSV values for every series", () => {
    const table = fixtureTable("snr_sweep.csv");
    const figure = buildFigure(table, "snr");
    const svg = renderFigureSvg(figure);
    for (const series of figure.series) {
      const data = markerData(svg, series.name);
      expect(data.length).toBe(series.points.length);
      data.forEach(([x, y], i) => {
        expect(x).toBe(series.points[i].x);
        expect(y).toBe(series.points[i].y);
      });
    }
  });

  it("error bars carry the stderr values", () => {
    const table = fixtureTable("distance_sweep.csv");
    const figure = buildFigure(table, "distance");
    const svg = renderFigureSvg(figure);
    const bars = [...svg.matchAll(/<line class="error-bar" data-x="([^"]+)" data-y="([^"]+)" data-stderr="([^"]+)"/g)];
    const mcRows = table.rows.filter((r) => r.se_mc_mean !== null);
    expect(bars.length).toBe(mcRows.length);
    bars.forEach((bar, i) => {
      expect(Number(bar[3])).toBe(mcRows[i].se_mc_stderr);
    });
  });

  it("rendering twice is identical with fixed dimensions", () => {
    const table = fixtureTable("dof_sweep.csv");
    const figure = buildFigure(table, "dof");
    const first = renderFigureSvg(figure);
    const second = renderFigureSvg(figure);
    expect(second).toBe(first);
    expect(first).toContain('width="860" height="520"');
  });

  it("series group count matches the figure", () => {
    const table = fixtureTable("snr_sweep.csv");
    const figure = buildFigure(table, "snr");
    const svg = renderFigureSvg(figure);
    const groups = [...svg.matchAll(/<g class="series"/g)];
    expect(groups.length).toBe(figure.series.length);
  });
});

describe("render pipeline", () => {
  it.each([
    ["dof_sweep.csv", "dof"],
    ["snr_sweep.csv", "snr"],
    ["distance_sweep.csv", "distance"],
  ] as const)("renders %s as %s", (name, kind) => {
    const out = tmpFile(`${kind}.svg`);
    const result = renderCsvFile(join(FIXTURES, name), kind, out);
    expect(result.seriesCount).toBeGreaterThan(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg.startsWith("<svg ")).toBe(true);
    expect(svg).toContain("</svg>");
  });

  it("input CSV is never modified", () => {
    const path = join(FIXTURES, "dof_sweep.csv");
    const before = readFileSync(path, "utf-8");
    renderCsvFile(path, "dof", tmpFile("out.svg"));
    expect(readFileSync(path, "utf-8")).toBe(before);
  });

  it("missing file fails naming the path", () => {
    expect(() => renderCsvFile("/no/such/file.csv", "dof", tmpFile("x.svg"))).toThrowError(
      /\/no\/such\/file\.csv/,
    );
  });

  it("empty csv fails naming the file", () => {
    const path = tmpFile("empty.csv");
    writeFileSync(path, "");
    expect(() => renderCsvFile(path, "snr", tmpFile("y.svg"))).toThrowError(CsvError);
    expect(() => renderCsvFile(path, "snr", tmpFile("y.svg"))).toThrowError(
      new RegExp(path.replace(/[.*+?^${}()|[\]\\]/g, "\\$&")),
    );
  });
});
