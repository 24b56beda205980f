import { extent } from "d3-array";
import { scaleLinear, scaleLog } from "d3-scale";

import { Figure, Series } from "./figure.js";

export interface RenderOptions {
  width?: number;
  height?: number;
}

const MARGIN = { top: 48, right: 230, bottom: 56, left: 64 };

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

const DASHES = ["", "6 3", "2 2"];

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function px(value: number): string {
  return value.toFixed(2);
}

function allPoints(series: Series[]) {
  return series.flatMap((s) => s.points);
}

type Scale = (value: number) => number;

function makeScales(figure: Figure, innerWidth: number, innerHeight: number) {
  const pts = allPoints(figure.series);
  const [xMin, xMax] = extent(pts, (p) => p.x) as [number, number];
  let yMin = Math.min(0, ...pts.map((p) => p.y - (p.stderr ?? 0)));
  let yMax = Math.max(...pts.map((p) => p.y + (p.stderr ?? 0)));
  if (yMin === yMax) {
    yMin -= 1;
    yMax += 1;
  }
  const pad = 0.05 * (yMax - yMin);
  const y = scaleLinear().domain([yMin, yMax + pad]).range([innerHeight, 0]);
  if (figure.xScale === "log") {
    if (xMin <= 0) {
      throw new Error("log-scale x axis requires positive coordinates");
    }
    const x = scaleLog().domain([xMin, xMax]).range([0, innerWidth]);
    return { x, y };
  }
  const spread = xMax - xMin || 1;
  const x = scaleLinear()
    .domain([xMin - 0.02 * spread, xMax + 0.02 * spread])
    .range([0, innerWidth]);
  return { x, y };
}

function axes(
  x: Scale & { ticks: (n: number) => number[] },
  y: Scale & { ticks: (n: number) => number[] },
  figure: Figure,
  innerWidth: number,
  innerHeight: number,
): string {
  const parts: string[] = [];
  parts.push(`<g class="axis x-axis" font-size="11" text-anchor="middle">`);
  for (const tick of x.ticks(8)) {
    const cx = px(x(tick));
    parts.push(
      `<line x1="${cx}" y1="0" x2="${cx}" y2="${px(innerHeight)}" stroke="#ddd"/>` +
        `<text x="${cx}" y="${px(innerHeight + 18)}" fill="#333">${tick}</text>`,
    );
  }
  parts.push(
    `<text x="${px(innerWidth / 2)}" y="${px(innerHeight + 40)}" fill="#000" font-size="13">${esc(figure.xLabel)}</text>`,
  );
  parts.push(`</g>`);
  parts.push(`<g class="axis y-axis" font-size="11" text-anchor="end">`);
  for (const tick of y.ticks(8)) {
    const cy = px(y(tick));
    parts.push(
      `<line x1="0" y1="${cy}" x2="${px(innerWidth)}" y2="${cy}" stroke="#ddd"/>` +
        `<text x="-8" y="${cy}" dy="0.32em" fill="#333">${tick}</text>`,
    );
  }
  parts.push(
    `<text transform="translate(${px(-44)},${px(innerHeight / 2)}) rotate(-90)" ` +
      `text-anchor="middle" fill="#000" font-size="13">${esc(figure.yLabel)}</text>`,
  );
  parts.push(`</g>`);
  parts.push(
    `<rect x="0" y="0" width="${px(innerWidth)}" height="${px(innerHeight)}" ` +
      `fill="none" stroke="#333"/>`,
  );
  return parts.join("\n");
}

function seriesGroup(series: Series, index: number, x: Scale, y: Scale): string {
  const color = PALETTE[index % PALETTE.length];
  const dash = DASHES[index % DASHES.length];
  const parts: string[] = [];
  parts.push(
    `<g class="series" data-series="${esc(series.name)}" data-points="${series.points.length}" ` +
      `stroke="${color}" fill="${color}">`,
  );
  const coords = series.points.map((p) => `${px(x(p.x))},${px(y(p.y))}`).join(" ");
  const dashAttr = dash === "" ? "" : ` stroke-dasharray="${dash}"`;
  parts.push(`<polyline points="${coords}" fill="none" stroke-width="1.6"${dashAttr}/>`);
  for (const p of series.points) {
    if (p.stderr !== undefined) {
      const cx = px(x(p.x));
      parts.push(
        `<line class="error-bar" data-x="${p.x}" data-y="${p.y}" data-stderr="${p.stderr}" ` +
          `x1="${cx}" y1="${px(y(p.y - p.stderr))}" x2="${cx}" y2="${px(y(p.y + p.stderr))}" ` +
          `stroke-width="1"/>`,
      );
    }
    parts.push(
      `<circle class="marker" data-x="${p.x}" data-y="${p.y}" ` +
        `cx="${px(x(p.x))}" cy="${px(y(p.y))}" r="2.4"/>`,
    );
  }
  parts.push(`</g>`);
  return parts.join("\n");
}

function legend(figure: Figure, innerWidth: number): string {
  const parts: string[] = [`<g class="legend" font-size="11">`];
  figure.series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const yPos = 14 * i;
    parts.push(
      `<line x1="${px(innerWidth + 14)}" y1="${yPos}" x2="${px(innerWidth + 38)}" y2="${yPos}" ` +
        `stroke="${color}" stroke-width="2"/>` +
        `<text x="${px(innerWidth + 44)}" y="${yPos}" dy="0.32em" fill="#333">${esc(s.name)}</text>`,
    );
  });
  parts.push(`</g>`);
  return parts.join("\n");
}

/** Deterministic standalone SVG for a figure; raw data values are carried in
 * data-* attributes on markers so generated images stay machine-checkable. */
export function renderFigureSvg(figure: Figure, options: RenderOptions = {}): string {
  const width = options.width ?? 860;
  const height = options.height ?? 520;
  const innerWidth = width - MARGIN.left - MARGIN.right;
  const innerHeight = height - MARGIN.top - MARGIN.bottom;
  const { x, y } = makeScales(figure, innerWidth, innerHeight);

  const body = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
    `<text x="${px(width / 2)}" y="24" text-anchor="middle" font-size="15">${esc(figure.title)}</text>`,
    `<g transform="translate(${MARGIN.left},${MARGIN.top})">`,
    axes(x as never, y as never, figure, innerWidth, innerHeight),
    ...figure.series.map((s, i) => seriesGroup(s, i, x, y)),
    legend(figure, innerWidth),
    `</g>`,
    `</svg>`,
  ];
  return body.join("\n") + "\n";
}
