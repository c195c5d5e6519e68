/** The five publication figures.
 *
 * 1-3: minimal error probability against training size for the three
 * prior-knowledge scenarios; exact values as dots, the large-n expansion
 * as a solid line, the fully informed bound as a dashed line.  Figure 3
 * adds a log-log inset comparing the measured second-order remainder of
 * the curve with the expansion's own 1/n^2 term.
 *
 * 4-5: misclassification frequency of the sampled single-copy circuit
 * against the template angle, one scatter series per input sweep file
 * (depolarizing strengths, thermal relaxation times) over the noiseless
 * closed-form curve.
 *
 * Everything is drawn with fixed styles and fixed coordinate precision;
 * identical inputs give byte-identical SVG.
 */

import { basename } from "node:path";

import {
  CURVE_HEADER,
  FigureError,
  SAMPLE_HEADER,
  Table,
  column,
  numbers,
  readTable,
  requireHeader,
} from "./csv.js";
import { Scale, extent, linear, log10 } from "./scale.js";
import { dots, el, num, polyline, text } from "./svg.js";

export interface FigureSpec {
  figure: 1 | 2 | 3 | 4 | 5;
  inputs: string[];
  output: string;
}

const WIDTH = 760;
const HEIGHT = 520;
const PLOT = { left: 76, right: 736, top: 24, bottom: 462 };

const EXACT_STYLE = { class: "series dots", fill: "#111" };
const EXPANSION_STYLE = {
  class: "series expansion",
  stroke: "#1f6fb4",
  "stroke-width": "1.6",
};
const BASELINE_STYLE = {
  class: "series baseline",
  stroke: "#555",
  "stroke-width": "1.3",
  "stroke-dasharray": "6 4",
};
const SCATTER_PALETTE = ["#1b7837", "#d95f02", "#7570b3", "#c51b7d", "#636363"];

// ---------------------------------------------------------------------------
// Shared chrome

function frame(): string {
  return el("rect", {
    x: PLOT.left,
    y: PLOT.top,
    width: PLOT.right - PLOT.left,
    height: PLOT.bottom - PLOT.top,
    fill: "none",
    stroke: "#111",
    "stroke-width": "1",
  });
}

function axes(x: Scale, y: Scale, xLabel: string, yLabel: string): string {
  const parts: string[] = [frame()];
  for (const value of x.ticks) {
    const px = x(value);
    parts.push(
      el("line", { x1: px, y1: PLOT.bottom, x2: px, y2: PLOT.bottom + 5, stroke: "#111" }),
      text(px, PLOT.bottom + 18, x.label(value), {
        "text-anchor": "middle",
        "font-size": "11",
      }),
    );
  }
  for (const value of y.ticks) {
    const py = y(value);
    parts.push(
      el("line", { x1: PLOT.left - 5, y1: py, x2: PLOT.left, y2: py, stroke: "#111" }),
      text(PLOT.left - 9, py + 4, y.label(value), {
        "text-anchor": "end",
        "font-size": "11",
      }),
    );
  }
  const midX = (PLOT.left + PLOT.right) / 2;
  const midY = (PLOT.top + PLOT.bottom) / 2;
  parts.push(
    text(midX, HEIGHT - 14, xLabel, { "text-anchor": "middle", "font-size": "13" }),
    el(
      "text",
      {
        x: num(18),
        y: num(midY),
        "text-anchor": "middle",
        "font-size": "13",
        transform: `rotate(-90 18 ${num(midY)})`,
      },
      [yLabel],
    ),
  );
  return parts.join("");
}

interface LegendEntry {
  label: string;
  glyph: "dot" | "line" | "dash";
  color: string;
}

function legend(entries: LegendEntry[]): string {
  const lineHeight = 17;
  const width = 200;
  const x0 = PLOT.right - width - 10;
  const y0 = PLOT.top + 10;
  const parts: string[] = [
    el("rect", {
      x: x0,
      y: y0,
      width,
      height: entries.length * lineHeight + 10,
      fill: "#fff",
      stroke: "#999",
      "stroke-width": "0.5",
    }),
  ];
  entries.forEach((entry, i) => {
    const cy = y0 + 13 + i * lineHeight;
    if (entry.glyph === "dot") {
      parts.push(el("circle", { cx: x0 + 20, cy, r: 3, fill: entry.color }));
    } else {
      parts.push(
        el("line", {
          x1: x0 + 10,
          y1: cy,
          x2: x0 + 30,
          y2: cy,
          stroke: entry.color,
          "stroke-width": "1.6",
          ...(entry.glyph === "dash" ? { "stroke-dasharray": "6 4" } : {}),
        }),
      );
    }
    parts.push(text(x0 + 38, cy + 4, entry.label, { "font-size": "11" }));
  });
  return el("g", { class: "legend" }, parts);
}

function document(body: string[]): string {
  return (
    '<?xml version="1.0" encoding="UTF-8"?>\n' +
    el(
      "svg",
      {
        xmlns: "http://www.w3.org/2000/svg",
        width: WIDTH,
        height: HEIGHT,
        viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
        "font-family": "Helvetica, Arial, sans-serif",
      },
      [
        el("rect", { x: 0, y: 0, width: WIDTH, height: HEIGHT, fill: "#fff" }),
        el("clipPath", { id: "plotclip" }, [
          el("rect", {
            x: PLOT.left,
            y: PLOT.top,
            width: PLOT.right - PLOT.left,
            height: PLOT.bottom - PLOT.top,
          }),
        ]),
        ...body,
      ],
    ) +
    "\n"
  );
}

// ---------------------------------------------------------------------------
// Figures 1-3: error probability against training size

/** Fit v = c0 + c1/n + c2/n^2 through three rows; exact for the CLI's
 * expansion column, which is that polynomial in 1/n by construction. */
function expansionCoefficients(
  sizes: number[],
  values: (number | null)[],
): [number, number, number] {
  const known: [number, number][] = [];
  for (let i = 0; i < sizes.length && known.length < 3; i += 1) {
    const value = values[i];
    if (value !== null && value !== undefined) {
      known.push([sizes[i]!, value]);
    }
  }
  if (known.length < 3) {
    throw new FigureError("the expansion column has fewer than 3 values; no inset");
  }
  // Gaussian elimination on the 3x3 Vandermonde in 1/n (smallest sizes,
  // where the system is best conditioned).
  const m = known.map(([n, v]) => [1, 1 / n, 1 / (n * n), v]);
  for (let col = 0; col < 3; col += 1) {
    let pivot = col;
    for (let row = col + 1; row < 3; row += 1) {
      if (Math.abs(m[row]![col]!) > Math.abs(m[pivot]![col]!)) pivot = row;
    }
    [m[col], m[pivot]] = [m[pivot]!, m[col]!];
    for (let row = col + 1; row < 3; row += 1) {
      const factor = m[row]![col]! / m[col]![col]!;
      for (let k = col; k < 4; k += 1) m[row]![k]! -= factor * m[col]![k]!;
    }
  }
  const c = [0, 0, 0];
  for (let row = 2; row >= 0; row -= 1) {
    let acc = m[row]![3]!;
    for (let k = row + 1; k < 3; k += 1) acc -= m[row]![k]! * c[k]!;
    c[row] = acc / m[row]![row]!;
  }
  return [c[0]!, c[1]!, c[2]!];
}

function secondOrderInset(
  sizes: number[],
  exact: number[],
  expansion: (number | null)[],
): string {
  const [c0, c1, c2] = expansionCoefficients(sizes, expansion);
  const points: [number, number][] = [];
  for (let i = 0; i < sizes.length; i += 1) {
    const remainder = Math.abs(exact[i]! - c0 - c1 / sizes[i]!);
    if (remainder > 0) points.push([sizes[i]!, remainder]);
  }
  if (points.length === 0) {
    throw new FigureError("second-order remainder vanishes everywhere; no inset");
  }
  const box = { left: PLOT.right - 290, right: PLOT.right - 40, top: 170, bottom: 320 };
  const [nLo, nHi] = extent(points.map(([n]) => n));
  const values = points
    .map(([, v]) => v)
    .concat(points.map(([n]) => Math.abs(c2) / (n * n)));
  const [vLo, vHi] = extent(values);
  const x = log10(nLo, Math.max(nHi, nLo * 10), box.left + 8, box.right - 8);
  const y = log10(vLo / 1.5, vHi * 1.5, box.bottom - 8, box.top + 8);

  const parts: string[] = [
    el("rect", {
      x: box.left,
      y: box.top,
      width: box.right - box.left,
      height: box.bottom - box.top,
      fill: "#fff",
      stroke: "#111",
      "stroke-width": "0.8",
    }),
  ];
  for (const value of x.ticks) {
    const px = x(value);
    if (px < box.left || px > box.right) continue;
    parts.push(
      el("line", { x1: px, y1: box.bottom, x2: px, y2: box.bottom + 4, stroke: "#111" }),
      text(px, box.bottom + 14, x.label(value), { "text-anchor": "middle", "font-size": "9" }),
    );
  }
  for (const value of y.ticks) {
    const py = y(value);
    if (py < box.top || py > box.bottom) continue;
    parts.push(
      el("line", { x1: box.left - 4, y1: py, x2: box.left, y2: py, stroke: "#111" }),
      text(box.left - 6, py + 3, y.label(value), { "text-anchor": "end", "font-size": "9" }),
    );
  }
  const curve: [number, number][] = points.map(([n]) => [x(n), y(Math.abs(c2) / (n * n))]);
  parts.push(
    text((box.left + box.right) / 2, box.top - 6, "second-order correction", {
      "text-anchor": "middle",
      "font-size": "10",
    }),
    text((box.left + box.right) / 2, box.bottom + 26, "n", {
      "text-anchor": "middle",
      "font-size": "10",
    }),
    polyline(curve, { stroke: "#1f6fb4", "stroke-width": "1.4" }),
    dots(points.map(([n, v]) => [x(n), y(v)]), 2, { fill: "#111" }),
  );
  return el("g", { class: "inset" }, parts);
}

function curveFigure(table: Table, withInset: boolean): string {
  requireHeader(table, CURVE_HEADER);
  const sizes = numbers(table, "n");
  const exact = numbers(table, "p_exact");
  const baseline = numbers(table, "helstrom");
  const expansion = column(table, "p_asymptotic");
  const expansionPoints: [number, number][] = [];
  expansion.forEach((value, i) => {
    if (value !== null) expansionPoints.push([sizes[i]!, value]);
  });
  if (expansionPoints.length === 0) {
    throw new FigureError(`${table.path}: the expansion column is entirely empty`);
  }

  const [nLo, nHi] = extent(sizes);
  const [yLo, yHi] = extent(exact.concat(baseline));
  const pad = (yHi - yLo) * 0.06;
  const x = linear(nLo, nHi, PLOT.left, PLOT.right, 8);
  const y = linear(yLo - pad, yHi + pad, PLOT.bottom, PLOT.top, 6);

  const body: string[] = [
    axes(x, y, "training copies n per template", "error probability"),
    el("g", { "clip-path": "url(#plotclip)" }, [
      polyline(sizes.map((n, i) => [x(n), y(baseline[i]!)]), BASELINE_STYLE),
      polyline(expansionPoints.map(([n, v]) => [x(n), y(v)]), EXPANSION_STYLE),
      dots(sizes.map((n, i) => [x(n), y(exact[i]!)]), 3, EXACT_STYLE),
    ]),
    legend([
      { label: "exact", glyph: "dot", color: "#111" },
      { label: "large-n expansion", glyph: "line", color: "#1f6fb4" },
      { label: "fully informed bound", glyph: "dash", color: "#555" },
    ]),
  ];
  if (withInset) {
    body.push(secondOrderInset(sizes, exact, expansion));
  }
  return document(body);
}

// ---------------------------------------------------------------------------
// Figures 4-5: sampled circuit under noise sweeps

export function sweepLabel(figure: 4 | 5, path: string, index: number): string {
  const name = basename(path);
  if (figure === 4) {
    const match = name.match(/_p([^_]+?)\.csv$/i);
    if (match) return `p = ${match[1]}`;
  } else {
    const match = name.match(/_t1(.*?)_t2(.*?)\.csv$/i);
    if (match) return `T1 ${match[1]} s, T2 ${match[2]} s`;
  }
  return `input ${index + 1}`;
}

function sampleFigure(tables: Table[], figure: 4 | 5): string {
  for (const table of tables) {
    requireHeader(table, SAMPLE_HEADER);
  }
  const sweeps = tables.map((table) => ({
    table,
    theta: numbers(table, "theta"),
    freq: numbers(table, "frequency"),
    se: numbers(table, "stderr"),
  }));
  const reference = sweeps[0]!;
  const closedColumn = numbers(reference.table, "p_closed_form");
  const closed = reference.theta
    .map((t, i) => [t, closedColumn[i]!] as [number, number])
    .sort((a, b) => a[0] - b[0]);

  const allTheta = sweeps.flatMap((s) => s.theta);
  const allY = sweeps
    .flatMap((s) => s.freq.map((f, i) => f + s.se[i]!))
    .concat(sweeps.flatMap((s) => s.freq.map((f, i) => f - s.se[i]!)))
    .concat(closed.map(([, v]) => v));
  const [tLo, tHi] = extent(allTheta);
  const [yLo, yHi] = extent(allY);
  const pad = (yHi - yLo) * 0.06;
  const x = linear(tLo, tHi, PLOT.left, PLOT.right, 7);
  const y = linear(yLo - pad, yHi + pad, PLOT.bottom, PLOT.top, 6);

  const series: string[] = [
    polyline(closed.map(([t, v]) => [x(t), y(v)]), {
      class: "series closed-form",
      stroke: "#111",
      "stroke-width": "1.6",
    }),
  ];
  const entries: LegendEntry[] = [
    { label: "noiseless closed form", glyph: "line", color: "#111" },
  ];
  sweeps.forEach((sweep, index) => {
    const color = SCATTER_PALETTE[index % SCATTER_PALETTE.length]!;
    const bars = sweep.theta.map((t, i) =>
      el("line", {
        x1: x(t),
        y1: y(sweep.freq[i]! - sweep.se[i]!),
        x2: x(t),
        y2: y(sweep.freq[i]! + sweep.se[i]!),
        stroke: color,
        "stroke-width": "0.8",
      }),
    );
    series.push(
      el("g", { class: "series sweep", fill: color }, [
        ...bars,
        ...sweep.theta.map((t, i) =>
          el("circle", { cx: x(t), cy: y(sweep.freq[i]!), r: 2.5 }),
        ),
      ]),
    );
    entries.push({
      label: sweepLabel(figure, sweep.table.path, index),
      glyph: "dot",
      color,
    });
  });

  return document([
    axes(x, y, "template angle theta (rad)", "misclassification frequency"),
    el("g", { "clip-path": "url(#plotclip)" }, series),
    legend(entries),
  ]);
}

// ---------------------------------------------------------------------------
// Dispatch

export function renderFigure(spec: FigureSpec): string {
  if (spec.figure === 1 || spec.figure === 2 || spec.figure === 3) {
    if (spec.inputs.length !== 1) {
      throw new FigureError(`figure ${spec.figure} takes exactly one input CSV`);
    }
    return curveFigure(readTable(spec.inputs[0]!), spec.figure === 3);
  }
  if (spec.inputs.length === 0) {
    throw new FigureError(`figure ${spec.figure} needs at least one input CSV`);
  }
  return sampleFigure(spec.inputs.map(readTable), spec.figure);
}
