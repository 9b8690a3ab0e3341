/** Panel model and rendering: curves + reference annotations in one axes box. */

import { CsvTable, numericColumn, requireColumns } from "./csv.js";
import {
  Scale,
  el,
  escapeText,
  fmt,
  linearScale,
  logScale,
  polyline,
  tickLabel,
} from "./svg.js";

export interface Curve {
  yColumn: string;
  label: string;
  color: string;
  dashed?: boolean;
  /** read from another table (overlay from a second CSV) */
  table?: CsvTable;
  /** explicit data overrides the column lookup */
  data?: { x: number[]; y: number[] };
}

export interface Annotation {
  kind: "vline" | "hline" | "marker";
  x?: number;
  y?: number;
  label: string;
}

export interface PanelSpec {
  table: CsvTable;
  xColumn: string;
  curves: Curve[];
  xLabel: string;
  yLabel: string;
  title: string;
  logY?: boolean;
  yDomain?: [number, number];
  annotations?: Annotation[];
}

export const PANEL_WIDTH = 460;
export const PANEL_HEIGHT = 300;
const MARGIN = { left: 64, right: 16, top: 28, bottom: 42 };

const FLOOR_LOG = 1e-12;

function curveData(spec: PanelSpec, curve: Curve): { x: number[]; y: number[] } {
  if (curve.data) return curve.data;
  const table = curve.table ?? spec.table;
  requireColumns(table, [spec.xColumn]);
  const x = numericColumn(table, spec.xColumn);
  const y = numericColumn(table, curve.yColumn);
  return { x, y };
}

/** Render one panel as an SVG group rooted at (ox, oy). */
export function renderPanel(spec: PanelSpec, ox: number, oy: number): string {
  const series = spec.curves.map((c) => ({ curve: c, ...curveData(spec, c) }));
  const xs = series.flatMap((s) => s.x).filter(Number.isFinite);
  let ys = series.flatMap((s) => s.y).filter(Number.isFinite);
  if (spec.logY) ys = ys.map((v) => Math.max(v, FLOOR_LOG));

  const x0 = Math.min(...xs);
  const x1 = Math.max(...xs);
  let y0: number;
  let y1: number;
  if (spec.yDomain) {
    [y0, y1] = spec.yDomain;
  } else if (spec.logY) {
    y1 = Math.max(...ys) * 2;
    y0 = Math.max(Math.min(...ys) / 2, FLOOR_LOG);
  } else {
    y1 = Math.max(...ys);
    y0 = Math.min(...ys, 0);
    const pad = 0.06 * (y1 - y0 || 1);
    y1 += pad;
  }

  const plotX: [number, number] = [ox + MARGIN.left, ox + PANEL_WIDTH - MARGIN.right];
  const plotY: [number, number] = [oy + PANEL_HEIGHT - MARGIN.bottom, oy + MARGIN.top];
  const sx = linearScale([x0, x1], plotX);
  const sy = spec.logY ? logScale([y0, y1], plotY) : linearScale([y0, y1], plotY);

  const parts: string[] = [];
  parts.push(
    el("rect", {
      x: plotX[0],
      y: plotY[1],
      width: plotX[1] - plotX[0],
      height: plotY[0] - plotY[1],
      fill: "none",
      stroke: "#222",
      "stroke-width": 1,
    })
  );
  parts.push(axes(sx, sy, plotX, plotY, spec.logY ?? false));

  for (const s of series) {
    const y = spec.logY ? s.y.map((v) => Math.max(v, FLOOR_LOG)) : s.y;
    const path = polyline(s.x, y, sx, sy);
    if (path === "") continue;
    const attrs: Record<string, string | number> = {
      d: path,
      fill: "none",
      stroke: s.curve.color,
      "stroke-width": 1.6,
    };
    if (s.curve.dashed) attrs["stroke-dasharray"] = "5 3";
    parts.push(el("path", attrs));
  }

  for (const a of spec.annotations ?? []) {
    parts.push(annotation(a, sx, sy, plotX, plotY));
  }

  parts.push(
    el(
      "text",
      { x: ox + PANEL_WIDTH / 2, y: oy + 16, "text-anchor": "middle", class: "title" },
      escapeText(spec.title)
    )
  );
  parts.push(
    el(
      "text",
      {
        x: (plotX[0] + plotX[1]) / 2,
        y: oy + PANEL_HEIGHT - 8,
        "text-anchor": "middle",
        class: "axis-label",
      },
      escapeText(spec.xLabel)
    )
  );
  parts.push(
    el(
      "text",
      {
        x: ox + 14,
        y: (plotY[0] + plotY[1]) / 2,
        "text-anchor": "middle",
        class: "axis-label",
        transform: `rotate(-90 ${fmt(ox + 14)} ${fmt((plotY[0] + plotY[1]) / 2)})`,
      },
      escapeText(spec.yLabel)
    )
  );

  const legendItems = spec.curves.filter((c) => c.label !== "");
  legendItems.forEach((c, i) => {
    const lx = plotX[0] + 10;
    const ly = plotY[1] + 14 + 14 * i;
    parts.push(
      el("line", {
        x1: lx,
        y1: ly - 4,
        x2: lx + 22,
        y2: ly - 4,
        stroke: c.color,
        "stroke-width": 1.6,
        ...(c.dashed ? { "stroke-dasharray": "5 3" } : {}),
      })
    );
    parts.push(
      el("text", { x: lx + 27, y: ly, class: "legend" }, escapeText(c.label))
    );
  });

  return `<g>${parts.join("")}</g>`;
}

function axes(
  sx: Scale,
  sy: Scale,
  plotX: [number, number],
  plotY: [number, number],
  logY: boolean
): string {
  const parts: string[] = [];
  for (const t of sx.ticks()) {
    const px = sx(t);
    if (px < plotX[0] - 0.5 || px > plotX[1] + 0.5) continue;
    parts.push(
      el("line", { x1: px, y1: plotY[0], x2: px, y2: plotY[0] + 4, stroke: "#222" })
    );
    parts.push(
      el(
        "text",
        { x: px, y: plotY[0] + 16, "text-anchor": "middle", class: "tick" },
        tickLabel(t, false)
      )
    );
  }
  for (const t of sy.ticks()) {
    const py = sy(t);
    if (py > plotY[0] + 0.5 || py < plotY[1] - 0.5) continue;
    parts.push(
      el("line", { x1: plotX[0] - 4, y1: py, x2: plotX[0], y2: py, stroke: "#222" })
    );
    parts.push(
      el(
        "text",
        { x: plotX[0] - 7, y: py + 3.5, "text-anchor": "end", class: "tick" },
        tickLabel(t, logY)
      )
    );
  }
  return parts.join("");
}

function annotation(
  a: Annotation,
  sx: Scale,
  sy: Scale,
  plotX: [number, number],
  plotY: [number, number]
): string {
  const parts: string[] = [];
  if (a.kind === "vline" && a.x !== undefined) {
    const px = sx(a.x);
    parts.push(
      el("line", {
        x1: px,
        y1: plotY[0],
        x2: px,
        y2: plotY[1],
        stroke: "#888",
        "stroke-dasharray": "3 3",
      })
    );
    parts.push(
      el(
        "text",
        { x: px + 4, y: plotY[1] + 12, class: "annotation" },
        escapeText(a.label)
      )
    );
  } else if (a.kind === "hline" && a.y !== undefined) {
    const py = sy(a.y);
    parts.push(
      el("line", {
        x1: plotX[0],
        y1: py,
        x2: plotX[1],
        y2: py,
        stroke: "#888",
        "stroke-dasharray": "3 3",
      })
    );
    parts.push(
      el(
        "text",
        { x: plotX[1] - 4, y: py - 4, "text-anchor": "end", class: "annotation" },
        escapeText(a.label)
      )
    );
  } else if (a.kind === "marker" && a.x !== undefined && a.y !== undefined) {
    parts.push(
      el("circle", { cx: sx(a.x), cy: sy(a.y), r: 4, fill: "none", stroke: "#b2182b", "stroke-width": 1.5 })
    );
    parts.push(
      el(
        "text",
        { x: sx(a.x) + 7, y: sy(a.y) - 6, class: "annotation" },
        escapeText(a.label)
      )
    );
  }
  return parts.join("");
}

/** Assemble stacked panels into one standalone SVG document. */
export function renderFigure(panels: PanelSpec[]): string {
  const height = PANEL_HEIGHT * panels.length;
  const body = panels
    .map((p, i) => renderPanel(p, 0, i * PANEL_HEIGHT))
    .join("\n");
  const style =
    "text{font-family:Helvetica,Arial,sans-serif;font-size:11px;fill:#111}" +
    ".title{font-size:13px;font-weight:bold}.tick{font-size:10px}" +
    ".legend{font-size:10px}.annotation{font-size:10px;fill:#555}";
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${PANEL_WIDTH}" ` +
    `height="${height}" viewBox="0 0 ${PANEL_WIDTH} ${height}">\n` +
    `<style>${style}</style>\n${body}\n</svg>\n`
  );
}
