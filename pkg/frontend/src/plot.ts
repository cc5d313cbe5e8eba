/**
 * Figure assembly: trajectory snapshots rendered as SVG arrow plots.
 *
 * Each requested time becomes one panel (nearest step on the trajectory's
 * grid).  Product groups stack one row of panels per factor, in factor
 * order.  Passing "all" instead of a time list overlays every step in a
 * single panel per factor, coloring arrows from blue (t=0) to red (t=1).
 *
 * Styling: arrows at the start time are blue (#1f77b4), at the final time
 * red (#d62728); intermediate snapshots are drawn gray and semi-transparent
 * so start and end stand out.  Far-side sphere arrows are faded further.
 */

import { Trajectory } from "./csv.js";
import { FactorLayout, factorOffsets } from "./groups.js";
import {
  projectSphereArrow,
  se2Arrow,
  so3Arrow,
  translationPoint,
} from "./geometry.js";
import { Attrs, equalAspect, Panel, SvgBuilder, Viewport } from "./svg.js";

export const BLUE = "#1f77b4";
export const RED = "#d62728";
const GRAY = "#555555";

export type TimeSelection = number[] | "all";

export interface FigureOptions {
  /** Pixel side length of one square panel. */
  panelSize?: number;
  /** Shaft length of a full-strength arrow, in pixels. */
  arrowLengthPx?: number;
}

const MARGIN = 16;
const GAP = 16;
const LABEL_BAND = 22;

const CONVENTION_NOTE =
  "Planar poses (x, y, theta) are arrows at (x, y) along theta. " +
  "Rotation matrices are arrows on the unit sphere: anchor R*e3 (third " +
  "column), direction R*e1 (first column), orthographic view down +z with " +
  "screen = (x, -y); far-side arrows are faded. " +
  "Color: blue " + BLUE + " at the start time, red " + RED + " at the " +
  "final time, gray in between.";

/** Index of the grid time closest to `t` (ties resolve to the earlier step). */
export function nearestStepIndex(times: readonly number[], t: number): number {
  let best = 0;
  let bestDist = Infinity;
  for (let j = 0; j < times.length; j++) {
    const d = Math.abs((times[j] ?? 0) - t);
    if (d < bestDist - 1e-15) {
      best = j;
      bestDist = d;
    }
  }
  return best;
}

export function lerpColor(from: string, to: string, u: number): string {
  const clamp = Math.min(1, Math.max(0, u));
  const a = parseHex(from);
  const b = parseHex(to);
  const mix = a.map((c, i) => Math.round(c + (b[i]! - c) * clamp));
  return "#" + mix.map((c) => c.toString(16).padStart(2, "0")).join("");
}

function parseHex(color: string): number[] {
  return [1, 3, 5].map((i) => parseInt(color.slice(i, i + 2), 16));
}

interface TimeStyle {
  color: string;
  opacity: number;
}

function snapshotStyle(t: number, tStart: number, tEnd: number): TimeStyle {
  if (t <= tStart + 1e-12) {
    return { color: BLUE, opacity: 0.9 };
  }
  if (t >= tEnd - 1e-12) {
    return { color: RED, opacity: 0.9 };
  }
  return { color: GRAY, opacity: 0.45 };
}

function overlayStyle(t: number, tStart: number, tEnd: number): TimeStyle {
  const span = tEnd - tStart;
  const u = span > 0 ? (t - tStart) / span : 0;
  return { color: lerpColor(BLUE, RED, u), opacity: 0.7 };
}

function fmtTime(t: number): string {
  let s = t.toFixed(3);
  s = s.replace(/0+$/, "").replace(/\.$/, "");
  return s === "-0" ? "0" : s;
}

function factorSlice(row: readonly number[], offset: number, width: number): number[] {
  return row.slice(offset, offset + width) as number[];
}

/** Data viewport for one factor, covering every sample at every step. */
function factorViewport(traj: Trajectory, factor: FactorLayout, offset: number): Viewport {
  if (factor.kind === "so3") {
    return { xMin: -1.1, xMax: 1.1, yMin: -1.1, yMax: 1.1 };
  }
  let xMin = Infinity;
  let xMax = -Infinity;
  let yMin = Infinity;
  let yMax = -Infinity;
  for (const sample of traj.samples) {
    for (const row of sample) {
      const coords = factorSlice(row, offset, factor.columns.length);
      const { x, y } =
        factor.kind === "se2" ? se2Arrow(coords) : translationPoint(coords);
      xMin = Math.min(xMin, x);
      xMax = Math.max(xMax, x);
      yMin = Math.min(yMin, y);
      yMax = Math.max(yMax, y);
    }
  }
  const padX = Math.max(1.0, 0.15 * (xMax - xMin));
  const padY = Math.max(1.0, 0.15 * (yMax - yMin));
  return { xMin: xMin - padX, xMax: xMax + padX, yMin: yMin - padY, yMax: yMax + padY };
}

function drawFactorSnapshot(
  panel: Panel,
  traj: Trajectory,
  factor: FactorLayout,
  offset: number,
  stepIndex: number,
  style: TimeStyle,
  arrowLengthPx: number,
): void {
  const rows = traj.samples.map((sample) => sample[stepIndex] as number[]);
  drawRows(panel, rows, factor, offset, style, arrowLengthPx);
}

function drawRows(
  panel: Panel,
  rows: readonly (readonly number[])[],
  factor: FactorLayout,
  offset: number,
  style: TimeStyle,
  arrowLengthPx: number,
): void {
  if (factor.kind === "translation") {
    for (const row of rows) {
      const coords = factorSlice(row, offset, factor.columns.length);
      const { x, y } = translationPoint(coords);
      panel.dot(x, y, 3, { fill: style.color, "fill-opacity": style.opacity });
    }
    return;
  }
  if (factor.kind === "se2") {
    for (const row of rows) {
      const coords = factorSlice(row, offset, factor.columns.length);
      const a = se2Arrow(coords);
      panel.arrow(a.x, a.y, a.dx, a.dy, arrowLengthPx, strokeAttrs(style, 1));
    }
    return;
  }
  // Sphere: paint the far side first so near arrows draw on top.
  const projected = rows.map((row) =>
    projectSphereArrow(so3Arrow(factorSlice(row, offset, factor.columns.length))),
  );
  for (const pass of ["back", "front"] as const) {
    for (const p of projected) {
      const isBack = p.depth < 0;
      if ((pass === "back") !== isBack) {
        continue;
      }
      const foreshorten = Math.min(1, Math.hypot(p.dx, p.dy));
      panel.arrow(
        p.x,
        p.y,
        p.dx,
        p.dy,
        arrowLengthPx * foreshorten,
        strokeAttrs(style, isBack ? 0.25 : 1),
      );
    }
  }
}

function strokeAttrs(style: TimeStyle, depthFactor: number): Attrs {
  return {
    stroke: style.color,
    "stroke-width": 1.5,
    "stroke-opacity": Number((style.opacity * depthFactor).toFixed(4)),
    "stroke-linecap": "round",
  };
}

function drawSphereOutline(panel: Panel): void {
  panel.dataCircle(0, 0, 1, { fill: "none", stroke: "#cccccc", "stroke-width": 1 });
}

function resolveTimes(traj: Trajectory, times: readonly number[]): number[] {
  if (times.length === 0) {
    throw new Error("no plot times requested");
  }
  for (const t of times) {
    if (!Number.isFinite(t) || t < 0 || t > 1) {
      throw new Error(`plot times must lie in [0, 1], got ${t}`);
    }
  }
  return [...times];
}

/** Render a figure for any supported group; dispatches on the CSV layout. */
export function renderFigure(
  traj: Trajectory,
  times: TimeSelection,
  options: FigureOptions = {},
): string {
  const panelSize = options.panelSize ?? 220;
  const arrowLengthPx = options.arrowLengthPx ?? 14;
  const factors = traj.layout.factors;
  const offsets = factorOffsets(traj.layout);
  const multiFactor = factors.length > 1;

  const tStart = traj.times[0] ?? 0;
  const tEnd = traj.times[traj.times.length - 1] ?? 1;

  interface Cell {
    row: number;
    col: number;
    factorIndex: number;
    stepIndex: number | "all";
    label: string;
  }
  const cells: Cell[] = [];
  let nRows: number;
  let nCols: number;

  if (times === "all") {
    nRows = factors.length;
    nCols = 1;
    factors.forEach((factor, f) => {
      const caption = multiFactor ? `${factor.label}  t: 0..1` : "t: 0..1";
      cells.push({ row: f, col: 0, factorIndex: f, stepIndex: "all", label: caption });
    });
  } else {
    const requested = resolveTimes(traj, times);
    const stepIndices = requested.map((t) => nearestStepIndex(traj.times, t));
    if (multiFactor) {
      nRows = factors.length;
      nCols = requested.length;
      factors.forEach((factor, f) => {
        stepIndices.forEach((stepIndex, c) => {
          const t = traj.times[stepIndex] ?? 0;
          cells.push({
            row: f,
            col: c,
            factorIndex: f,
            stepIndex,
            label: `${factor.label}  t=${fmtTime(t)}`,
          });
        });
      });
    } else {
      nCols = Math.min(3, stepIndices.length);
      nRows = Math.ceil(stepIndices.length / nCols);
      stepIndices.forEach((stepIndex, i) => {
        const t = traj.times[stepIndex] ?? 0;
        cells.push({
          row: Math.floor(i / nCols),
          col: i % nCols,
          factorIndex: 0,
          stepIndex,
          label: `t=${fmtTime(t)}`,
        });
      });
    }
  }

  const width = MARGIN * 2 + nCols * panelSize + (nCols - 1) * GAP;
  const height = MARGIN * 2 + nRows * (LABEL_BAND + panelSize) + (nRows - 1) * GAP;
  const svg = new SvgBuilder(width, height);
  svg.comment(CONVENTION_NOTE);

  const viewports = factors.map((factor, f) =>
    factor.kind === "so3"
      ? factorViewport(traj, factor, offsets[f] ?? 0)
      : equalAspect(factorViewport(traj, factor, offsets[f] ?? 0), panelSize, panelSize),
  );

  for (const cell of cells) {
    const factor = factors[cell.factorIndex] as FactorLayout;
    const offset = offsets[cell.factorIndex] ?? 0;
    const px = MARGIN + cell.col * (panelSize + GAP);
    const py = MARGIN + cell.row * (LABEL_BAND + panelSize + GAP) + LABEL_BAND;
    const panel = new Panel(svg, px, py, panelSize, panelSize, viewports[cell.factorIndex] as Viewport);
    panel.frame();
    panel.label(cell.label);
    if (factor.kind === "so3") {
      drawSphereOutline(panel);
    }
    if (cell.stepIndex === "all") {
      for (let j = 0; j < traj.times.length; j++) {
        const style = overlayStyle(traj.times[j] ?? 0, tStart, tEnd);
        drawFactorSnapshot(panel, traj, factor, offset, j, style, arrowLengthPx);
      }
    } else {
      const t = traj.times[cell.stepIndex] ?? 0;
      const style = snapshotStyle(t, tStart, tEnd);
      drawFactorSnapshot(panel, traj, factor, offset, cell.stepIndex, style, arrowLengthPx);
    }
  }

  return svg.toString();
}

/** Planar-pose figure; requires an se2 trajectory. */
export function plotSe2(traj: Trajectory, times: TimeSelection, options?: FigureOptions): string {
  if (traj.groupId !== "se2") {
    throw new Error(`plotSe2 expects group se2, got ${traj.groupId}`);
  }
  return renderFigure(traj, times, options);
}

/** Sphere figure; requires an so3 trajectory. */
export function plotSo3(traj: Trajectory, times: TimeSelection, options?: FigureOptions): string {
  if (traj.groupId !== "so3") {
    throw new Error(`plotSo3 expects group so3, got ${traj.groupId}`);
  }
  return renderFigure(traj, times, options);
}

/** Stacked per-factor figure; requires a product trajectory. */
export function plotProduct(traj: Trajectory, times: TimeSelection, options?: FigureOptions): string {
  if (traj.layout.factors.length < 2) {
    throw new Error(`plotProduct expects a product group, got ${traj.groupId}`);
  }
  return renderFigure(traj, times, options);
}
