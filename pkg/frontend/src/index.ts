export { CsvFormatError, parseTrajectoryCsv } from "./csv.js";
export type { Trajectory } from "./csv.js";
export { GROUP_IDS, groupLayout, factorOffsets, isGroupId } from "./groups.js";
export type { FactorLayout, GroupId, GroupLayout } from "./groups.js";
export {
  projectSphereArrow,
  se2Arrow,
  so3Arrow,
  translationPoint,
} from "./geometry.js";
export type { Arrow2, ProjectedArrow, SphereArrow, Vec3 } from "./geometry.js";
export { equalAspect, fmt, Panel, SvgBuilder } from "./svg.js";
export type { Attrs, Viewport } from "./svg.js";
export {
  BLUE,
  RED,
  lerpColor,
  nearestStepIndex,
  plotProduct,
  plotSe2,
  plotSo3,
  renderFigure,
} from "./plot.js";
export type { FigureOptions, TimeSelection } from "./plot.js";
export { main } from "./cli.js";
export type { CliIo } from "./cli.js";
