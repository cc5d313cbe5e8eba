/**
 * The trajectory-CSV column layout for each supported group id.
 *
 * These mirror the exporter's coordinate conventions: planar rigid motions
 * are (x, y, theta); rotations are the nine row-major matrix entries;
 * translation groups are raw coordinates; product groups concatenate their
 * factors' columns with a per-factor prefix.
 */

export type GroupId = "r1" | "r2" | "se2" | "so3" | "se2xr2";

export interface FactorLayout {
  /** Which renderer the factor uses. */
  kind: "translation" | "se2" | "so3";
  /** Group name shown in panel captions. */
  label: string;
  /** Column names of this factor, in order, as they appear in the header. */
  columns: string[];
}

export interface GroupLayout {
  id: GroupId;
  columns: string[];
  factors: FactorLayout[];
}

const SO3_COLUMNS = [
  "r00", "r01", "r02",
  "r10", "r11", "r12",
  "r20", "r21", "r22",
];

const LAYOUTS: Record<GroupId, GroupLayout> = {
  r1: {
    id: "r1",
    columns: ["x0"],
    factors: [{ kind: "translation", label: "r1", columns: ["x0"] }],
  },
  r2: {
    id: "r2",
    columns: ["x0", "x1"],
    factors: [{ kind: "translation", label: "r2", columns: ["x0", "x1"] }],
  },
  se2: {
    id: "se2",
    columns: ["x", "y", "theta"],
    factors: [{ kind: "se2", label: "se2", columns: ["x", "y", "theta"] }],
  },
  so3: {
    id: "so3",
    columns: SO3_COLUMNS,
    factors: [{ kind: "so3", label: "so3", columns: SO3_COLUMNS }],
  },
  se2xr2: {
    id: "se2xr2",
    columns: [
      "g0_x", "g0_y", "g0_theta",
      "g1_x0", "g1_x1",
    ],
    factors: [
      { kind: "se2", label: "se2", columns: ["g0_x", "g0_y", "g0_theta"] },
      { kind: "translation", label: "r2", columns: ["g1_x0", "g1_x1"] },
    ],
  },
};

export const GROUP_IDS = Object.keys(LAYOUTS) as GroupId[];

export function isGroupId(value: string): value is GroupId {
  return Object.prototype.hasOwnProperty.call(LAYOUTS, value);
}

export function groupLayout(id: GroupId): GroupLayout {
  return LAYOUTS[id];
}

/** Offset of each factor's first column within the coordinate row. */
export function factorOffsets(layout: GroupLayout): number[] {
  const offsets: number[] = [];
  let at = 0;
  for (const factor of layout.factors) {
    offsets.push(at);
    at += factor.columns.length;
  }
  return offsets;
}
