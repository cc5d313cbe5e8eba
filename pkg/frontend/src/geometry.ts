/**
 * Conversion from group coordinates to drawable primitives.
 *
 * Conventions:
 *  - A planar rigid pose (x, y, theta) is drawn as an arrow anchored at
 *    (x, y) pointing along (cos theta, sin theta).  The identity pose is an
 *    arrow at the origin pointing along +x.
 *  - A rotation matrix R (nine row-major entries) is drawn on the unit
 *    sphere: the arrow sits at R·e3 (the image of the north pole, i.e. the
 *    third column of R) and points along R·e1 (the image of the +x axis,
 *    i.e. the first column).  R·e1 is orthogonal to R·e3, so the arrow is
 *    tangent to the sphere.  The identity rotation is an arrow at the north
 *    pole pointing along +x.
 *  - The sphere is shown in orthographic projection looking down the +z
 *    axis: a world point (x, y, z) lands at screen (x, -y) with depth z.
 *    Points with z >= 0 face the viewer; z < 0 is the far side.
 *  - Plain translation coordinates are drawn as dots; one-dimensional data
 *    sits on the y = 0 axis.
 */

export type Vec3 = [number, number, number];

export interface Arrow2 {
  x: number;
  y: number;
  /**
   * Direction in data coordinates.  Unit length for planar poses;
   * projected sphere arrows foreshorten with tilt.
   */
  dx: number;
  dy: number;
}

export interface SphereArrow {
  /** Arrow anchor on the unit sphere: R·e3. */
  position: Vec3;
  /** Tangent direction at the anchor: R·e1. */
  direction: Vec3;
}

export function se2Arrow(coords: readonly number[]): Arrow2 {
  const x = coords[0] ?? 0;
  const y = coords[1] ?? 0;
  const theta = coords[2] ?? 0;
  return { x, y, dx: Math.cos(theta), dy: Math.sin(theta) };
}

export function so3Arrow(coords: readonly number[]): SphereArrow {
  // coords holds R row-major: [r00 r01 r02 r10 r11 r12 r20 r21 r22].
  const position: Vec3 = [coords[2] ?? 0, coords[5] ?? 0, coords[8] ?? 0];
  const direction: Vec3 = [coords[0] ?? 0, coords[3] ?? 0, coords[6] ?? 0];
  return { position, direction };
}

export function translationPoint(coords: readonly number[]): { x: number; y: number } {
  return { x: coords[0] ?? 0, y: coords.length > 1 ? coords[1] ?? 0 : 0 };
}

export interface ProjectedArrow extends Arrow2 {
  /** Orthographic depth; non-negative means the near side of the sphere. */
  depth: number;
}

/** Orthographic view of a sphere arrow, looking down +z: (x, y, z) -> (x, -y). */
export function projectSphereArrow(arrow: SphereArrow): ProjectedArrow {
  const [px, py, pz] = arrow.position;
  const [dx, dy] = arrow.direction;
  return { x: px, y: -py, dx, dy: -dy, depth: pz };
}
