import { parseTrajectoryCsv, Trajectory } from "../src/csv.js";
import { GroupId, groupLayout } from "../src/groups.js";

/** Build trajectory CSV text: samples[i][j] is the coordinate row at step j. */
export function trajectoryCsv(
  group: GroupId,
  times: number[],
  samples: number[][][],
): string {
  const layout = groupLayout(group);
  const lines = [["sample_id", "step", "t", ...layout.columns].join(",")];
  samples.forEach((sample, i) => {
    sample.forEach((coords, j) => {
      lines.push([i, j, times[j], ...coords].join(","));
    });
  });
  return lines.join("\n") + "\n";
}

export function parseFixture(
  group: GroupId,
  times: number[],
  samples: number[][][],
): Trajectory {
  return parseTrajectoryCsv(trajectoryCsv(group, times, samples), group, "fixture.csv");
}

/** Row-major entries of a rotation by `angle` about the z axis. */
export function rotZ(angle: number): number[] {
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  return [c, -s, 0, s, c, 0, 0, 0, 1];
}

/** Row-major entries of a rotation by `angle` about the x axis. */
export function rotX(angle: number): number[] {
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  return [1, 0, 0, 0, c, -s, 0, s, c];
}

export const IDENTITY3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

/** Count non-overlapping occurrences of `needle` in `haystack`. */
export function countOf(haystack: string, needle: string): number {
  let count = 0;
  let at = haystack.indexOf(needle);
  while (at !== -1) {
    count += 1;
    at = haystack.indexOf(needle, at + needle.length);
  }
  return count;
}
