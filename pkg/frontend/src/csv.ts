/**
 * Strict reader for trajectory CSV files.
 *
 * The format is the flow exporter's: a header row
 * `sample_id,step,t,<coordinate columns>` followed by one row per
 * (sample, step) pair.  Samples are contiguous blocks; within a sample the
 * step column counts 0, 1, 2, ...; every sample shares the same time grid
 * and the same number of steps.  Any deviation is rejected with an error
 * that names the offending line, so a malformed file fails loudly instead
 * of producing a subtly wrong figure.
 */

import { GroupId, GroupLayout, groupLayout } from "./groups.js";

export class CsvFormatError extends Error {
  readonly path: string;
  readonly lineNo: number;

  constructor(path: string, lineNo: number, reason: string) {
    super(`${path}:${lineNo}: ${reason}`);
    this.name = "CsvFormatError";
    this.path = path;
    this.lineNo = lineNo;
  }
}

export interface Trajectory {
  groupId: GroupId;
  layout: GroupLayout;
  /** Shared time grid, one entry per step. */
  times: number[];
  /** samples[i][j] is the coordinate row of sample i at step j. */
  samples: number[][][];
}

interface RawRow {
  lineNo: number;
  sampleId: number;
  step: number;
  t: number;
  coords: number[];
}

function parseFinite(field: string, path: string, lineNo: number, what: string): number {
  // Number("") is 0 and Number("0x1f") is 31; restrict to plain decimal
  // notation so the check matches what the exporter writes.
  if (!/^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$/.test(field.trim())) {
    throw new CsvFormatError(path, lineNo, `${what} is not a finite number: '${field}'`);
  }
  const value = Number(field);
  if (!Number.isFinite(value)) {
    throw new CsvFormatError(path, lineNo, `${what} is not a finite number: '${field}'`);
  }
  return value;
}

function parseIndex(field: string, path: string, lineNo: number, what: string): number {
  const value = parseFinite(field, path, lineNo, what);
  if (!Number.isInteger(value) || value < 0) {
    throw new CsvFormatError(path, lineNo, `${what} must be a non-negative integer: '${field}'`);
  }
  return value;
}

/** Parse trajectory CSV text; `path` is used only in error messages. */
export function parseTrajectoryCsv(text: string, group: GroupId, path: string): Trajectory {
  const layout = groupLayout(group);
  const expectedHeader = ["sample_id", "step", "t", ...layout.columns].join(",");
  const nFields = 3 + layout.columns.length;

  const lines = text.split("\n");
  // A trailing newline leaves one empty final entry; drop it (only there).
  if (lines.length > 0 && lines[lines.length - 1] === "") {
    lines.pop();
  }
  if (lines.length === 0) {
    throw new CsvFormatError(path, 1, "file is empty");
  }

  const header = (lines[0] ?? "").replace(/\r$/, "");
  if (header !== expectedHeader) {
    throw new CsvFormatError(
      path,
      1,
      `expected header '${expectedHeader}' for group ${group}, got '${header}'`,
    );
  }

  const rows: RawRow[] = [];
  for (let i = 1; i < lines.length; i++) {
    const lineNo = i + 1;
    const line = (lines[i] ?? "").replace(/\r$/, "");
    const fields = line.split(",");
    if (fields.length !== nFields) {
      throw new CsvFormatError(
        path, lineNo, `expected ${nFields} columns, got ${fields.length}`,
      );
    }
    const sampleId = parseIndex(fields[0] ?? "", path, lineNo, "sample_id");
    const step = parseIndex(fields[1] ?? "", path, lineNo, "step");
    const t = parseFinite(fields[2] ?? "", path, lineNo, "t");
    if (t < 0 || t > 1) {
      throw new CsvFormatError(path, lineNo, `t must lie in [0, 1], got ${t}`);
    }
    const coords: number[] = [];
    for (let c = 0; c < layout.columns.length; c++) {
      coords.push(
        parseFinite(fields[3 + c] ?? "", path, lineNo, `column ${layout.columns[c]}`),
      );
    }
    rows.push({ lineNo, sampleId, step, t, coords });
  }

  if (rows.length === 0) {
    throw new CsvFormatError(path, 1, "no data rows after the header");
  }

  // Group contiguous runs of the same sample_id into sample blocks.
  const samples: number[][][] = [];
  const sampleTimes: number[][] = [];
  const seen = new Set<number>();
  let current: RawRow[] = [];

  const closeBlock = (block: RawRow[], nextLineNo: number) => {
    const first = block[0];
    if (first === undefined) {
      return;
    }
    if (samples.length > 0 && block.length !== (samples[0] as number[][]).length) {
      throw new CsvFormatError(
        path,
        nextLineNo,
        `sample ${first.sampleId} has ${block.length} steps, expected ` +
          `${(samples[0] as number[][]).length}`,
      );
    }
    samples.push(block.map((r) => r.coords));
    sampleTimes.push(block.map((r) => r.t));
  };

  for (const row of rows) {
    const head = current[0];
    if (head !== undefined && row.sampleId === head.sampleId) {
      const prev = current[current.length - 1] as RawRow;
      if (row.step !== prev.step + 1) {
        throw new CsvFormatError(
          path, row.lineNo, `sample ${row.sampleId} jumps from step ${prev.step} to ${row.step}`,
        );
      }
      current.push(row);
      continue;
    }
    // A new sample begins.
    if (head !== undefined) {
      closeBlock(current, row.lineNo);
    }
    if (seen.has(row.sampleId)) {
      throw new CsvFormatError(
        path, row.lineNo, `sample ${row.sampleId} appears in two separate blocks`,
      );
    }
    seen.add(row.sampleId);
    if (row.step !== 0) {
      throw new CsvFormatError(
        path, row.lineNo, `sample ${row.sampleId} does not start at step 0`,
      );
    }
    current = [row];
  }
  const lastLineNo = rows[rows.length - 1]?.lineNo ?? 1;
  closeBlock(current, lastLineNo);

  // All samples must march through the identical time grid.
  const times = sampleTimes[0] as number[];
  for (let s = 1; s < sampleTimes.length; s++) {
    const other = sampleTimes[s] as number[];
    for (let j = 0; j < times.length; j++) {
      if (other[j] !== times[j]) {
        throw new CsvFormatError(
          path,
          rowLineNo(rows, s, j, times.length),
          `sample time grid disagrees with sample 0 at step ${j}: ` +
            `${other[j]} vs ${times[j]}`,
        );
      }
    }
  }

  return { groupId: group, layout, times, samples };
}

function rowLineNo(rows: RawRow[], sampleIndex: number, step: number, stepsPerSample: number): number {
  const row = rows[sampleIndex * stepsPerSample + step];
  return row?.lineNo ?? rows[rows.length - 1]?.lineNo ?? 1;
}
