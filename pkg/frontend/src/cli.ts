/**
 * Command-line entry point: read a trajectory CSV, write an SVG figure.
 *
 *   groupflow-plot --input traj.csv --group se2 --times 0,0.5,1 --out fig.svg
 *
 * `--times` is a comma-separated list of times in [0, 1] (one panel each,
 * snapped to the nearest step on the file's grid) or the word `all` for a
 * single overlay panel showing every step.  Schema violations in the input
 * are reported with file and line number and exit nonzero.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { CsvFormatError, parseTrajectoryCsv } from "./csv.js";
import { GROUP_IDS, isGroupId } from "./groups.js";
import { renderFigure, TimeSelection } from "./plot.js";

const USAGE = `usage: groupflow-plot --input <traj.csv> --group <id> --out <fig.svg> [--times <list>]

options:
  --input PATH   trajectory CSV written by the flow sampler
  --group ID     one of: ${GROUP_IDS.join(", ")}
  --out PATH     output SVG file
  --times LIST   comma-separated times in [0, 1] (default 0,0.5,1),
                 or 'all' to overlay every step in one panel
  -h, --help     show this message
`;

export interface CliIo {
  stdout: (line: string) => void;
  stderr: (line: string) => void;
  readFile: (path: string) => string;
  writeFile: (path: string, content: string) => void;
}

const nodeIo: CliIo = {
  stdout: (line) => process.stdout.write(line + "\n"),
  stderr: (line) => process.stderr.write(line + "\n"),
  readFile: (path) => readFileSync(path, "utf8"),
  writeFile: (path, content) => writeFileSync(path, content, "utf8"),
};

function parseTimes(spec: string): TimeSelection {
  if (spec === "all") {
    return "all";
  }
  const parts = spec.split(",").map((p) => p.trim()).filter((p) => p.length > 0);
  if (parts.length === 0) {
    throw new Error(`--times needs at least one value, got '${spec}'`);
  }
  return parts.map((p) => {
    const t = Number(p);
    if (!Number.isFinite(t)) {
      throw new Error(`--times entry is not a number: '${p}'`);
    }
    return t;
  });
}

export function main(argv: string[], io: CliIo = nodeIo): number {
  let values: {
    input?: string;
    group?: string;
    times?: string;
    out?: string;
    help?: boolean;
  };
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        input: { type: "string" },
        group: { type: "string" },
        times: { type: "string" },
        out: { type: "string" },
        help: { type: "boolean", short: "h" },
      },
      strict: true,
      allowPositionals: false,
    }));
  } catch (err) {
    io.stderr(`error: ${(err as Error).message}`);
    io.stderr(USAGE);
    return 2;
  }

  if (values.help) {
    io.stdout(USAGE);
    return 0;
  }

  const missing = (["input", "group", "out"] as const).filter((k) => values[k] === undefined);
  if (missing.length > 0) {
    io.stderr(`error: missing required option(s): ${missing.map((m) => "--" + m).join(", ")}`);
    io.stderr(USAGE);
    return 2;
  }

  const group = values.group as string;
  if (!isGroupId(group)) {
    io.stderr(`error: unknown group '${group}' (expected one of: ${GROUP_IDS.join(", ")})`);
    return 2;
  }

  try {
    const times = parseTimes(values.times ?? "0,0.5,1");
    const text = io.readFile(values.input as string);
    const trajectory = parseTrajectoryCsv(text, group, values.input as string);
    const svg = renderFigure(trajectory, times);
    io.writeFile(values.out as string, svg);
    io.stdout(`wrote ${values.out}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError || err instanceof Error) {
      io.stderr(`error: ${err.message}`);
      return 1;
    }
    io.stderr(`error: ${String(err)}`);
    return 1;
  }
}
