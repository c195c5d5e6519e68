/** Command line: render one figure from qudisc CSV output.
 *
 *   node dist/cli.js --figure 3 --input curve.csv --output fig3.svg
 *
 * Figures 1-3 take exactly one curve CSV; figures 4-5 take one sweep CSV
 * per series.  Exit 0 on success, 1 on missing or invalid input data,
 * 2 on usage errors.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";

import { FigureError } from "./csv.js";
import { FigureSpec, renderFigure } from "./figures.js";

export function run(argv: string[]): number {
  let figure: string | undefined;
  let inputs: string[] | undefined;
  let output: string | undefined;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        figure: { type: "string" },
        input: { type: "string", multiple: true },
        output: { type: "string" },
      },
      allowPositionals: false,
    });
    figure = values.figure;
    inputs = values.input;
    output = values.output;
  } catch (cause) {
    console.error(`error: ${(cause as Error).message}`);
    return 2;
  }

  const id = Number(figure);
  if (!figure || !Number.isInteger(id) || id < 1 || id > 5) {
    console.error("error: --figure must be 1..5");
    return 2;
  }
  if (!inputs || inputs.length === 0) {
    console.error("error: at least one --input CSV is required");
    return 2;
  }
  if (!output) {
    console.error("error: --output path is required");
    return 2;
  }
  if (id <= 3 && inputs.length !== 1) {
    console.error(`error: figure ${id} takes exactly one --input`);
    return 2;
  }

  const spec: FigureSpec = { figure: id as FigureSpec["figure"], inputs, output };
  try {
    writeFileSync(output, renderFigure(spec), "utf8");
  } catch (cause) {
    if (cause instanceof FigureError) {
      console.error(`error: ${cause.message}`);
      return 1;
    }
    throw cause;
  }
  return 0;
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
  process.exitCode = run(process.argv.slice(2));
}
