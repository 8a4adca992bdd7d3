/**
 * Render the four standard figures from a run export directory:
 *   node dist/cli.js <export-dir> [out-dir]
 * Writes <out-dir>/<figure-kind>.svg (out-dir defaults to the export dir).
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { FIGURE_KINDS, renderFigure } from "./charts";
import { MissingColumnError, loadRunExport } from "./data";

function main(argv: string[]): number {
  const [exportDir, outDir = exportDir] = argv;
  if (!exportDir) {
    console.error("usage: cli.js <export-dir> [out-dir]");
    return 2;
  }
  let run;
  try {
    run = loadRunExport(exportDir);
  } catch (err) {
    if (err instanceof MissingColumnError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
  mkdirSync(outDir, { recursive: true });
  for (const kind of FIGURE_KINDS) {
    const svg = renderFigure(kind, run);
    const path = join(outDir, `${kind}.svg`);
    writeFileSync(path, svg);
    console.error(`wrote ${path}`);
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
