#!/usr/bin/env node
/** Command entry: regenerate a figure from a simulator output directory.
 *
 * Usage:
 *   uscqed-figures fig2 <data_dir> [out_dir]
 *   uscqed-figures fig3 <data_dir> [out_dir]
 *   uscqed-figures all  <data_dir> [out_dir]
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { buildFig2, buildFig3 } from "./figures.js";

const BUILDERS: Record<string, (dir: string) => { svg: string; annotations: Record<string, number> }> = {
  fig2: buildFig2,
  fig3: buildFig3,
};

export function main(argv: string[]): number {
  const [command, dataDir, outDirArg] = argv;
  if (!command || !dataDir || !(command in BUILDERS || command === "all")) {
    console.error("usage: uscqed-figures <fig2|fig3|all> <data_dir> [out_dir]");
    return 2;
  }
  const outDir = outDirArg ?? dataDir;
  const names = command === "all" ? Object.keys(BUILDERS) : [command];
  try {
    mkdirSync(outDir, { recursive: true });
    for (const name of names) {
      const { svg, annotations } = BUILDERS[name](dataDir);
      const path = join(outDir, `${name}.svg`);
      writeFileSync(path, svg);
      const tags = Object.entries(annotations)
        .map(([k, v]) => `${k}=${v.toFixed(4)}`)
        .join(", ");
      console.log(`${path}${tags ? ` (${tags})` : ""}`);
    }
  } catch (err) {
    console.error(`${(err as Error).name}: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

process.exit(main(process.argv.slice(2)));
