/**
 * CLI: render --in <artifact_dir> --out <fig_dir> [--only fig1,fig3]
 * Exit 0 when every requested figure rendered, 1 on usage error, 2 when
 * any figure was skipped (missing or empty inputs).
 */

import { renderAll } from "./render.js";

function usage(): never {
  console.error("usage: render --in <artifact_dir> --out <fig_dir> [--only fig1,fig2,...]");
  process.exit(1);
}

export function main(argv: string[]): number {
  if (argv.length === 0 || argv[0] !== "render") usage();
  let inDir: string | undefined;
  let outDir: string | undefined;
  let only: string[] | undefined;
  for (let i = 1; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--in") inDir = argv[++i];
    else if (arg === "--out") outDir = argv[++i];
    else if (arg === "--only") only = (argv[++i] ?? "").split(",").filter(Boolean);
    else usage();
  }
  if (!inDir || !outDir) usage();

  let result;
  try {
    result = renderAll(inDir, outDir, only);
  } catch (err) {
    console.error(String(err));
    return 1;
  }
  for (const path of result.written) console.log(`wrote ${path}`);
  for (const skip of result.skipped) console.error(`skipped ${skip.id}: ${skip.reason}`);
  return result.skipped.length > 0 ? 2 : 0;
}

const isDirectRun = process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop() ?? "");
if (isDirectRun) {
  process.exit(main(process.argv.slice(2)));
}
