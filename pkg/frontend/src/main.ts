import { readFileSync } from "node:fs";
import { argv, exit, stderr, stdout } from "node:process";

import { FigureSpec, renderToFile } from "./render.js";

function usage(): never {
  stderr.write("usage: render --spec <figure-spec.json>\n");
  exit(2);
}

function main(): void {
  const args = argv.slice(2);
  const at = args.indexOf("--spec");
  if (at < 0 || at + 1 >= args.length) usage();
  const specPath = args[at + 1]!;
  let spec: FigureSpec;
  try {
    spec = JSON.parse(readFileSync(specPath, "utf8")) as FigureSpec;
  } catch (e) {
    stderr.write(`cannot read figure spec: ${(e as Error).message}\n`);
    exit(1);
  }
  try {
    const result = renderToFile(spec);
    stdout.write(`wrote ${spec.output}`);
    if (result.empiricalModeBin !== undefined) {
      stdout.write(
        ` (mode bins: empirical ${result.empiricalModeBin}, ` +
          `analytic ${result.analyticModeBin}, width ${result.binWidth})`,
      );
    }
    stdout.write("\n");
  } catch (e) {
    stderr.write(`render failed: ${(e as Error).message}\n`);
    exit(1);
  }
}

main();
