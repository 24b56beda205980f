#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { FigureKind } from "./figure.js";
import { renderCsvFile } from "./render.js";

yargs(hideBin(process.argv))
  .scriptName("nfbm-figures")
  .command(
    "render",
    "Render a sweep CSV to an SVG figure",
    (args) =>
      args
        .option("csv", { type: "string", demandOption: true, describe: "Input sweep CSV" })
        .option("kind", {
          choices: ["dof", "snr", "distance"] as const,
          demandOption: true,
          describe: "Figure kind (matches the sweep that made the CSV)",
        })
        .option("out", { type: "string", demandOption: true, describe: "Output SVG path" })
        .option("width", { type: "number", default: 860 })
        .option("height", { type: "number", default: 520 }),
    (argv) => {
      try {
        const result = renderCsvFile(argv.csv, argv.kind as FigureKind, argv.out, {
          width: argv.width,
          height: argv.height,
        });
        console.log(
          `wrote ${result.outPath} (${result.seriesCount} series, ${result.pointCount} points)`,
        );
      } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        process.exit(1);
      }
    },
  )
  .demandCommand(1)
  .strict()
  .help()
  .parse();
