#!/usr/bin/env node
/**
 * Batch figure renderer for campaign result directories.
 *
 * Usage:
 *   thzlink-figures render --in <dir> --out <dir> [--formats svg,png]
 *
 * Exit codes: 0 success, 2 usage or input error (missing file, schema
 * mismatch, unknown format), 1 unexpected failure.
 */

import yargs from "yargs";

import { loadResults, LoadError } from "./csv";
import { Format, renderAll } from "./render";

const FORMATS: Format[] = ["svg", "png"];

export function parseFormats(raw: string): Format[] {
  const parts = raw
    .split(",")
    .map((p) => p.trim().toLowerCase())
    .filter((p) => p !== "");
  if (parts.length === 0) {
    throw new LoadError(`--formats lists no formats: "${raw}"`);
  }
  for (const p of parts) {
    if (!FORMATS.includes(p as Format)) {
      throw new LoadError(
        `unknown format "${p}" (supported: ${FORMATS.join(", ")})`
      );
    }
  }
  return FORMATS.filter((f) => parts.includes(f));
}

export async function runCli(argv: string[]): Promise<number> {
  const parser = yargs(argv)
    .scriptName("thzlink-figures")
    .command("render", "Render figures from a campaign result directory", (y) =>
      y
        .option("in", {
          type: "string",
          describe: "Directory containing the campaign CSV outputs",
          demandOption: true,
        })
        .option("out", {
          type: "string",
          describe: "Directory to write figures into",
          demandOption: true,
        })
        .option("formats", {
          type: "string",
          describe: "Comma-separated output formats (svg, png)",
          default: "svg",
        })
    )
    .demandCommand(1, "specify a command (render)")
    .strict()
    .help()
    .exitProcess(false)
    .fail((msg, err) => {
      throw err ?? new LoadError(msg);
    });

  try {
    const args = await parser.parse();
    const command = String(args._[0]);
    if (command !== "render") {
      process.stderr.write(`unknown command: ${command}\n`);
      return 2;
    }
    const formats = parseFormats(String(args.formats));
    const tables = loadResults(String(args.in));
    const written = renderAll(tables, String(args.out), formats);
    for (const file of written) {
      console.log(`wrote ${file}`);
    }
    return 0;
  } catch (e) {
    const err = e as Error;
    process.stderr.write(`${err.message || err}\n`);
    const inputError =
      err instanceof LoadError ||
      err.name === "EmptyTableError" ||
      err.name === "YError";
    return inputError ? 2 : 1;
  }
}

if (require.main === module) {
  runCli(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
