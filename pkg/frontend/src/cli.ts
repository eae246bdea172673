#!/usr/bin/env node
/**
 * paleylab-plots <scaling|bias> <input.csv> <output.svg>
 */

import { readFileSync, writeFileSync } from "fs";
import { EmptyInput, SchemaMismatch } from "./csv.js";
import { plotBias } from "./bias.js";
import { plotScaling } from "./scaling.js";

export function main(argv: string[]): number {
  if (argv.length !== 3 || !["scaling", "bias"].includes(argv[0])) {
    console.error("usage: paleylab-plots <scaling|bias> <input.csv> <output.svg>");
    return 2;
  }
  const [kind, input, output] = argv;
  let text: string;
  try {
    text = readFileSync(input, "utf-8");
  } catch (err) {
    console.error(`cannot read ${input}: ${err}`);
    return 2;
  }
  try {
    const svg = kind === "scaling" ? plotScaling(text) : plotBias(text);
    writeFileSync(output, svg, { encoding: "utf-8" });
    return 0;
  } catch (err) {
    if (err instanceof SchemaMismatch || err instanceof EmptyInput) {
      console.error(`bad input: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
