/**
 * Release criterion for the bindings: on 100 random chunks, tokens from
 * the binding equal CLI tokens exactly, and binding decode matches CLI
 * decode to 1e-12. The binding and the CLI exchange data only through the
 * documented file formats, so these should be literal equalities.
 */

import { mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import {
  ActionChunk,
  readCorpusFile,
  readTokenFile,
  runCli,
  Tokenizer,
} from "../src/index.js";

let dir: string;
let modelPath: string;
let cliTokensPath: string;
let chunks: ActionChunk[];
let cliTokens: number[][];
let tokenizer: Tokenizer;

beforeAll(async () => {
  dir = await mkdtemp(join(tmpdir(), "actok-parity-"));
  const corpusPath = join(dir, "corpus.jsonl");
  modelPath = join(dir, "model.json");
  cliTokensPath = join(dir, "cli-tokens.jsonl");
  await runCli([
    "gen-corpus", "-o", corpusPath,
    "--n-chunks", "100", "--rate", "20", "--dims", "3", "--seed", "7",
  ]);
  await runCli(["fit", corpusPath, "-o", modelPath, "--vocab", "512"]);
  await runCli(["encode", modelPath, corpusPath, "-o", cliTokensPath]);
  chunks = await readCorpusFile(corpusPath);
  cliTokens = await readTokenFile(cliTokensPath);
  tokenizer = await Tokenizer.load(modelPath);
});

afterAll(async () => {
  await rm(dir, { recursive: true, force: true });
});

describe("binding/CLI parity on 100 chunks", () => {
  it("produces token-for-token identical encodings", async () => {
    expect(chunks).toHaveLength(100);
    const bindingTokens = await tokenizer.encodeBatch(chunks);
    expect(bindingTokens).toEqual(cliTokens);
  });

  it("single-chunk encode matches the batch path", async () => {
    const single = await tokenizer.encode(chunks[0]!);
    expect(single).toEqual(cliTokens[0]);
  });

  it("decodes within 1e-12 of the CLI decode", async () => {
    const cliDecodedPath = join(dir, "cli-decoded.jsonl");
    await runCli(["decode", modelPath, cliTokensPath, "-o", cliDecodedPath]);
    const cliDecoded = await readCorpusFile(cliDecodedPath);
    const bindingDecoded = await tokenizer.decodeBatch(cliTokens);
    expect(bindingDecoded).toHaveLength(cliDecoded.length);
    let worst = 0;
    for (let i = 0; i < cliDecoded.length; i++) {
      const a = cliDecoded[i]!;
      const b = bindingDecoded[i]!;
      expect(b.frequencyHz).toBe(a.frequencyHz);
      expect(b.actions.length).toBe(a.actions.length);
      for (let t = 0; t < a.actions.length; t++) {
        for (let d = 0; d < a.actions[t]!.length; d++) {
          worst = Math.max(worst,
            Math.abs(a.actions[t]![d]! - b.actions[t]![d]!));
        }
      }
    }
    expect(worst).toBeLessThanOrEqual(1e-12);
  });
});
