/**
 * Opaque handle over a tokenizer model file. All work happens in the
 * Python CLI; this class only shuttles chunks and token lists through the
 * documented file formats, so every output is identical to a direct CLI
 * call. Handles are immutable after construction and safe to share for
 * encode/decode.
 */

import { copyFile, mkdtemp, rm } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";

import {
  ActionChunk,
  readCorpusFile,
  readTokenFile,
  writeCorpusFile,
  writeTokenFile,
} from "./files.js";
import { runCli } from "./runner.js";

export interface FitOptions {
  /** Coefficient rounding scale; larger is more precise. Default 10. */
  gamma?: number;
  /** Merge-vocabulary budget. Default 1024. */
  vocab?: number;
}

export interface ModelInfo {
  vocabSize: number;
  merges: number;
  baseAlphabet: number;
  gamma: number;
  clamp: number;
  defaultShape: [number, number];
  padDim: number | null;
  metadata: Record<string, string>;
}

async function inTempDir<T>(fn: (dir: string) => Promise<T>): Promise<T> {
  const dir = await mkdtemp(join(tmpdir(), "actok-"));
  try {
    return await fn(dir);
  } finally {
    await rm(dir, { recursive: true, force: true });
  }
}

export class Tokenizer {
  /** Path of the model file backing this handle. */
  readonly modelPath: string;

  private readonly ownedDir: string | null;

  private constructor(modelPath: string, ownedDir: string | null) {
    this.modelPath = modelPath;
    this.ownedDir = ownedDir;
  }

  /** Open an existing model file; validation (checksum, version) is the
   * CLI's, surfaced as typed errors. */
  static async load(modelPath: string): Promise<Tokenizer> {
    await runCli(["info", modelPath]);
    return new Tokenizer(modelPath, null);
  }

  /** Fit a fresh model on the given chunks. The model lives in a temp
   * directory until `save`; call `dispose` when done with the handle. */
  static async fit(
    chunks: readonly ActionChunk[],
    options: FitOptions = {},
  ): Promise<Tokenizer> {
    const dir = await mkdtemp(join(tmpdir(), "actok-model-"));
    try {
      const corpusPath = join(dir, "corpus.jsonl");
      const modelPath = join(dir, "model.json");
      await writeCorpusFile(corpusPath, chunks);
      const args = ["fit", corpusPath, "-o", modelPath];
      if (options.gamma !== undefined) {
        args.push("--gamma", String(options.gamma));
      }
      if (options.vocab !== undefined) {
        args.push("--vocab", String(options.vocab));
      }
      await runCli(args);
      await rm(corpusPath, { force: true });
      return new Tokenizer(modelPath, dir);
    } catch (err) {
      await rm(dir, { recursive: true, force: true });
      throw err;
    }
  }

  async encode(chunk: ActionChunk): Promise<number[]> {
    const [tokens] = await this.encodeBatch([chunk]);
    return tokens!;
  }

  /** One CLI invocation for the whole batch; order is preserved. */
  async encodeBatch(chunks: readonly ActionChunk[]): Promise<number[][]> {
    if (chunks.length === 0) return [];
    return inTempDir(async (dir) => {
      const corpusPath = join(dir, "corpus.jsonl");
      const tokensPath = join(dir, "tokens.jsonl");
      await writeCorpusFile(corpusPath, chunks);
      await runCli(["encode", this.modelPath, corpusPath, "-o", tokensPath]);
      return readTokenFile(tokensPath);
    });
  }

  async decode(
    tokens: readonly number[],
    shape?: readonly [number, number],
  ): Promise<ActionChunk> {
    const [chunk] = await this.decodeBatch([tokens], shape);
    return chunk!;
  }

  async decodeBatch(
    sequences: readonly (readonly number[])[],
    shape?: readonly [number, number],
  ): Promise<ActionChunk[]> {
    if (sequences.length === 0) return [];
    return inTempDir(async (dir) => {
      const tokensPath = join(dir, "tokens.jsonl");
      const outPath = join(dir, "decoded.jsonl");
      await writeTokenFile(tokensPath, sequences);
      const args = ["decode", this.modelPath, tokensPath, "-o", outPath];
      if (shape) args.push("--shape", `${shape[0]}x${shape[1]}`);
      await runCli(args);
      return readCorpusFile(outPath);
    });
  }

  /** Copy the model file to `path`, byte for byte. */
  async save(path: string): Promise<void> {
    await copyFile(this.modelPath, path);
  }

  /** Parsed `actok info` output. */
  async info(): Promise<ModelInfo> {
    const { stdout } = await runCli(["info", this.modelPath]);
    const fields = new Map<string, string>();
    for (const line of stdout.split("\n")) {
      const match = /^(\S+)\s+(.*)$/.exec(line);
      if (match) fields.set(match[1]!, match[2]!);
    }
    const shape = fields.get("default_shape")!.split("x").map(Number);
    const metadata: Record<string, string> = {};
    for (const [key, value] of fields) {
      if (key.startsWith("metadata.")) {
        metadata[key.slice("metadata.".length)] = value;
      }
    }
    const padDim = fields.get("pad_dim")!;
    return {
      vocabSize: Number(fields.get("vocab_size")),
      merges: Number(fields.get("merges")),
      baseAlphabet: Number(fields.get("base_alphabet")),
      gamma: Number(fields.get("gamma")),
      clamp: Number(fields.get("clamp")),
      defaultShape: [shape[0]!, shape[1]!],
      padDim: padDim === "None" ? null : Number(padDim),
      metadata,
    };
  }

  /** Delete the temp directory of a `fit`-created handle (no-op for
   * `load`-created ones). The handle is unusable afterwards. */
  async dispose(): Promise<void> {
    if (this.ownedDir) {
      await rm(this.ownedDir, { recursive: true, force: true });
    }
  }
}
