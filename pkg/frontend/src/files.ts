/**
 * Readers/writers for the CLI's newline-delimited JSON files. JSON numbers
 * round-trip IEEE doubles exactly in both directions, so values written
 * here are bit-identical to what the Python side reads, and vice versa.
 */

import { readFile, writeFile } from "node:fs/promises";

export interface ActionChunk {
  /** Row-major `[timestep][dimension]` action values. */
  actions: number[][];
  frequencyHz: number;
}

interface CorpusRecord {
  actions: number[][];
  frequency_hz: number;
}

export async function writeCorpusFile(
  path: string,
  chunks: readonly ActionChunk[],
): Promise<void> {
  const lines = chunks.map((chunk) =>
    JSON.stringify({
      actions: chunk.actions,
      frequency_hz: chunk.frequencyHz,
    } satisfies CorpusRecord),
  );
  await writeFile(path, lines.join("\n") + "\n", "utf8");
}

export async function readCorpusFile(path: string): Promise<ActionChunk[]> {
  const text = await readFile(path, "utf8");
  const chunks: ActionChunk[] = [];
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const record = JSON.parse(line) as CorpusRecord;
    chunks.push({ actions: record.actions, frequencyHz: record.frequency_hz });
  }
  return chunks;
}

export async function writeTokenFile(
  path: string,
  sequences: readonly (readonly number[])[],
): Promise<void> {
  const lines = sequences.map((tokens) => JSON.stringify(tokens));
  await writeFile(path, lines.join("\n") + "\n", "utf8");
}

export async function readTokenFile(path: string): Promise<number[][]> {
  const text = await readFile(path, "utf8");
  return text
    .split("\n")
    .filter((line) => line.trim())
    .map((line) => JSON.parse(line) as number[]);
}
