/** Spawns the actok CLI and converts failures into typed errors. */

import { execFile } from "node:child_process";
import { promisify } from "node:util";

import { errorFromStderr, InternalError } from "./errors.js";

const execFileAsync = promisify(execFile);

export interface RunResult {
  stdout: string;
  stderr: string;
}

let resolved: string[] | null = null;

/**
 * The CLI to drive: `ACTOK_BIN` (whitespace-split) when set, the installed
 * `actok` entry point when present, `python3 -m actok` otherwise. Resolved
 * once per process.
 */
async function resolveCommand(): Promise<string[]> {
  if (resolved) return resolved;
  const fromEnv = process.env["ACTOK_BIN"];
  const candidates = fromEnv
    ? [fromEnv.split(/\s+/)]
    : [["actok"], ["python3", "-m", "actok"]];
  for (const candidate of candidates) {
    try {
      await execFileAsync(candidate[0]!, [...candidate.slice(1), "--version"]);
      resolved = candidate;
      return candidate;
    } catch (err) {
      if ((err as NodeJS.ErrnoException).code === "ENOENT") continue;
      throw err;
    }
  }
  throw new InternalError(
    "actok CLI not found; install the Python package or set ACTOK_BIN",
    -1,
  );
}

export async function runCli(args: string[]): Promise<RunResult> {
  const command = await resolveCommand();
  try {
    const { stdout, stderr } = await execFileAsync(
      command[0]!,
      [...command.slice(1), ...args],
      { maxBuffer: 256 * 1024 * 1024 },
    );
    return { stdout, stderr };
  } catch (err) {
    const failure = err as NodeJS.ErrnoException & {
      code?: number | string;
      stderr?: string;
    };
    if (typeof failure.code === "number" && failure.stderr !== undefined) {
      throw errorFromStderr(failure.stderr, failure.code);
    }
    throw err;
  }
}
