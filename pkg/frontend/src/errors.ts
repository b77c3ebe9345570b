/**
 * Error taxonomy mirroring the CLI's. Failures surface on stderr as
 * `actok: <ErrorClass>: <message>` (usage problems as
 * `actok: usage error: ...`); the runner maps the class name back to the
 * matching typed error here, so callers can `instanceof`-dispatch exactly
 * as Python callers `except` on the originals.
 */

export class ActokError extends Error {
  readonly exitCode: number;
  readonly stderr: string;

  constructor(message: string, exitCode: number, stderr = "") {
    super(message);
    this.name = new.target.name;
    this.exitCode = exitCode;
    this.stderr = stderr;
  }
}

export class UsageError extends ActokError {}

export class DimMismatchError extends ActokError {}
export class DimTooLargeError extends ActokError {}
export class LengthMismatchError extends ActokError {}
export class EmptyCorpusError extends ActokError {}
export class ShapeError extends ActokError {}
export class SymbolOutOfRangeError extends ActokError {}
export class TokenOutOfRangeError extends ActokError {}
export class CorpusFormatError extends ActokError {}
export class ModelFormatError extends ActokError {}
export class ModelIntegrityError extends ModelFormatError {}

/** CLI exited 3 or produced stderr the parser does not recognize. */
export class InternalError extends ActokError {}

const REGISTRY: Record<string, typeof ActokError> = {
  ActokError,
  UsageError,
  DimMismatchError,
  DimTooLargeError,
  LengthMismatchError,
  EmptyCorpusError,
  ShapeError,
  SymbolOutOfRangeError,
  TokenOutOfRangeError,
  CorpusFormatError,
  ModelFormatError,
  ModelIntegrityError,
};

const LINE = /^actok: (?:record \d+: )?([A-Za-z]+): (.*)$/;
const USAGE = /^actok: usage error: (.*)$/;
const INTERNAL = /^actok: internal error: (.*)$/;

/** Build the typed error for a failed CLI run from its stderr text. */
export function errorFromStderr(stderr: string, exitCode: number): ActokError {
  const lines = stderr.split("\n").filter((l) => l.trim().length > 0);
  for (const line of lines) {
    const usage = USAGE.exec(line);
    if (usage) return new UsageError(usage[1]!, exitCode, stderr);
    const internal = INTERNAL.exec(line);
    if (internal) return new InternalError(internal[1]!, exitCode, stderr);
    const match = LINE.exec(line);
    if (match) {
      const cls = REGISTRY[match[1]!] ?? ActokError;
      return new cls(match[2]!, exitCode, stderr);
    }
  }
  return new InternalError(
    stderr.trim() || `actok exited with code ${exitCode}`,
    exitCode,
    stderr,
  );
}
