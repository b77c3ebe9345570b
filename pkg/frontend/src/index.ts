export { Tokenizer } from "./tokenizer.js";
export type { FitOptions, ModelInfo } from "./tokenizer.js";
export type { ActionChunk } from "./files.js";
export {
  readCorpusFile,
  readTokenFile,
  writeCorpusFile,
  writeTokenFile,
} from "./files.js";
export { runCli } from "./runner.js";
export {
  ActokError,
  CorpusFormatError,
  DimMismatchError,
  DimTooLargeError,
  EmptyCorpusError,
  InternalError,
  LengthMismatchError,
  ModelFormatError,
  ModelIntegrityError,
  ShapeError,
  SymbolOutOfRangeError,
  TokenOutOfRangeError,
  UsageError,
} from "./errors.js";
