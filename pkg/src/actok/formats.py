"""On-disk formats: tokenizer models, corpora, token files, reports.

Model files are JSON with a sha256 checksum over the canonically encoded
payload (sorted keys, no whitespace), so identical fits produce
byte-identical files and any corruption is detected on load. Corpora and
token files are newline-delimited JSON for streamability. All writes go
through a temp file plus atomic rename; no partially written file is ever
observable at the target path.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

import numpy as np

from .bpe import MergeTable
from .coeff_codec import QuantizerConfig
from .core import (
    ActionChunk,
    ActokError,
    ChunkCorpus,
    CorpusFormatError,
    ModelFormatError,
    ModelIntegrityError,
    TokenSequence,
)
from .normalize import NormalizationStats
from .pipeline import FORMAT_VERSION, TokenizerModel


def _canonical(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False).encode("utf-8")


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _model_payload(model: TokenizerModel) -> dict:
    return {
        "stats": {
            "q_low": model.stats.q_low.tolist(),
            "q_high": model.stats.q_high.tolist(),
        },
        "quantizer": {
            "gamma": model.quantizer.gamma,
            "clamp": model.quantizer.clamp,
        },
        "merges": {
            "base_size": model.merges.base_size,
            "pairs": [list(p) for p in model.merges.merges],
        },
        "default_shape": list(model.default_shape),
        "pad_dim": model.pad_dim,
        "metadata": {str(k): str(v) for k, v in model.metadata.items()},
    }


def save_model(model: TokenizerModel, path: str) -> None:
    payload = _model_payload(model)
    checksum = hashlib.sha256(_canonical(payload)).hexdigest()
    doc = {
        "format": "actok-model",
        "format_version": model.format_version,
        "checksum": checksum,
        "payload": payload,
    }
    _atomic_write(path, json.dumps(doc, indent=1, sort_keys=True).encode()
                  + b"\n")


def load_model(path: str) -> TokenizerModel:
    try:
        with open(path, "rb") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("format") != "actok-model":
        raise ModelFormatError(f"{path}: not a tokenizer model file")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported format_version {version!r} "
            f"(this build reads version {FORMAT_VERSION})")
    payload = doc.get("payload")
    if not isinstance(payload, dict):
        raise ModelFormatError(f"{path}: missing payload")
    expected = doc.get("checksum")
    actual = hashlib.sha256(_canonical(payload)).hexdigest()
    if actual != expected:
        raise ModelIntegrityError(
            f"{path}: checksum mismatch (file {expected!r}, payload {actual})")
    try:
        stats = NormalizationStats(
            q_low=np.asarray(payload["stats"]["q_low"], dtype=np.float64),
            q_high=np.asarray(payload["stats"]["q_high"], dtype=np.float64))
        quantizer = QuantizerConfig(
            gamma=float(payload["quantizer"]["gamma"]),
            clamp=int(payload["quantizer"]["clamp"]))
        merges = MergeTable(
            base_size=int(payload["merges"]["base_size"]),
            merges=tuple((int(a), int(b))
                         for a, b in payload["merges"]["pairs"]))
        shape = payload["default_shape"]
        pad_dim = payload["pad_dim"]
        return TokenizerModel(
            stats=stats, quantizer=quantizer, merges=merges,
            default_shape=(int(shape[0]), int(shape[1])),
            pad_dim=None if pad_dim is None else int(pad_dim),
            format_version=int(version),
            metadata=dict(payload.get("metadata", {})))
    except ModelFormatError:
        raise
    except (KeyError, TypeError, IndexError, ValueError, ActokError) as exc:
        raise ModelFormatError(f"{path}: malformed payload: {exc}") from exc


def _parse_record(obj, line_no: int, path: str) -> ActionChunk:
    if not isinstance(obj, dict) or "actions" not in obj:
        raise CorpusFormatError(
            f"{path}:{line_no}: record must be an object with 'actions'")
    try:
        actions = np.asarray(obj["actions"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise CorpusFormatError(
            f"{path}:{line_no}: actions is not a numeric array: {exc}"
        ) from exc
    if actions.ndim == 1:
        actions = actions[:, None]
    if "frequency_hz" not in obj:
        raise CorpusFormatError(f"{path}:{line_no}: missing frequency_hz")
    try:
        return ActionChunk(actions, actions.shape[0], actions.shape[1],
                           float(obj["frequency_hz"]))
    except (ActokError, TypeError, ValueError) as exc:
        raise CorpusFormatError(f"{path}:{line_no}: {exc}") from exc


def load_corpus(path: str, name: str = "", weight: float = 1.0) -> ChunkCorpus:
    chunks = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(
                    f"{path}:{line_no}: not valid JSON: {exc}") from exc
            chunks.append(_parse_record(obj, line_no, path))
    try:
        return ChunkCorpus(tuple(chunks),
                           name=name or os.path.basename(path),
                           weight=weight)
    except ActokError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from exc


def save_corpus(corpus: ChunkCorpus, path: str) -> None:
    lines = []
    for chunk in corpus:
        record = {
            "actions": chunk.values.tolist(),
            "frequency_hz": chunk.frequency_hz,
        }
        lines.append(json.dumps(record, allow_nan=False))
    _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def load_token_file(path: str) -> list[TokenSequence]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                arr = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(
                    f"{path}:{line_no}: not valid JSON: {exc}") from exc
            if not isinstance(arr, list):
                raise CorpusFormatError(
                    f"{path}:{line_no}: expected a JSON array of token ids")
            ids = np.asarray(arr)
            if ids.size and (ids.dtype.kind not in "iu"
                             or ids.max() > np.iinfo(np.int32).max):
                raise CorpusFormatError(
                    f"{path}:{line_no}: token ids must be small integers")
            try:
                out.append(TokenSequence(ids.astype(np.int32)))
            except (ActokError, TypeError, ValueError) as exc:
                raise CorpusFormatError(f"{path}:{line_no}: {exc}") from exc
    return out


def save_token_file(sequences, path: str) -> None:
    lines = [json.dumps(seq.tokens.tolist()) for seq in sequences]
    _atomic_write(path, ("\n".join(lines) + "\n").encode("utf-8"))


def report_to_json(report) -> str:
    return json.dumps(report.to_dict(), indent=1, sort_keys=True) + "\n"


def save_report(report, path: str) -> None:
    _atomic_write(path, report_to_json(report).encode("utf-8"))


_TABLE_COLUMNS = (
    ("label", "{}"),
    ("rate", "{:g}"),
    ("dims", "{}"),
    ("gamma", "{:g}"),
    ("vocab", "{}"),
    ("mean_token_count", "{:.2f}"),
    ("mean_rms_error", "{:.6f}"),
    ("compression_ratio", "{:.2f}"),
)


def render_table(report) -> str:
    """Human-readable TSV-style table of a benchmark report."""
    header = [name for name, _ in _TABLE_COLUMNS]
    body = []
    for row in report.rows:
        cells = []
        for name, fmt in _TABLE_COLUMNS:
            value = getattr(row, name)
            cells.append("-" if value is None else fmt.format(value))
        body.append(cells)
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h)
              for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    for cells in body:
        lines.append("  ".join(c.ljust(w)
                               for c, w in zip(cells, widths)).rstrip())
    return "\n".join(lines) + "\n"
