"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data or file-format error,
3 internal error. Error messages go to stderr as
``actok: <ErrorClass>: <message>``.
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from . import __version__
from .bench import (
    evaluate_fast,
    evaluate_naive,
    gen_spline_corpus,
    sweep_gamma,
    sweep_rate,
)
from .core import ActokError, ChunkCorpus, DimMismatchError
from .formats import (
    load_corpus,
    load_model,
    load_token_file,
    render_table,
    save_corpus,
    save_model,
    save_report,
    save_token_file,
)
from .normalize import fit_normalization
from .pipeline import (
    DEFAULT_GAMMA,
    DEFAULT_PAD_DIM,
    DEFAULT_VOCAB,
    BinningConfig,
    _pad_chunk,
    chunk_to_stream,
    decode_tokens,
    fit_tokenizer,
    fit_universal_tokenizer,
    naive_token_count,
)
from .bpe import bpe_encode_batch

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # raise instead of sys.exit(2)
        raise UsageError(message)


def _parse_shape(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)[x,](\d+)", text)
    if not m:
        raise UsageError(f"--shape must look like HxD, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc
    if not values:
        raise UsageError(f"{flag} needs at least one value")
    return values


def _encode_streams(corpus: ChunkCorpus, model) -> list:
    """Per-record pre-BPE streams, errors annotated with the record index."""
    streams = []
    for idx, chunk in enumerate(corpus):
        try:
            if model.pad_dim is not None:
                chunk = _pad_chunk(chunk, model.pad_dim)
            elif chunk.dim != model.stats.dim:
                raise DimMismatchError(
                    f"chunk has D={chunk.dim}, model expects "
                    f"D={model.stats.dim}")
            streams.append(chunk_to_stream(chunk, model.stats,
                                           model.quantizer))
        except ActokError as exc:
            raise type(exc)(f"record {idx}: {exc}") from exc
    return streams


def cmd_fit(args) -> int:
    if len(args.corpus) > 1 and not args.universal:
        raise UsageError("multiple corpus files require --universal")
    if args.weights is not None and not args.universal:
        raise UsageError("--weights requires --universal")
    weights = [1.0] * len(args.corpus)
    if args.weights is not None:
        weights = _parse_floats(args.weights, "--weights")
        if len(weights) != len(args.corpus):
            raise UsageError(
                f"{len(weights)} weights for {len(args.corpus)} corpora")
    corpora = [load_corpus(path, weight=w)
               for path, w in zip(args.corpus, weights)]
    if args.universal:
        model = fit_universal_tokenizer(
            corpora, gamma=args.gamma, max_vocab=args.vocab,
            pad_dim=args.pad_dim)
    else:
        model = fit_tokenizer(corpora[0], gamma=args.gamma,
                              max_vocab=args.vocab)
    save_model(model, args.out)
    streams = [s for corpus in corpora
               for s in _encode_streams(corpus, model)]
    counts = [len(t) for t in bpe_encode_batch(streams, model.merges)]
    print(f"fit {len(streams)} chunks -> {args.out}")
    print(f"vocab {model.vocab_size}  gamma {model.quantizer.gamma:g}  "
          f"default shape {model.default_shape[0]}x{model.default_shape[1]}")
    print(f"mean token count on fitting corpus: {np.mean(counts):.2f}")
    return EXIT_OK


def cmd_encode(args) -> int:
    model = load_model(args.model)
    corpus = load_corpus(args.corpus)
    sequences = bpe_encode_batch(_encode_streams(corpus, model), model.merges)
    save_token_file(sequences, args.out)
    print(f"encoded {len(sequences)} records -> {args.out}")
    return EXIT_OK


def cmd_decode(args) -> int:
    model = load_model(args.model)
    sequences = load_token_file(args.tokens)
    shape = _parse_shape(args.shape) if args.shape else None
    chunks = []
    failures = []
    for idx, seq in enumerate(sequences):
        try:
            chunks.append(decode_tokens(seq, model, shape=shape))
        except ActokError as exc:
            failures.append((idx, exc))
    if failures:
        for idx, exc in failures:
            print(f"actok: record {idx}: {type(exc).__name__}: {exc}",
                  file=sys.stderr)
        print(f"actok: {len(failures)} of {len(sequences)} records failed; "
              f"no output written", file=sys.stderr)
        return EXIT_DATA
    save_corpus(ChunkCorpus(tuple(chunks), name="decoded"), args.out)
    print(f"decoded {len(chunks)} records -> {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import BenchReport

    if args.model is None and not args.baseline:
        raise UsageError("bench needs --model and/or --baseline")
    corpus = load_corpus(args.corpus)
    rows = []
    model = None
    if args.model is not None:
        model = load_model(args.model)
        rows.append(evaluate_fast(corpus, model, label="fast"))
    if args.baseline:
        stats = model.stats if model is not None else fit_normalization(corpus)
        cfg = BinningConfig(n_bins=args.bins)
        rows.append(evaluate_naive(corpus, stats, cfg))
        freq = corpus.chunks[0].frequency_hz
        print(f"binning accounting at {freq:g} Hz, D={corpus.dim}, 1 s: "
              f"{naive_token_count(freq, corpus.dim)} tokens/chunk")
    report = BenchReport(axis="corpus", rows=tuple(rows))
    sys.stdout.write(render_table(report))
    if args.out:
        save_report(report, args.out)
        print(f"report -> {args.out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.gammas is not None:
        if args.corpus is None:
            raise UsageError("--gammas sweeps need a corpus file")
        corpus = load_corpus(args.corpus)
        gammas = _parse_floats(args.gammas, "--gammas")
        report = sweep_gamma(corpus, gammas, max_vocab=args.vocab)
    else:
        if args.corpus is not None:
            raise UsageError(
                "--rates sweeps generate their own corpus; drop the "
                "corpus argument and use --n-chunks/--dims/--seed")
        rates = [int(r) for r in _parse_floats(args.rates, "--rates")]
        report = sweep_rate(rates, n_chunks=args.n_chunks, seed=args.seed,
                            gamma=args.gamma, max_vocab=args.vocab,
                            dims=args.dims)
    sys.stdout.write(render_table(report))
    if args.out:
        save_report(report, args.out)
        print(f"report -> {args.out}")
    return EXIT_OK


def cmd_gen_corpus(args) -> int:
    corpus = gen_spline_corpus(args.n_chunks, args.rate, args.seed,
                               dims=args.dims)
    save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} chunks (H={args.rate}, D={args.dims}) "
          f"-> {args.out}")
    return EXIT_OK


def cmd_info(args) -> int:
    model = load_model(args.model)
    print(f"vocab_size     {model.vocab_size}")
    print(f"merges         {len(model.merges.merges)}")
    print(f"base_alphabet  {model.merges.base_size}")
    print(f"gamma          {model.quantizer.gamma:g}")
    print(f"clamp          {model.quantizer.clamp}")
    print(f"default_shape  {model.default_shape[0]}x{model.default_shape[1]}")
    print(f"pad_dim        {model.pad_dim}")
    for key in sorted(model.metadata):
        print(f"metadata.{key}  {model.metadata[key]}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="actok",
                     description="Action-chunk tokenizer: frequency-space "
                                 "compression with a BPE back end.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a tokenizer on corpus file(s)")
    fit.add_argument("corpus", nargs="+", help="corpus file(s), JSONL")
    fit.add_argument("-o", "--out", required=True, help="model output path")
    fit.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    fit.add_argument("--vocab", type=int, default=DEFAULT_VOCAB)
    fit.add_argument("--universal", action="store_true",
                     help="pad all corpora to a shared width and fit one "
                          "weighted tokenizer")
    fit.add_argument("--pad-dim", type=int, default=DEFAULT_PAD_DIM)
    fit.add_argument("--weights", default=None,
                     help="comma-separated per-corpus mixture weights")
    fit.set_defaults(func=cmd_fit)

    enc = sub.add_parser("encode", help="tokenize a corpus with a model")
    enc.add_argument("model")
    enc.add_argument("corpus")
    enc.add_argument("-o", "--out", required=True)
    enc.set_defaults(func=cmd_encode)

    dec = sub.add_parser("decode", help="reconstruct chunks from tokens")
    dec.add_argument("model")
    dec.add_argument("tokens")
    dec.add_argument("-o", "--out", required=True)
    dec.add_argument("--shape", default=None,
                     help="output HxD (default: model's default shape)")
    dec.set_defaults(func=cmd_decode)

    ben = sub.add_parser("bench", help="evaluate tokenizers on a corpus")
    ben.add_argument("corpus")
    ben.add_argument("--model", default=None)
    ben.add_argument("--baseline", action="store_true",
                     help="also evaluate per-timestep uniform binning")
    ben.add_argument("--bins", type=int, default=256)
    ben.add_argument("-o", "--out", default=None, help="report JSON path")
    ben.set_defaults(func=cmd_bench)

    sw = sub.add_parser("sweep", help="gamma or sampling-rate sweeps")
    sw.add_argument("corpus", nargs="?", default=None,
                    help="corpus file (--gammas mode only)")
    grid = sw.add_mutually_exclusive_group(required=True)
    grid.add_argument("--gammas", default=None,
                      help="comma-separated rounding scales")
    grid.add_argument("--rates", default=None,
                      help="comma-separated sampling rates (synthetic corpus)")
    sw.add_argument("--vocab", type=int, default=DEFAULT_VOCAB)
    sw.add_argument("--gamma", type=float, default=DEFAULT_GAMMA,
                    help="rounding scale for --rates mode")
    sw.add_argument("--n-chunks", type=int, default=256)
    sw.add_argument("--dims", type=int, default=1)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("-o", "--out", default=None, help="report JSON path")
    sw.set_defaults(func=cmd_sweep)

    gen = sub.add_parser("gen-corpus", help="write a synthetic spline corpus")
    gen.add_argument("-o", "--out", required=True)
    gen.add_argument("--n-chunks", type=int, required=True)
    gen.add_argument("--rate", type=int, required=True)
    gen.add_argument("--dims", type=int, default=1)
    gen.add_argument("--seed", type=int, default=0)
    gen.set_defaults(func=cmd_gen_corpus)

    info = sub.add_parser("info", help="print a model file summary")
    info.add_argument("model")
    info.set_defaults(func=cmd_info)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"actok: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"actok: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ActokError, OSError) as exc:
        print(f"actok: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:  # config validation (bad gamma, vocab, ...)
        print(f"actok: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"actok: internal error: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
