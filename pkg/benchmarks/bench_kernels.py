"""Timing comparison between the merge-kernel backends.

The pipeline's hot loop is pair replacement over int32 symbol buffers
(once per merge during training, once per merge per stream when
encoding). This script times the compiled extension against the numpy
fallback on realistic inputs: flattened 50 Hz, D=14 spline chunks packed
into one sentinel-separated buffer. Outputs are also compared, so the
benchmark doubles as a coarse parity check.

Run from the repository root:

    python3 benchmarks/bench_kernels.py --chunks 256 --repeats 5
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from actok import fit_tokenizer, gen_spline_corpus
from actok import _kernels
from actok.bpe import train_bpe
from actok.pipeline import chunk_to_stream


def _best_of(repeats: int, fn) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def build_workload(n_chunks: int, vocab: int, seed: int):
    corpus = gen_spline_corpus(n_chunks, 50, seed=seed, dims=14)
    model = fit_tokenizer(corpus, max_vocab=vocab)
    streams = [chunk_to_stream(c, model.stats, model.quantizer)
               for c in corpus]
    parts = []
    for s in streams:
        parts.append(s.symbols)
        parts.append(np.array([-1], dtype=np.int32))
    packed = np.concatenate(parts[:-1])
    return streams, packed, model.merges


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    parser.add_argument("--chunks", type=int, default=256)
    parser.add_argument("--vocab", type=int, default=1024)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    streams, packed, table = build_workload(args.chunks, args.vocab,
                                            args.seed)
    merge_array = table.merge_array()
    first = table.merges[0] if table.merges else (0, 1)
    print(f"workload: {len(streams)} streams, packed buffer "
          f"{packed.size} symbols, {len(table.merges)} merges")

    ops = {
        "apply_merge (1 pass)":
            lambda: _kernels.apply_merge(packed, first[0], first[1],
                                         table.base_size),
        f"encode_stream ({len(table.merges)} merges)":
            lambda: _kernels.encode_stream(packed, merge_array,
                                           table.base_size),
        f"train_bpe (vocab {args.vocab})":
            lambda: train_bpe(streams, base_size=table.base_size,
                              max_vocab=args.vocab),
    }

    backends = _kernels.available_backends()
    if "compiled" not in backends:
        print("compiled backend not built; timing the fallback only")
    previous = _kernels.get_backend()
    results: dict[str, dict[str, float]] = {name: {} for name in ops}
    outputs: dict[str, dict[str, object]] = {name: {} for name in ops}
    try:
        for backend in backends:
            _kernels.set_backend(backend)
            for name, fn in ops.items():
                outputs[name][backend] = fn()
                results[name][backend] = _best_of(args.repeats, fn)
    finally:
        _kernels.set_backend(previous)

    width = max(len(n) for n in ops)
    header = f"{'operation'.ljust(width)}  " + "  ".join(
        f"{b:>12}" for b in backends)
    if len(backends) > 1:
        header += f"  {'speedup':>8}"
    print(header)
    for name in ops:
        cells = [f"{results[name][b] * 1e3:9.2f} ms" for b in backends]
        line = f"{name.ljust(width)}  " + "  ".join(cells)
        if "compiled" in backends and "python" in backends:
            speedup = results[name]["python"] / results[name]["compiled"]
            line += f"  {speedup:7.1f}x"
        print(line)

    for name, got in outputs.items():
        values = list(got.values())
        for other in values[1:]:
            if isinstance(values[0], np.ndarray):
                assert np.array_equal(values[0], other), name
            else:
                assert values[0].merges == other.merges, name
    print("backend outputs identical")


if __name__ == "__main__":
    main()
