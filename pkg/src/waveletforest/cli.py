"""Command line front end: gen, build, bench, sweep.

gen    write a deterministic pseudo-random byte stream to a file
build  construct a wavelet tree or forest from raw bytes and save it
bench  time batches of queries against a saved structure, CSV out
sweep  benchmark a tree and a grid of forest block sizes in one go

Every run is reproducible from its flags: data comes from `gen` seeds
and queries from the bench seed. Failures print one diagnostic line to
stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import sys

from . import bench as bench_mod
from . import fmindex, wforest, wtree
from .bench import (DEFAULT_GRANULARITIES, aggregate_locality, emit_csv,
                    gen_count_patterns, gen_rank_queries, profile_access,
                    profile_count, profile_rank, run_access_bench,
                    run_count_bench, run_rank_bench)
from .fmindex import FmIndex
from .textgen import gen_query_positions, iter_gen_chunks, reinterpret
from .wforest import WaveletForest
from .wtree import WaveletTree

CLI_ALPHABETS = (1, 2, 3, 4, 8)

DEFAULT_BLOCK_BYTES = "50000,100000,500000,1000000,5000000,10000000"


def _parse_int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(part) for part in text.split(",")]


def _check_alphabet(bits: int) -> int:
    if bits not in CLI_ALPHABETS:
        raise ValueError(f"alphabet bits must be one of {CLI_ALPHABETS}, got {bits}")
    return bits


def _block_len(block_bytes: int, alphabet_bits: int) -> int:
    if block_bytes < 1:
        raise ValueError("block bytes must be positive")
    return block_bytes * 8 // alphabet_bits


def _load_structure(path: str):
    with open(path, "rb") as fh:
        blob = fh.read()
    magic = blob[:4]
    if magic == wtree.MAGIC:
        return WaveletTree.from_bytes(blob)
    if magic == wforest.MAGIC:
        return WaveletForest.from_bytes(blob)
    if magic == fmindex.MAGIC:
        return FmIndex.from_bytes(blob)
    raise ValueError(f"{path}: unrecognized structure file")


def cmd_gen(args) -> int:
    if args.bytes < 0:
        raise ValueError("--bytes must be non-negative")
    written = 0
    with open(args.out, "wb") as fh:
        for chunk in iter_gen_chunks(args.seed, args.bytes):
            fh.write(chunk)
            written += len(chunk)
    print(f"wrote {written} bytes to {args.out} (seed {args.seed})")
    return 0


def cmd_build(args) -> int:
    bits = _check_alphabet(args.alphabet_bits)
    with open(args.input, "rb") as fh:
        raw = fh.read()
    seq = reinterpret(raw, bits)
    if args.structure == "tree":
        if args.block_bytes is not None:
            raise ValueError("--block-bytes only applies to --structure forest")
        structure = WaveletTree.build(seq.symbols, bits, validate=False)
    else:
        if args.block_bytes is None:
            raise ValueError("--structure forest requires --block-bytes")
        block_len = _block_len(args.block_bytes, bits)
        structure = WaveletForest.build(seq.symbols, block_len, bits,
                                        validate=False)
    blob = structure.to_bytes()
    with open(args.out, "wb") as fh:
        fh.write(blob)
    print(f"built {args.structure} over {len(seq)} symbols "
          f"({bits}-bit), {len(blob)} bytes -> {args.out}")
    return 0


def _granularities(args) -> tuple[int, ...]:
    return tuple(args.granularity) if args.granularity else DEFAULT_GRANULARITIES


def _bench_one(structure, kind, args, block_bytes=None):
    """Time one structure and optionally profile locality; returns
    (bench rows, locality rows)."""
    q = args.queries
    if isinstance(structure, FmIndex):
        if kind != "count":
            raise ValueError("access/rank benchmarks need a tree or forest file")
        sigma = 1 << structure.alphabet_bits
        patterns = gen_count_patterns(args.seed, q, args.pattern_len, sigma)
        rows = run_count_bench(structure, patterns, args.repeats, block_bytes)
        traced = patterns[: min(q, 1000)]
        tracer = lambda p: profile_count(structure, p)[1]
    elif kind == "access":
        positions = gen_query_positions(args.seed, q, len(structure))
        rows = run_access_bench(structure, positions, args.repeats, block_bytes)
        traced = positions[: min(q, 1000)]
        tracer = lambda p: profile_access(structure, p)[1]
    elif kind == "rank":
        sigma = 1 << structure.alphabet_bits
        queries = gen_rank_queries(args.seed, q, len(structure), sigma)
        rows = run_rank_bench(structure, queries, args.repeats, block_bytes)
        traced = queries[: min(q, 1000)]
        tracer = lambda ci: profile_rank(structure, ci[0], ci[1])[1]
    else:
        raise ValueError("count benchmarks need an FM-index file")

    locality = []
    if args.locality_csv:
        traces = [tracer(item) for item in traced]
        for g in _granularities(args):
            locality.append(aggregate_locality(structure, traces, g,
                                               block_bytes))
    return rows, locality


def _report(rows):
    for r in rows:
        print(f"{r.structure} bits={r.alphabet_bits} block_bytes={r.block_bytes} "
              f"{r.query_kind} queries={r.queries} repeat={r.repeat}: "
              f"{r.ns_per_query:.1f} ns/query, checksum {r.checksum:#x}")


def cmd_bench(args) -> int:
    structure = _load_structure(args.structure_file)
    rows, locality = _bench_one(structure, args.query_kind, args)
    emit_csv(rows, args.csv)
    if args.locality_csv:
        emit_csv(locality, args.locality_csv)
    _report(rows)
    return 0


def cmd_sweep(args) -> int:
    alphabets = _parse_int_list(args.alphabet_bits_list)
    if not alphabets:
        raise ValueError("--alphabet-bits-list must name at least one width")
    for bits in alphabets:
        _check_alphabet(bits)
    block_sizes = _parse_int_list(args.block_bytes_list)
    kind = args.query_kind
    with open(args.input, "rb") as fh:
        raw = fh.read()

    for bits in alphabets:
        seq = reinterpret(raw, bits)
        symbols = seq.symbols
        print(f"[sweep] {bits}-bit alphabet, {len(seq)} symbols")
        tree = WaveletTree.build(symbols, bits, validate=False)
        rows, locality = _bench_one(tree, kind, args, block_bytes=0)
        emit_csv(rows, args.csv)
        if args.locality_csv:
            emit_csv(locality, args.locality_csv)
        _report(rows)
        del tree
        for bb in block_sizes:
            forest = WaveletForest.build(symbols, _block_len(bb, bits),
                                         bits, validate=False)
            rows, locality = _bench_one(forest, kind, args, block_bytes=bb)
            emit_csv(rows, args.csv)
            if args.locality_csv:
                emit_csv(locality, args.locality_csv)
            _report(rows)
            del forest
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wforest",
        description="wavelet tree / wavelet forest benchmark toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="write deterministic random bytes")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--bytes", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=cmd_gen)

    p_build = sub.add_parser("build", help="build and save a structure")
    p_build.add_argument("--input", required=True, help="raw byte file")
    p_build.add_argument("--alphabet-bits", type=int, required=True,
                         choices=CLI_ALPHABETS)
    p_build.add_argument("--structure", required=True,
                         choices=("tree", "forest"))
    p_build.add_argument("--block-bytes", type=int, default=None)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_build)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--queries", type=int, default=10_000)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--repeats", type=int, default=3)
    common.add_argument("--csv", required=True)
    common.add_argument("--locality-csv", default=None)
    common.add_argument("--granularity", type=int, action="append",
                        help="locality granularity in bytes, repeatable "
                             f"(default {list(DEFAULT_GRANULARITIES)})")

    p_bench = sub.add_parser("bench", parents=[common],
                             help="benchmark a saved structure")
    p_bench.add_argument("--structure-file", required=True)
    p_bench.add_argument("--query-kind", default="access",
                         choices=("access", "rank", "count"))
    p_bench.add_argument("--pattern-len", type=int, default=8,
                         help="pattern length for count benchmarks")
    p_bench.set_defaults(func=cmd_bench)

    p_sweep = sub.add_parser("sweep", parents=[common],
                             help="tree vs forest grid benchmark")
    p_sweep.add_argument("--input", required=True, help="raw byte file")
    p_sweep.add_argument("--alphabet-bits-list", default="1,2,3,4,8")
    p_sweep.add_argument("--block-bytes-list", default=DEFAULT_BLOCK_BYTES)
    p_sweep.add_argument("--query-kind", default="access",
                         choices=("access", "rank"))
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
