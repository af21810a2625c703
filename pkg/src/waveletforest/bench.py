"""Benchmark harness and deterministic locality profiling.

Timing runs wrap a whole query batch in one monotonic-clock read pair
and fold every answer into a checksum (sum mod 2^64), so the work can't
be optimized away and equal checksums across structures double as an
equivalence check. Locality profiling replays queries with trace
recording on: each query yields the byte offsets of the word-sized
reads it performed against the structure's serialized layout, which is
then reduced to distinct-regions-touched and span statistics at a given
granularity. Both run the same query code, so profiles are exact, not
sampled approximations.
"""

from __future__ import annotations

import csv
import os
import time
from dataclasses import astuple, dataclass, field

from .fmindex import FmIndex
from .textgen import gen_query_positions, splitmix64_words
from .wforest import WaveletForest

_MASK = (1 << 64) - 1

BENCH_COLUMNS = ("structure", "alphabet_bits", "block_bytes", "n_symbols",
                 "query_kind", "queries", "repeat", "total_ns",
                 "ns_per_query", "struct_bytes", "checksum")

LOCALITY_COLUMNS = ("structure", "alphabet_bits", "block_bytes",
                    "granularity", "mean_distinct_regions",
                    "mean_span_bytes", "queries")

DEFAULT_GRANULARITIES = (64, 4096)


@dataclass
class BenchResult:
    structure: str
    alphabet_bits: int
    block_bytes: int
    n_symbols: int
    query_kind: str
    queries: int
    repeat: int
    total_ns: int
    ns_per_query: float
    struct_bytes: int
    checksum: int


@dataclass
class TouchTrace:
    """Byte offsets of the word reads one query performed, in order."""
    offsets: list[int] = field(default_factory=list)


@dataclass
class LocalityProfile:
    granularity: int
    distinct_regions: int
    span_bytes: int


@dataclass
class LocalitySummary:
    structure: str
    alphabet_bits: int
    block_bytes: int
    granularity: int
    mean_distinct_regions: float
    mean_span_bytes: float
    queries: int


def structure_kind(structure) -> str:
    if isinstance(structure, FmIndex):
        return structure.backend_kind
    return "forest" if isinstance(structure, WaveletForest) else "tree"


def derived_block_bytes(structure) -> int:
    """Block size in bytes, 0 for monolithic trees."""
    if isinstance(structure, FmIndex):
        structure = structure.backend
    if isinstance(structure, WaveletForest):
        return structure.block_len * structure.alphabet_bits // 8
    return 0


def _meta(structure, block_bytes):
    if isinstance(structure, FmIndex):
        n, bits = structure.n, structure.alphabet_bits
    else:
        n, bits = len(structure), structure.alphabet_bits
    if block_bytes is None:
        block_bytes = derived_block_bytes(structure)
    return structure_kind(structure), bits, block_bytes, n, structure.size_bytes()


def _results(structure, block_bytes, query_kind, timings):
    kind, bits, bb, n, size = _meta(structure, block_bytes)
    out = []
    for rep, (qcount, total_ns, checksum) in enumerate(timings, start=1):
        out.append(BenchResult(
            structure=kind, alphabet_bits=bits, block_bytes=bb,
            n_symbols=n, query_kind=query_kind, queries=qcount, repeat=rep,
            total_ns=total_ns,
            ns_per_query=total_ns / qcount if qcount else 0.0,
            struct_bytes=size, checksum=checksum & _MASK))
    return out


def run_access_bench(structure, positions, repeats: int = 1,
                     block_bytes: int | None = None) -> list[BenchResult]:
    positions = [int(p) for p in positions]
    access = structure.access
    timings = []
    for _ in range(repeats):
        acc = 0
        t0 = time.perf_counter_ns()
        for p in positions:
            acc += access(p)
        t1 = time.perf_counter_ns()
        timings.append((len(positions), t1 - t0, acc))
    return _results(structure, block_bytes, "access", timings)


def run_rank_bench(structure, queries, repeats: int = 1,
                   block_bytes: int | None = None) -> list[BenchResult]:
    """queries: (symbol, position) pairs."""
    queries = [(int(c), int(i)) for c, i in queries]
    rank = structure.rank
    timings = []
    for _ in range(repeats):
        acc = 0
        t0 = time.perf_counter_ns()
        for c, i in queries:
            acc += rank(c, i)
        t1 = time.perf_counter_ns()
        timings.append((len(queries), t1 - t0, acc))
    return _results(structure, block_bytes, "rank", timings)


def run_count_bench(fm: FmIndex, patterns, repeats: int = 1,
                    block_bytes: int | None = None) -> list[BenchResult]:
    patterns = [list(map(int, p)) for p in patterns]
    count = fm.count
    timings = []
    for _ in range(repeats):
        acc = 0
        t0 = time.perf_counter_ns()
        for p in patterns:
            acc += count(p)
        t1 = time.perf_counter_ns()
        timings.append((len(patterns), t1 - t0, acc))
    return _results(fm, block_bytes, "count", timings)


# -- deterministic query generation ------------------------------------

def gen_rank_queries(seed: int, count: int, n: int, sigma: int):
    """(symbol, position) pairs: positions are the seed's first `count`
    position draws, symbols come from the following `count` outputs."""
    positions = gen_query_positions(seed, count, n)
    words = splitmix64_words(seed, count, count)
    return [((int(u) * sigma) >> 64, p) for u, p in zip(words, positions)]


def gen_count_patterns(seed: int, count: int, length: int, sigma: int):
    """`count` patterns of `length` symbols each, one stream draw per
    symbol."""
    if length < 1:
        raise ValueError("pattern length must be positive")
    words = splitmix64_words(seed, 0, count * length)
    syms = [(int(u) * sigma) >> 64 for u in words]
    return [syms[k * length:(k + 1) * length] for k in range(count)]


# -- locality profiling -------------------------------------------------

def profile_access(structure, i: int) -> tuple[int, TouchTrace]:
    t = []
    answer = structure.access(i, trace=t)
    return answer, TouchTrace(t)


def profile_rank(structure, c: int, i: int) -> tuple[int, TouchTrace]:
    t = []
    answer = structure.rank(c, i, trace=t)
    return answer, TouchTrace(t)


def profile_select(structure, c: int, j: int) -> tuple[int, TouchTrace]:
    t = []
    answer = structure.select(c, j, trace=t)
    return answer, TouchTrace(t)


def profile_count(fm: FmIndex, pattern) -> tuple[int, TouchTrace]:
    t = []
    answer = fm.count(pattern, trace=t)
    return answer, TouchTrace(t)


def summarize_locality(trace, granularity: int) -> LocalityProfile:
    """Distinct granularity-sized regions touched, and the byte span."""
    if granularity < 1:
        raise ValueError("granularity must be positive")
    offsets = trace.offsets if isinstance(trace, TouchTrace) else list(trace)
    if not offsets:
        return LocalityProfile(granularity, 0, 0)
    regions = {off // granularity for off in offsets}
    return LocalityProfile(granularity, len(regions),
                           max(offsets) - min(offsets))


def aggregate_locality(structure, traces, granularity: int,
                       block_bytes: int | None = None) -> LocalitySummary:
    """Mean locality statistics over a batch of traces."""
    kind, bits, bb, _, _ = _meta(structure, block_bytes)
    profiles = [summarize_locality(t, granularity) for t in traces]
    q = len(profiles)
    return LocalitySummary(
        structure=kind, alphabet_bits=bits, block_bytes=bb,
        granularity=granularity,
        mean_distinct_regions=(sum(p.distinct_regions for p in profiles) / q
                               if q else 0.0),
        mean_span_bytes=(sum(p.span_bytes for p in profiles) / q
                         if q else 0.0),
        queries=q)


# -- CSV emission -------------------------------------------------------

def emit_csv(rows, dest: str) -> None:
    """Append rows (all BenchResult or all LocalitySummary) to a CSV
    file, writing the header only when the file is new or empty. Rows
    are buffered and written in one call, so a crash can't leave a
    partial row behind."""
    rows = list(rows)
    if not rows:
        return
    if isinstance(rows[0], BenchResult):
        columns = BENCH_COLUMNS
    elif isinstance(rows[0], LocalitySummary):
        columns = LOCALITY_COLUMNS
    else:
        raise ValueError(f"cannot serialize {type(rows[0]).__name__} rows")
    if not all(isinstance(r, type(rows[0])) for r in rows):
        raise ValueError("mixed row types in one CSV")
    need_header = not os.path.exists(dest) or os.path.getsize(dest) == 0
    with open(dest, "a", newline="") as fh:
        writer = csv.writer(fh)
        if need_header:
            writer.writerow(columns)
        writer.writerows(astuple(r) for r in rows)
