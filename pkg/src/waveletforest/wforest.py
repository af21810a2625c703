"""Wavelet forest: fixed-length blocks, one wavelet tree per block.

The text is cut into blocks of block_len symbols (the last may be
short). Each block gets its own Huffman-shaped wavelet tree built from
the block's own histogram, and a rank table row R[k][c] stores how often
symbol c occurs before block k. A global query then touches one rank
table row plus exactly one block's tree, so its reads stay inside one
block-sized slice of the structure instead of spraying across level
bitmaps the way a monolithic tree's do.

access resolves entirely inside a block; rank adds R[k][c] to the local
rank; select binary-searches the rank table column for the right block
and finishes locally.
"""

from __future__ import annotations

import struct

import numpy as np

from .wtree import WaveletTree, _as_symbol_array

MAGIC = b"WFWF"
VERSION = 1

# Serialized layout, offsets relative to the section start:
#   0  magic "WFWF", version u8, alphabet_bits u8, 2 zero bytes
#   8  n, u64
#   16 block_len, u64
#   24 block count, u64
#   32 block section offsets, u64 each, relative to the section start
#      per block: rank row (2^alphabet_bits u64 values R[k][c]),
#      then the block's wavelet tree section; blocks are zero-padded
#      so each tree starts on a 64-byte boundary, keeping its
#      internally aligned word arrays cache-line aligned here too
_HEADER_BYTES = 32
_DATA_ALIGN = 64

_U64 = np.dtype("<u8")


def _align_block(off: int, sigma: int) -> int:
    return off + (-(off + 8 * sigma)) % _DATA_ALIGN


class WaveletForest:
    __slots__ = ("_n", "_alphabet_bits", "_block_len", "_blocks", "_ranks",
                 "_hist", "_block_offsets", "_size")

    def __init__(self, n, alphabet_bits, block_len, blocks, ranks, hist):
        self._n = n
        self._alphabet_bits = alphabet_bits
        self._block_len = block_len
        self._blocks = blocks
        self._ranks = ranks
        self._hist = hist
        sigma = 1 << alphabet_bits
        off = _HEADER_BYTES + 8 * len(blocks)
        offsets = []
        for tree in blocks:
            off = _align_block(off, sigma)
            offsets.append(off)
            off += 8 * sigma + tree.size_bytes()
        self._block_offsets = offsets
        self._size = off

    # -- construction ------------------------------------------------

    @classmethod
    def build(cls, symbols, block_len: int, alphabet_bits: int,
              validate: bool = True) -> "WaveletForest":
        if block_len < 1:
            raise ValueError("block_len must be at least 1")
        symbols = _as_symbol_array(symbols, alphabet_bits, validate)
        n = int(symbols.size)
        sigma = 1 << alphabet_bits
        m = -(-n // block_len) if n else 0
        ranks = np.zeros((m, sigma), dtype=np.int64)
        running = np.zeros(sigma, dtype=np.int64)
        blocks = []
        for k in range(m):
            seg = symbols[k * block_len:(k + 1) * block_len]
            ranks[k] = running
            tree = WaveletTree.build(seg, alphabet_bits, validate=False)
            blocks.append(tree)
            running += tree.histogram
        return cls(n, alphabet_bits, block_len, blocks, ranks, running)

    # -- queries -----------------------------------------------------

    def __len__(self) -> int:
        return self._n

    @property
    def alphabet_bits(self) -> int:
        return self._alphabet_bits

    @property
    def block_len(self) -> int:
        return self._block_len

    @property
    def block_count(self) -> int:
        return len(self._blocks)

    @property
    def histogram(self) -> np.ndarray:
        return self._hist

    @property
    def rank_table(self) -> np.ndarray:
        """R[k][c]: occurrences of c before block k. access never reads it."""
        return self._ranks

    def _tree_base(self, k: int) -> int:
        return self._block_offsets[k] + 8 * (1 << self._alphabet_bits)

    def access(self, i: int, trace=None, base: int = 0) -> int:
        """Symbol at position i; resolved inside block (i-1)//block_len."""
        if i < 1 or i > self._n:
            raise IndexError(f"position {i} out of range 1..{self._n}")
        k = (i - 1) // self._block_len
        local = i - k * self._block_len
        return self._blocks[k].access(local, trace, base + self._tree_base(k))

    def rank(self, c: int, i: int, trace=None, base: int = 0) -> int:
        """Occurrences of c in positions 1..i: R[k][c] plus a local rank."""
        self._check_symbol(c)
        if i < 0 or i > self._n:
            raise IndexError(f"position {i} out of range 0..{self._n}")
        if i == 0:
            return 0
        k = (i - 1) // self._block_len
        local = i - k * self._block_len
        if trace is not None:
            trace.append(base + self._block_offsets[k] + 8 * c)
        before = int(self._ranks[k, c])
        return before + self._blocks[k].rank(c, local, trace,
                                             base + self._tree_base(k))

    def select(self, c: int, j: int, trace=None, base: int = 0) -> int:
        """Position of the j-th occurrence of c."""
        self._check_symbol(c)
        total = int(self._hist[c])
        if j < 1 or j > total:
            raise ValueError(f"symbol {c} occurs {total} times, ordinal {j}")
        # Last block whose prefix count stays below j. Row 0 is all
        # zeros, so the search runs over rows 1..m-1.
        ranks = self._ranks
        lo, hi = 1, len(self._blocks)
        while lo < hi:
            mid = (lo + hi) >> 1
            if trace is not None:
                trace.append(base + self._block_offsets[mid] + 8 * c)
            if int(ranks[mid, c]) >= j:
                hi = mid
            else:
                lo = mid + 1
        k = lo - 1
        if trace is not None:
            trace.append(base + self._block_offsets[k] + 8 * c)
        local_j = j - int(ranks[k, c])
        pos = self._blocks[k].select(c, local_j, trace, base + self._tree_base(k))
        return k * self._block_len + pos

    def _check_symbol(self, c: int):
        if c < 0 or c >= (1 << self._alphabet_bits):
            raise ValueError(
                f"symbol {c} outside alphabet 0..{(1 << self._alphabet_bits) - 1}")

    # -- sizes and serialization --------------------------------------

    def header_bytes(self) -> int:
        """Fixed header plus the block offset table."""
        return _HEADER_BYTES + 8 * len(self._blocks)

    def block_section_bytes(self, k: int) -> int:
        return 8 * (1 << self._alphabet_bits) + self._blocks[k].size_bytes()

    def block_section_offset(self, k: int) -> int:
        return self._block_offsets[k]

    def max_block_section_bytes(self) -> int:
        return max((self.block_section_bytes(k)
                    for k in range(len(self._blocks))), default=0)

    def size_bytes(self) -> int:
        return self._size

    def to_bytes(self) -> bytes:
        parts = [
            MAGIC,
            struct.pack("<BB2x", VERSION, self._alphabet_bits),
            struct.pack("<QQQ", self._n, self._block_len, len(self._blocks)),
        ]
        for off in self._block_offsets:
            parts.append(struct.pack("<Q", off))
        pos = _HEADER_BYTES + 8 * len(self._blocks)
        for k, tree in enumerate(self._blocks):
            off = self._block_offsets[k]
            if off > pos:
                parts.append(bytes(off - pos))
            parts.append(self._ranks[k].astype(_U64).tobytes())
            parts.append(tree.to_bytes())
            pos = off + 8 * (1 << self._alphabet_bits) + tree.size_bytes()
        return b"".join(parts)

    @classmethod
    def from_buffer(cls, buf, offset: int = 0) -> tuple["WaveletForest", int]:
        if buf[offset:offset + 4] != MAGIC:
            raise ValueError("bad wavelet forest magic")
        version, alphabet_bits = struct.unpack_from("<BB", buf, offset + 4)
        if version != VERSION:
            raise ValueError(f"unsupported wavelet forest version {version}")
        n, block_len, m = struct.unpack_from("<QQQ", buf, offset + 8)
        if block_len < 1:
            raise ValueError("corrupt forest: block_len must be positive")
        sigma = 1 << alphabet_bits
        rel = struct.unpack_from(f"<{m}Q", buf, offset + _HEADER_BYTES) if m else ()

        ranks = np.zeros((m, sigma), dtype=np.int64)
        blocks = []
        pos = offset + _HEADER_BYTES + 8 * m
        for k, r in enumerate(rel):
            row_at = offset + r
            ranks[k] = np.frombuffer(buf, _U64, sigma, row_at).astype(np.int64)
            tree, pos = WaveletTree.from_buffer(buf, row_at + 8 * sigma)
            blocks.append(tree)
        if m:
            hist = ranks[m - 1] + blocks[-1].histogram
        else:
            hist = np.zeros(sigma, dtype=np.int64)
        return cls(n, alphabet_bits, block_len, blocks, ranks, hist), pos

    @classmethod
    def from_bytes(cls, blob) -> "WaveletForest":
        forest, _ = cls.from_buffer(blob)
        return forest
