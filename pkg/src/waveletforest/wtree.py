"""Huffman-shaped wavelet tree over a bounded integer alphabet.

The tree's shape is the canonical Huffman code of the symbol histogram:
a symbol with code length L sits at depth L, code bit 0 meaning left.
Each internal node stores one bitvector holding, for every symbol routed
through it, the code bit consumed there. access descends resolving bits,
rank descends along the query symbol's code path, select ascends it.
With one distinct symbol the tree is a bare leaf and stores no nodes.

Positions are 1-based throughout, matching the bitvectors underneath.
"""

from __future__ import annotations

import struct
from collections import deque

import numpy as np

from ._bits import pack_bits
from .bitvec import BitVector
from .huffman import CodeTable, build_code_table

MAGIC = b"WFWT"
VERSION = 1

# Serialized layout, offsets relative to the section start:
#   0  magic "WFWT", version u8, alphabet_bits u8, 2 zero bytes
#   8  n, u64
#   16 code table (count u64, then (symbol u64, length u64) pairs
#      ordered by (length, symbol))
#      node count u64
#      node byte offsets, u64 each, relative to the section start
#      node bitvector sections in BFS order, zero-padded so each
#      section's packed-words array starts on a 64-byte boundary
#      (a rank's superblock scan then never splits a cache line)
_HEADER_BYTES = 16
_DATA_ALIGN = 64
_BV_WORDS_OFF = 16  # bitvec section: magic(4) + zeros(4) + length(8)

_LEAF_FLAG = -1  # child entries < 0 encode a leaf: symbol = -(entry) - 1


def _align_section(off: int) -> int:
    return off + (-(off + _BV_WORDS_OFF)) % _DATA_ALIGN


def _leaf(symbol: int) -> int:
    return -(symbol + 1)


class WaveletTree:
    __slots__ = ("_n", "_alphabet_bits", "_table", "_nodes", "_left",
                 "_right", "_paths", "_hist", "_node_offsets", "_lone",
                 "_size")

    def __init__(self, n, alphabet_bits, table, nodes, left, right, hist):
        self._n = n
        self._alphabet_bits = alphabet_bits
        self._table = table
        self._nodes = nodes
        self._left = left
        self._right = right
        self._hist = hist
        self._paths = _code_paths(table, left, right)
        self._lone = next(iter(table.lengths)) if table.sigma_effective == 1 else None
        start = _HEADER_BYTES + table.size_bytes() + 8 + 8 * len(nodes)
        offsets = []
        for bv in nodes:
            start = _align_section(start)
            offsets.append(start)
            start += bv.size_bytes()
        self._node_offsets = offsets
        self._size = start

    # -- construction ------------------------------------------------

    @classmethod
    def build(cls, symbols, alphabet_bits: int, validate: bool = True) -> "WaveletTree":
        symbols = _as_symbol_array(symbols, alphabet_bits, validate)
        sigma = 1 << alphabet_bits
        hist = np.bincount(symbols, minlength=sigma).astype(np.int64)
        n = int(symbols.size)
        nz = np.flatnonzero(hist)

        if nz.size == 0:
            table = CodeTable({}, {})
            return cls(0, alphabet_bits, table, [], [], [], hist)
        if nz.size == 1:
            table = build_code_table({int(nz[0]): n})
            return cls(n, alphabet_bits, table, [], [], [], hist)

        freqs = dict(zip(nz.tolist(), hist[nz].tolist()))
        table = build_code_table(freqs)
        left, right, order = _shape_from_codes(table)
        nodes = cls._fill_nodes(symbols, table, left, right, order)
        return cls(n, alphabet_bits, table, nodes, left, right, hist)

    @staticmethod
    def _fill_nodes(symbols, table, left, right, depth_of):
        if table.max_length > 63:
            bits_at = None  # pathological skew; per-symbol Python fallback
        else:
            bits_at = _bit_table(table)
        nodes = [None] * len(left)
        queue = deque([(0, symbols)])
        while queue:
            idx, seq = queue.popleft()
            d = depth_of[idx]
            if bits_at is not None:
                bits = bits_at[d, seq]
            else:
                lengths, codes = table.lengths, table.codes
                bits = np.fromiter(
                    ((codes[int(s)] >> (lengths[int(s)] - 1 - d)) & 1 for s in seq),
                    np.uint8, count=len(seq))
            nodes[idx] = BitVector.from_words(pack_bits(bits), len(bits))
            lc, rc = left[idx], right[idx]
            if lc >= 0:
                queue.append((lc, seq[bits == 0]))
            if rc >= 0:
                queue.append((rc, seq[bits == 1]))
        return nodes

    # -- queries -----------------------------------------------------

    def __len__(self) -> int:
        return self._n

    @property
    def alphabet_bits(self) -> int:
        return self._alphabet_bits

    @property
    def code_table(self) -> CodeTable:
        return self._table

    @property
    def histogram(self) -> np.ndarray:
        return self._hist

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    def access(self, i: int, trace=None, base: int = 0) -> int:
        """Symbol at position i."""
        if i < 1 or i > self._n:
            raise IndexError(f"position {i} out of range 1..{self._n}")
        if self._lone is not None:
            return self._lone
        cur = 0
        while True:
            bv = self._nodes[cur]
            off = base + self._node_offsets[cur]
            b = bv.access(i, trace, off)
            i = bv.rank1(i, trace, off) if b else bv.rank0(i, trace, off)
            child = self._right[cur] if b else self._left[cur]
            if child < 0:
                return -child - 1
            cur = child

    def rank(self, c: int, i: int, trace=None, base: int = 0) -> int:
        """Occurrences of symbol c in positions 1..i."""
        self._check_symbol(c)
        if i < 0 or i > self._n:
            raise IndexError(f"position {i} out of range 0..{self._n}")
        path = self._paths.get(c)
        if path is None:
            return 0
        for idx, bit in path:
            bv = self._nodes[idx]
            off = base + self._node_offsets[idx]
            i = bv.rank1(i, trace, off) if bit else bv.rank0(i, trace, off)
        return i

    def select(self, c: int, j: int, trace=None, base: int = 0) -> int:
        """Position of the j-th occurrence of symbol c."""
        self._check_symbol(c)
        total = int(self._hist[c])
        if j < 1 or j > total:
            raise ValueError(f"symbol {c} occurs {total} times, ordinal {j}")
        for idx, bit in reversed(self._paths[c]):
            bv = self._nodes[idx]
            off = base + self._node_offsets[idx]
            j = bv.select1(j, trace, off) if bit else bv.select0(j, trace, off)
        return j

    def _check_symbol(self, c: int):
        if c < 0 or c >= (1 << self._alphabet_bits):
            raise ValueError(
                f"symbol {c} outside alphabet 0..{(1 << self._alphabet_bits) - 1}")

    # -- sizes and serialization --------------------------------------

    def total_data_bits(self) -> int:
        """Bits stored across node bitvectors (directories excluded)."""
        return sum(len(bv) for bv in self._nodes)

    def data_section_bytes(self) -> int:
        """Serialized bytes of the node sections alone."""
        return sum(bv.size_bytes() for bv in self._nodes)

    def size_bytes(self) -> int:
        return self._size

    def to_bytes(self) -> bytes:
        parts = [
            MAGIC,
            struct.pack("<BB2x", VERSION, self._alphabet_bits),
            struct.pack("<Q", self._n),
            self._table.to_bytes(),
            struct.pack("<Q", len(self._nodes)),
        ]
        for off in self._node_offsets:
            parts.append(struct.pack("<Q", off))
        pos = _HEADER_BYTES + self._table.size_bytes() + 8 + 8 * len(self._nodes)
        for off, bv in zip(self._node_offsets, self._nodes):
            if off > pos:
                parts.append(bytes(off - pos))
            parts.append(bv.to_bytes())
            pos = off + bv.size_bytes()
        return b"".join(parts)

    @classmethod
    def from_buffer(cls, buf, offset: int = 0) -> tuple["WaveletTree", int]:
        if buf[offset:offset + 4] != MAGIC:
            raise ValueError("bad wavelet tree magic")
        version, alphabet_bits = struct.unpack_from("<BB", buf, offset + 4)
        if version != VERSION:
            raise ValueError(f"unsupported wavelet tree version {version}")
        (n,) = struct.unpack_from("<Q", buf, offset + 8)
        table, pos = CodeTable.from_buffer(buf, offset + _HEADER_BYTES)
        (count,) = struct.unpack_from("<Q", buf, pos)
        pos += 8
        rel = struct.unpack_from(f"<{count}Q", buf, pos) if count else ()
        pos += 8 * count

        nodes = []
        for r in rel:
            bv, end = BitVector.from_buffer(buf, offset + r)
            nodes.append(bv)
            pos = end
        if table.sigma_effective > 1:
            left, right, _ = _shape_from_codes(table)
            if len(left) != count:
                raise ValueError("node count does not match code table")
        else:
            left, right = [], []
        hist = _hist_from_nodes(table, nodes, left, right, n, alphabet_bits)
        return cls(n, alphabet_bits, table, nodes, left, right, hist), pos

    @classmethod
    def from_bytes(cls, blob) -> "WaveletTree":
        tree, _ = cls.from_buffer(blob)
        return tree


def _as_symbol_array(symbols, alphabet_bits, validate):
    if hasattr(symbols, "symbols"):  # SymbolSequence
        symbols = symbols.symbols
    if alphabet_bits < 1 or alphabet_bits > 16:
        raise ValueError("alphabet_bits must be in 1..16")
    dtype = np.uint8 if alphabet_bits <= 8 else np.uint16
    arr = np.asarray(symbols)
    if arr.dtype != dtype:
        arr = arr.astype(dtype)
    if arr.ndim != 1:
        raise ValueError("symbols must be one-dimensional")
    if validate and arr.size:
        if int(arr.max()) >= (1 << alphabet_bits):
            raise ValueError(f"symbol out of range for {alphabet_bits}-bit alphabet")
    return arr


def _shape_from_codes(table: CodeTable):
    """Left/right child arrays (BFS order) and each node's depth.

    Child encoding: >= 0 is an internal node index, < 0 is a leaf
    holding symbol -(entry) - 1.
    """
    root = [None, None]
    for sym, ln in table.sorted_entries():
        code = table.codes[sym]
        node = root
        for d in range(ln):
            bit = (code >> (ln - 1 - d)) & 1
            if d == ln - 1:
                node[bit] = sym
            else:
                if node[bit] is None:
                    node[bit] = [None, None]
                node = node[bit]

    left, right, depth = [], [], []
    queue = deque([(root, 0)])
    while queue:
        node, d = queue.popleft()
        idx = len(left)
        left.append(0)
        right.append(0)
        depth.append(d)
        slots = []
        for child in node:
            if isinstance(child, list):
                slots.append(idx + 1 + len(queue))  # its eventual BFS index
                queue.append((child, d + 1))
            else:
                slots.append(_leaf(child))
        left[idx], right[idx] = slots
    return left, right, depth


def _bit_table(table: CodeTable) -> np.ndarray:
    """bit_table[d, s] = code bit at depth d of symbol s (0 if unused)."""
    max_sym = max(table.lengths)
    vals = np.zeros(max_sym + 1, dtype=np.uint64)
    lens = np.zeros(max_sym + 1, dtype=np.int64)
    for s, l in table.lengths.items():
        vals[s] = table.codes[s]
        lens[s] = l
    depth = table.max_length
    out = np.zeros((depth, max_sym + 1), dtype=np.uint8)
    for d in range(depth):
        sh = np.maximum(lens - 1 - d, 0).astype(np.uint64)
        row = ((vals >> sh) & np.uint64(1)).astype(np.uint8)
        row[lens <= d] = 0
        out[d] = row
    return out


def _code_paths(table: CodeTable, left, right):
    """symbol -> [(node index, bit), ...] along its code, root first."""
    paths = {}
    for sym, ln in table.lengths.items():
        code = table.codes[sym]
        path = []
        cur = 0
        for d in range(ln):
            bit = (code >> (ln - 1 - d)) & 1
            path.append((cur, bit))
            cur = right[cur] if bit else left[cur]
        paths[sym] = path
    return paths


def _hist_from_nodes(table, nodes, left, right, n, alphabet_bits):
    hist = np.zeros(1 << alphabet_bits, dtype=np.int64)
    if table.sigma_effective == 1:
        hist[next(iter(table.lengths))] = n
        return hist
    for idx, bv in enumerate(nodes):
        for child, count in ((left[idx], bv.num_zeros), (right[idx], bv.num_ones)):
            if child < 0:
                hist[-child - 1] = count
    return hist
