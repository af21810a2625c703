"""FM-index: backward pattern counting over a BWT.

The Burrows-Wheeler transform is taken over the text followed by a
sentinel (value 2^alphabet_bits) that sorts before every text symbol.
The transformed sequence, drawn from the alphabet extended by that one
value, is stored in a wavelet tree or forest built with one extra
alphabet bit; counting a pattern of length m then costs exactly two
rank queries per symbol unless the row interval empties early.

The C array maps each text symbol c to 1 + (number of text symbols
smaller than c): one slot past the sentinel's row. lf_step treats the
sentinel's C value as 0.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from . import wforest, wtree
from .wforest import WaveletForest
from .wtree import WaveletTree, _as_symbol_array

MAGIC = b"WFFM"

# Serialized layout, offsets relative to the section start:
#   0  magic "WFFM", alphabet_bits u8, 3 zero bytes
#   8  text length n, u64
#   16 primary index (BWT row holding the original text), u64
#   24 C array, (2^alphabet_bits + 1) u64 entries; the final entry is
#      the total row count n + 1
#      backend section (a wavelet tree or wavelet forest over the BWT),
#      zero-padded to start on a 64-byte boundary so the backend's
#      cache-line-aligned word arrays stay aligned inside this file
_C_OFF = 24
_DATA_ALIGN = 64

_U64 = np.dtype("<u8")


@dataclass
class Bwt:
    alphabet_bits: int
    primary_index: int
    transformed: np.ndarray

    @property
    def sentinel(self) -> int:
        return 1 << self.alphabet_bits


def build_bwt(symbols, alphabet_bits: int, validate: bool = True) -> Bwt:
    """BWT of the text extended with its unique smallest sentinel."""
    arr = _as_symbol_array(symbols, alphabet_bits, validate)
    n = int(arr.size)
    if n == 0:
        raise ValueError("cannot transform an empty text")
    # Sentinel gets sort key 0, text symbols shift up by one.
    keys = np.zeros(n + 1, dtype=np.int64)
    keys[:n] = arr.astype(np.int64) + 1
    sa = _suffix_array(keys)
    dtype = np.uint16 if alphabet_bits >= 8 else np.uint8
    full = np.empty(n + 1, dtype=dtype)
    full[:n] = arr
    full[n] = 1 << alphabet_bits
    transformed = full[(sa - 1) % (n + 1)]
    primary = int(np.flatnonzero(sa == 0)[0])
    return Bwt(alphabet_bits=alphabet_bits, primary_index=primary,
               transformed=transformed)


def _suffix_array(keys: np.ndarray) -> np.ndarray:
    """Suffix ordering by prefix doubling; keys must end in a unique
    minimum so every suffix comparison resolves."""
    n = len(keys)
    order = np.argsort(keys, kind="stable")
    rank = np.empty(n, dtype=np.int64)
    srt = keys[order]
    steps = np.concatenate([[0], (srt[1:] != srt[:-1]).astype(np.int64)])
    rank[order] = np.cumsum(steps)
    k = 1
    while int(rank[order[-1]]) != n - 1:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        r, s = rank[order], second[order]
        steps = np.concatenate(
            [[0], ((r[1:] != r[:-1]) | (s[1:] != s[:-1])).astype(np.int64)])
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.cumsum(steps)
        k <<= 1
    return order


class FmIndex:
    __slots__ = ("_n", "_alphabet_bits", "_primary", "_c", "_backend")

    def __init__(self, n, alphabet_bits, primary, c_array, backend):
        self._n = n
        self._alphabet_bits = alphabet_bits
        self._primary = primary
        self._c = c_array
        self._backend = backend

    # -- construction ------------------------------------------------

    @classmethod
    def build(cls, symbols, alphabet_bits: int, backend: str = "tree",
              block_len: int | None = None) -> "FmIndex":
        return cls.from_bwt(build_bwt(symbols, alphabet_bits),
                            backend=backend, block_len=block_len)

    @classmethod
    def from_bwt(cls, bwt: Bwt, backend: str = "tree",
                 block_len: int | None = None) -> "FmIndex":
        ab = bwt.alphabet_bits
        if backend == "tree":
            store = WaveletTree.build(bwt.transformed, ab + 1, validate=False)
        elif backend == "forest":
            if block_len is None:
                raise ValueError("forest backend needs a block_len")
            store = WaveletForest.build(bwt.transformed, block_len, ab + 1,
                                        validate=False)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        n = len(bwt.transformed) - 1
        sigma = 1 << ab
        c_array = np.empty(sigma + 1, dtype=np.int64)
        c_array[0] = 1
        c_array[1:] = 1 + np.cumsum(store.histogram[:sigma])
        return cls(n, ab, bwt.primary_index, c_array, store)

    # -- queries -----------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def alphabet_bits(self) -> int:
        return self._alphabet_bits

    @property
    def sentinel(self) -> int:
        return 1 << self._alphabet_bits

    @property
    def primary_index(self) -> int:
        return self._primary

    @property
    def c_array(self) -> np.ndarray:
        return self._c

    @property
    def backend(self):
        return self._backend

    @property
    def backend_kind(self) -> str:
        return "forest" if isinstance(self._backend, WaveletForest) else "tree"

    def _backend_off(self) -> int:
        end = _C_OFF + 8 * len(self._c)
        return end + (-end) % _DATA_ALIGN

    def bwt_symbol(self, row: int, trace=None, base: int = 0) -> int:
        """BWT symbol of a row (0-based), the sentinel included."""
        if row < 0 or row > self._n:
            raise IndexError(f"row {row} out of range 0..{self._n}")
        return self._backend.access(row + 1, trace, base + self._backend_off())

    def lf_step(self, row: int, trace=None, base: int = 0) -> int:
        """Row of the rotation one position to the left."""
        c = self.bwt_symbol(row, trace, base)
        if c == self.sentinel:
            return 0
        if trace is not None:
            trace.append(base + _C_OFF + 8 * c)
        return int(self._c[c]) + self._backend.rank(
            c, row + 1, trace, base + self._backend_off()) - 1

    def count(self, pattern, trace=None, base: int = 0) -> int:
        """Occurrences of the pattern in the text."""
        pat = [int(c) for c in pattern]
        if not pat:
            raise ValueError("pattern must be non-empty")
        sigma = 1 << self._alphabet_bits
        if any(c < 0 or c >= sigma for c in pat):
            return 0
        boff = self._backend_off()
        lo, hi = 0, self._n + 1
        for c in reversed(pat):
            if trace is not None:
                trace.append(base + _C_OFF + 8 * c)
            start = int(self._c[c])
            lo = start + self._backend.rank(c, lo, trace, base + boff)
            hi = start + self._backend.rank(c, hi, trace, base + boff)
            if lo >= hi:
                return 0
        return hi - lo

    # -- sizes and serialization --------------------------------------

    def size_bytes(self) -> int:
        return self._backend_off() + self._backend.size_bytes()

    def to_bytes(self) -> bytes:
        c_end = _C_OFF + 8 * len(self._c)
        return b"".join([
            MAGIC,
            struct.pack("<B3x", self._alphabet_bits),
            struct.pack("<QQ", self._n, self._primary),
            self._c.astype(_U64).tobytes(),
            bytes(self._backend_off() - c_end),
            self._backend.to_bytes(),
        ])

    @classmethod
    def from_buffer(cls, buf, offset: int = 0) -> tuple["FmIndex", int]:
        if buf[offset:offset + 4] != MAGIC:
            raise ValueError("bad FM-index magic")
        (alphabet_bits,) = struct.unpack_from("<B", buf, offset + 4)
        n, primary = struct.unpack_from("<QQ", buf, offset + 8)
        sigma = 1 << alphabet_bits
        c_array = np.frombuffer(buf, _U64, sigma + 1,
                                offset + _C_OFF).astype(np.int64)
        c_end = _C_OFF + 8 * (sigma + 1)
        back_at = offset + c_end + (-c_end) % _DATA_ALIGN
        magic = bytes(buf[back_at:back_at + 4])
        if magic == wtree.MAGIC:
            backend, end = WaveletTree.from_buffer(buf, back_at)
        elif magic == wforest.MAGIC:
            backend, end = WaveletForest.from_buffer(buf, back_at)
        else:
            raise ValueError("unrecognized FM-index backend section")
        return cls(n, alphabet_bits, primary, c_array, backend), end

    @classmethod
    def from_bytes(cls, blob) -> "FmIndex":
        fm, _ = cls.from_buffer(blob)
        return fm
