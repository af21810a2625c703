"""Packed bitvector with constant-time rank and sampled select.

Positions are 1-based. Bit i lives in word (i - 1) // 64 at intra-word
offset (i - 1) % 64, words filled LSB-first. Alongside the raw words the
vector keeps a rank directory (cumulative popcount at every 512-bit
boundary) and select samples (the position of every 8192nd set bit and
every 8192nd clear bit).

Every query can record the byte offset of each word-sized read it
performs against the serialized layout, which is what the locality
profiler consumes. The instrumented and plain code paths are the same
code; passing trace=None merely skips the recording.
"""

from __future__ import annotations

import struct

import numpy as np

from ._bits import pack_bits, popcount_words, select_in_word

MAGIC = b"WFBV"

SUPER_BITS = 512
SELECT_SAMPLE = 8192

# Serialized layout, offsets relative to the section start:
#   0  magic "WFBV" + 4 zero bytes
#   8  length in bits, u64
#   16 words, 8 * ceil(length / 64) bytes
#      rank directory, 8 * (length // 512) bytes
#      count of 1-samples (u64), then the samples
#      count of 0-samples (u64), then the samples
# All integers little-endian; every section lands 8-byte aligned.
_WORDS_OFF = 16

_U64 = np.dtype("<u8")


class BitVector:
    __slots__ = ("_length", "_words", "_dir", "_samples1", "_samples0",
                 "_num_ones", "_dir_off", "_s1_off", "_s0_off")

    def __init__(self, length, words, rank_dir, samples1, samples0, num_ones):
        self._length = length
        self._words = words
        self._dir = rank_dir
        self._samples1 = samples1
        self._samples0 = samples0
        self._num_ones = num_ones
        # Byte offsets of the directory and the two sample arrays within
        # the serialized section, used both for writing and for traces.
        self._dir_off = _WORDS_OFF + 8 * len(words)
        self._s1_off = self._dir_off + 8 * len(rank_dir) + 8
        self._s0_off = self._s1_off + 8 * len(samples1) + 8

    # -- construction ------------------------------------------------

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        """Build from an iterable/array of 0 and 1 values."""
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if arr.size and int(arr.max()) > 1:
            raise ValueError("bits must contain only 0 and 1")
        return cls.from_words(pack_bits(arr), int(arr.size))

    @classmethod
    def from_words(cls, words: np.ndarray, length: int) -> "BitVector":
        """Build from pre-packed little-endian words (see _bits.pack_bits)."""
        words = np.ascontiguousarray(words, dtype=_U64)
        if len(words) != (length + 63) // 64:
            raise ValueError("word count does not match length")
        pc = popcount_words(words)
        cum = np.cumsum(pc, dtype=np.int64)
        ndir = length // SUPER_BITS
        rank_dir = cum[7::8][:ndir].astype(_U64)
        num_ones = int(cum[-1]) if len(words) else 0

        samples1 = cls._sample_positions(words, cum, num_ones, length, ones=True)
        zcum = np.arange(1, len(words) + 1, dtype=np.int64) * 64 - cum
        if len(words):
            # Padding bits in the last word are stored as zeros but are
            # not part of the vector; count only in-range clear bits.
            zcum[-1] = length - int(cum[-1])
        samples0 = cls._sample_positions(words, zcum, length - num_ones,
                                         length, ones=False)
        return cls(length, words, rank_dir, samples1, samples0, num_ones)

    @staticmethod
    def _sample_positions(words, cum, total, length, ones):
        targets = np.arange(SELECT_SAMPLE, total + 1, SELECT_SAMPLE,
                            dtype=np.int64)
        if not len(targets):
            return np.empty(0, dtype=_U64)
        word_idx = np.searchsorted(cum, targets, side="left")
        out = np.empty(len(targets), dtype=_U64)
        for k, (t, w) in enumerate(zip(targets.tolist(), word_idx.tolist())):
            before = int(cum[w - 1]) if w else 0
            word = int(words[w])
            if not ones:
                valid = min(64, length - 64 * w)
                word = ~word & ((1 << valid) - 1)
            out[k] = 64 * w + select_in_word(word, t - before) + 1
        return out

    # -- queries -----------------------------------------------------

    def __len__(self) -> int:
        return self._length

    @property
    def num_ones(self) -> int:
        return self._num_ones

    @property
    def num_zeros(self) -> int:
        return self._length - self._num_ones

    def access(self, i: int, trace=None, base: int = 0) -> int:
        """Bit at position i (1-based)."""
        if i < 1 or i > self._length:
            raise IndexError(f"position {i} out of range 1..{self._length}")
        w = (i - 1) >> 6
        if trace is not None:
            trace.append(base + _WORDS_OFF + 8 * w)
        return (int(self._words[w]) >> ((i - 1) & 63)) & 1

    def rank1(self, i: int, trace=None, base: int = 0) -> int:
        """Number of set bits in positions 1..i; rank1(0) is 0."""
        if i < 0 or i > self._length:
            raise IndexError(f"position {i} out of range 0..{self._length}")
        if i == 0:
            return 0
        w = (i - 1) >> 6
        s = (i - 1) >> 9
        count = 0
        if s:
            if trace is not None:
                trace.append(base + self._dir_off + 8 * (s - 1))
            count = int(self._dir[s - 1])
        words = self._words
        for k in range(s << 3, w):
            if trace is not None:
                trace.append(base + _WORDS_OFF + 8 * k)
            count += int(words[k]).bit_count()
        if trace is not None:
            trace.append(base + _WORDS_OFF + 8 * w)
        tail = int(words[w])
        r = (i - 1) & 63
        if r != 63:
            tail &= (1 << (r + 1)) - 1
        return count + tail.bit_count()

    def rank0(self, i: int, trace=None, base: int = 0) -> int:
        """Number of clear bits in positions 1..i."""
        return i - self.rank1(i, trace, base)

    def select1(self, j: int, trace=None, base: int = 0) -> int:
        """Position of the j-th (1-based) set bit."""
        if j < 1 or j > self._num_ones:
            raise ValueError(f"ordinal {j} out of range 1..{self._num_ones}")
        return self._select(j, True, trace, base)

    def select0(self, j: int, trace=None, base: int = 0) -> int:
        """Position of the j-th (1-based) clear bit."""
        zeros = self._length - self._num_ones
        if j < 1 or j > zeros:
            raise ValueError(f"ordinal {j} out of range 1..{zeros}")
        return self._select(j, False, trace, base)

    def _dir_count(self, t: int, ones: bool) -> int:
        # Count of the tracked bit kind in the first 512 * (t + 1) positions.
        c = int(self._dir[t])
        return c if ones else SUPER_BITS * (t + 1) - c

    def _select(self, j: int, ones: bool, trace, base: int) -> int:
        samples = self._samples1 if ones else self._samples0
        soff = self._s1_off if ones else self._s0_off
        q, rem = divmod(j, SELECT_SAMPLE)
        if rem == 0:
            if trace is not None:
                trace.append(base + soff + 8 * (q - 1))
            return int(samples[q - 1])

        lo = 0
        ndir = len(self._dir)
        hi = ndir  # candidate superblocks lo..hi, hi == ndir means the tail
        if q >= 1:
            if trace is not None:
                trace.append(base + soff + 8 * (q - 1))
            lo = (int(samples[q - 1]) - 1) >> 9
        if q < len(samples):
            if trace is not None:
                trace.append(base + soff + 8 * q)
            hi = min(hi, (int(samples[q]) - 1) >> 9)

        # First superblock whose cumulative count reaches j.
        while lo < hi:
            mid = (lo + hi) >> 1
            if trace is not None:
                trace.append(base + self._dir_off + 8 * mid)
            if self._dir_count(mid, ones) >= j:
                hi = mid
            else:
                lo = mid + 1

        count = 0
        if lo:
            if trace is not None:
                trace.append(base + self._dir_off + 8 * (lo - 1))
            count = self._dir_count(lo - 1, ones)
        words = self._words
        length = self._length
        for k in range(lo << 3, len(words)):
            if trace is not None:
                trace.append(base + _WORDS_OFF + 8 * k)
            word = int(words[k])
            if not ones:
                valid = min(64, length - 64 * k)
                word = ~word & ((1 << valid) - 1)
            pc = word.bit_count()
            if count + pc >= j:
                return 64 * k + select_in_word(word, j - count) + 1
            count += pc
        raise AssertionError("select ordinal not found; structure corrupt")

    # -- serialization -----------------------------------------------

    def size_bytes(self) -> int:
        return self._s0_off + 8 * len(self._samples0)

    def to_bytes(self) -> bytes:
        parts = [
            MAGIC, b"\0\0\0\0",
            struct.pack("<Q", self._length),
            self._words.tobytes(),
            self._dir.tobytes(),
            struct.pack("<Q", len(self._samples1)),
            self._samples1.tobytes(),
            struct.pack("<Q", len(self._samples0)),
            self._samples0.tobytes(),
        ]
        return b"".join(parts)

    @classmethod
    def from_buffer(cls, buf, offset: int = 0) -> tuple["BitVector", int]:
        """Parse one serialized vector; returns (vector, end offset)."""
        if buf[offset:offset + 4] != MAGIC:
            raise ValueError("bad bitvector magic")
        (length,) = struct.unpack_from("<Q", buf, offset + 8)
        nwords = (length + 63) // 64
        ndir = length // SUPER_BITS
        pos = offset + _WORDS_OFF
        words = np.frombuffer(buf, _U64, nwords, pos)
        pos += 8 * nwords
        rank_dir = np.frombuffer(buf, _U64, ndir, pos)
        pos += 8 * ndir
        (n1,) = struct.unpack_from("<Q", buf, pos)
        samples1 = np.frombuffer(buf, _U64, n1, pos + 8)
        pos += 8 + 8 * n1
        (n0,) = struct.unpack_from("<Q", buf, pos)
        samples0 = np.frombuffer(buf, _U64, n0, pos + 8)
        pos += 8 + 8 * n0

        if ndir:
            num_ones = int(rank_dir[-1]) + int(
                popcount_words(words[8 * ndir:]).sum())
        else:
            num_ones = int(popcount_words(words).sum())
        return cls(length, words, rank_dir, samples1, samples0, num_ones), pos
