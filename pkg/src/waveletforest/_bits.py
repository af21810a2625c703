"""Word-level helpers shared by the packed structures."""

from __future__ import annotations

import numpy as np

WORD_BITS = 64

_U64 = np.dtype("<u8")


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack an array of 0/1 bytes into little-endian 64-bit words.

    Bit i of the sequence ends up in word i // 64 at intra-word offset
    i % 64. The last word is zero-padded.
    """
    n = int(bits.size)
    nwords = (n + 63) // 64
    out = np.zeros(nwords * 8, dtype=np.uint8)
    if n:
        packed = np.packbits(bits, bitorder="little")
        out[: packed.size] = packed
    return out.view(_U64)


def popcount_words(words: np.ndarray) -> np.ndarray:
    """Per-word popcounts as int64."""
    return np.bitwise_count(words).astype(np.int64)


def select_in_word(word: int, j: int) -> int:
    """0-based offset of the j-th (1-based) set bit of a 64-bit word.

    The caller guarantees the word holds at least j set bits.
    """
    for shift in range(0, 64, 8):
        byte = (word >> shift) & 0xFF
        c = byte.bit_count()
        if j <= c:
            while True:
                low = byte & 1
                byte >>= 1
                if low:
                    j -= 1
                    if j == 0:
                        return shift
                shift += 1
        j -= c
    raise ValueError("word holds fewer than j set bits")
