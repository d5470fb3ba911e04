"""Duplicated first-order Reed-Muller inner code.

The base code is the [128, 8, 64] first-order code on 7 variables plus the
all-one row.  Duplication repeats every codeword bit m times consecutively
(bit t of the base word occupies positions m*t .. m*t+m-1), giving a
[128m, 8, 64m] code.  Decoding is maximum likelihood: fold each duplicated
block into a signed count, run a fast Hadamard transform, and pick the
message with the largest absolute correlation, the sign selecting the
all-one component.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

BASE_LENGTH = 128
DIMENSION = 8
MULTIPLICITIES = (1, 2, 4, 6)


@dataclass(frozen=True)
class RmCode:
    multiplicity: int

    def __post_init__(self):
        if self.multiplicity not in MULTIPLICITIES:
            raise ValueError(f"multiplicity must be one of {MULTIPLICITIES}")

    @property
    def length(self) -> int:
        return BASE_LENGTH * self.multiplicity

    @property
    def dimension(self) -> int:
        return DIMENSION

    @property
    def min_distance(self) -> int:
        return 64 * self.multiplicity


@lru_cache(maxsize=None)
def _base_codewords() -> np.ndarray:
    """(256, 128) table; bit t of message x is parity(x & (t | 0x80))."""
    msgs = np.arange(256, dtype=np.uint16)[:, None]
    coords = (np.arange(128, dtype=np.uint16) | 0x80)[None, :]
    prods = msgs & coords
    # parity of an 8-bit value
    p = prods
    p ^= p >> 4
    p ^= p >> 2
    p ^= p >> 1
    return (p & 1).astype(np.uint8)


@lru_cache(maxsize=None)
def codeword_table(multiplicity: int) -> np.ndarray:
    """(256, 128*m) table of all codewords of the duplicated code."""
    return np.repeat(_base_codewords(), multiplicity, axis=1)


def rm_encode(message: int, code: RmCode) -> np.ndarray:
    """Codeword bits of an 8-bit message, duplicated blocks laid out
    consecutively."""
    if not 0 <= message < 256:
        raise ValueError("message must be an 8-bit value")
    return codeword_table(code.multiplicity)[message].copy()


def build_f_table(received) -> np.ndarray:
    """Fold duplicated blocks to signed counts: entry t is the sum of
    (-1)^bit over the m positions carrying base coordinate t."""
    bits = np.asarray(received, dtype=np.int64)
    if bits.ndim != 1 or bits.size % BASE_LENGTH:
        raise ValueError("received length must be a multiple of 128")
    m = bits.size // BASE_LENGTH
    signs = 1 - 2 * bits
    return signs.reshape(BASE_LENGTH, m).sum(axis=1)


def fht(table) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform of a length-128 table,
    7 butterfly stages of 128 additions each."""
    t = np.asarray(table, dtype=np.int64).copy()
    if t.shape != (BASE_LENGTH,):
        raise ValueError("table must have length 128")
    h = 1
    while h < BASE_LENGTH:
        t = t.reshape(-1, 2, h)
        a = t[:, 0, :] + t[:, 1, :]
        b = t[:, 0, :] - t[:, 1, :]
        t = np.stack([a, b], axis=1).reshape(-1)
        h *= 2
    return t


def rm_decode_ml(received, code: RmCode, rng: np.random.Generator | None = None) -> int:
    """Maximum-likelihood decode; ties between equally close codewords are
    broken uniformly at random from ``rng``."""
    bits = np.asarray(received, dtype=np.uint8)
    if bits.shape != (code.length,):
        raise ValueError(f"received length must be {code.length}")
    msgs = decode_batch(bits[None, :], code, rng)
    return int(msgs[0])


def correlations(received: np.ndarray, code: RmCode) -> np.ndarray:
    """Transformed correlation table for many received words: row r holds
    F-hat over the 128 base messages; the codeword for message (x, sign s)
    lies at distance (128m - (-1)^s F-hat[x]) / 2."""
    b, length = received.shape
    if length != code.length:
        raise ValueError(f"received length must be {code.length}")
    m = code.multiplicity
    signs = (1 - 2 * received.astype(np.int32)).reshape(b, BASE_LENGTH, m)
    t = signs.sum(axis=2, dtype=np.int32)
    h = 1
    while h < BASE_LENGTH:
        t = t.reshape(b, -1, 2, h)
        a = t[:, :, 0, :] + t[:, :, 1, :]
        d = t[:, :, 0, :] - t[:, :, 1, :]
        t = np.stack([a, d], axis=2).reshape(b, BASE_LENGTH)
        h *= 2
    return t


def decode_batch(received: np.ndarray, code: RmCode,
                 rng: np.random.Generator | None = None) -> np.ndarray:
    """Vectorized ML decoding of many received words, shape (B, 128*m).

    Tie-break draws are made row by row in index order, so results are a
    deterministic function of the received block and the generator state.
    """
    return decode_correlations(correlations(received, code), rng)


def decode_correlations(t: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
    """ML messages from a correlation table (see `correlations`)."""
    b = t.shape[0]
    mags = np.abs(t)
    peaks = mags.max(axis=1)
    best = mags.argmax(axis=1)
    msgs = np.where(t[np.arange(b), best] < 0, best | 0x80, best).astype(np.uint8)

    tie_rows = np.nonzero((mags == peaks[:, None]).sum(axis=1) > 1)[0]
    if tie_rows.size:
        if rng is None:
            rng = np.random.default_rng()
        for r in tie_rows:
            cands = np.nonzero(mags[r] == peaks[r])[0]
            if peaks[r] == 0:
                # all correlations vanish: every (x, sign) pair is equidistant
                x = int(rng.integers(0, BASE_LENGTH))
                msgs[r] = x | (0x80 if rng.integers(0, 2) else 0)
            else:
                x = int(cands[rng.integers(0, cands.size)])
                msgs[r] = x | (0x80 if t[r, x] < 0 else 0)
    return msgs
