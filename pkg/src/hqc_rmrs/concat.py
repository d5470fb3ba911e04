"""Concatenation of the Reed-Solomon outer code with the duplicated
Reed-Muller inner code.

Outer symbols and inner messages are identified byte-for-byte: the
polynomial representation of a GF(256) symbol is the 8-bit inner message,
bit 0 being the constant term.  Encoding RS-encodes the 32 message bytes
and inner-encodes each outer symbol; block i of the output carries outer
symbol i.  Decoding ML-decodes every inner block (always producing some
symbol) and hands the symbol vector to the bounded-distance outer decoder,
which alone can declare failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rm import RmCode, codeword_table, decode_batch
from .rs import RsCode, rs_decode, rs_encode

MESSAGE_BYTES = 32


@dataclass(frozen=True)
class ConcatCode:
    outer: RsCode
    inner: RmCode

    def __post_init__(self):
        if self.outer.k_e != MESSAGE_BYTES:
            raise ValueError("outer dimension must be 32 symbols")

    @property
    def n_bits(self) -> int:
        return self.outer.n_e * self.inner.length

    @property
    def k_bits(self) -> int:
        return self.outer.k_e * self.inner.dimension

    @property
    def design_distance(self) -> int:
        return self.outer.d_e * self.inner.min_distance


def concat_encode(message: bytes, code: ConcatCode) -> np.ndarray:
    """Bit vector of length n_bits for a 32-byte message."""
    if len(message) != MESSAGE_BYTES:
        raise ValueError(f"message must be {MESSAGE_BYTES} bytes")
    symbols = np.frombuffer(rs_encode(message, code.outer), dtype=np.uint8)
    return codeword_table(code.inner.multiplicity)[symbols].reshape(-1)


def concat_decode(received: np.ndarray, code: ConcatCode,
                  rng: np.random.Generator | None = None) -> bytes:
    """Two-stage decode; raises rs.DecodeFailure from the outer stage."""
    bits = np.asarray(received, dtype=np.uint8)
    if bits.shape != (code.n_bits,):
        raise ValueError(f"received must have {code.n_bits} bits")
    blocks = bits.reshape(code.outer.n_e, code.inner.length)
    symbols = decode_batch(blocks, code.inner, rng)
    return rs_decode(symbols, code.outer)
