"""Deterministic randomness for the scheme and the simulator.

All randomness in this package flows through counter-mode Philox streams
keyed by ``(seed, domain)``.  The domain constants below keep independent
uses (public ring element, secret supports, encryption randomness, channel
noise, decoder tie-breaking) on separate streams, so a test can freeze one
stream without disturbing the others.  Simulation batches additionally set
the Philox counter to the batch index, which makes every trial's randomness
a pure function of ``(seed, domain, batch)`` -- independent of worker count
and scheduling.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# Stream domains.  Values are part of the on-disk/replay contract: changing
# them changes every derived key, ciphertext and simulation result.
DOMAIN_PUBLIC = 1      # keygen: uniform ring element h
DOMAIN_SECRET = 2      # keygen: supports x, y
DOMAIN_ENCRYPT = 3     # encrypt: supports r1, r2, e
DOMAIN_MESSAGE = 4     # simulator: random plaintexts / codeword messages
DOMAIN_CHANNEL = 5     # simulator: BSC noise
DOMAIN_TIEBREAK = 6    # decoder tie-breaking


def stream(seed: int, domain: int, block: int = 0) -> np.random.Generator:
    """Philox generator for stream ``(seed, domain)`` positioned at ``block``.

    ``block`` occupies the third counter word, so streams with different
    block values never overlap (a single block would have to consume 2^128
    outputs to collide with the next one).
    """
    key = np.array([seed & _MASK64, domain & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, block & _MASK64, (block >> 64) & _MASK64],
                       dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def bsc_threshold(p: float) -> int:
    """32-bit integer threshold used to flip channel bits.

    A bit flips when a uniform uint32 draw is ``< bsc_threshold(p)``; the
    effective flip probability is p rounded to a multiple of 2^-32.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    return min(round(p * 2**32), 2**32 - 1) if p < 1.0 else 2**32
