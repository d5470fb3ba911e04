"""Shortened Reed-Solomon outer code over GF(256).

Field arithmetic uses the polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11D)
with generator 0x02; both are fixed constants of the wire format.  The
code is the classical shortening of a [255, 255-2t] systematic code: the
generator polynomial has roots alpha^1 .. alpha^2t, codewords carry the
2t parity symbols at indices 0..2t-1 and the message verbatim above them.
Decoding runs syndromes -> Berlekamp-Massey -> Chien search -> Forney.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

FIELD_POLY = 0x11D
GENERATOR = 0x02


class DecodeFailure(Exception):
    """Bounded-distance decoding found no codeword within radius."""


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    exp = np.zeros(510, dtype=np.uint8)
    log = np.zeros(256, dtype=np.int64)
    x = 1
    for i in range(255):
        exp[i] = x
        log[x] = i
        x <<= 1
        if x & 0x100:
            x ^= FIELD_POLY
    exp[255:510] = exp[0:255]
    return exp, log


_EXP, _LOG = _build_tables()


def gf_mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return int(_EXP[_LOG[a] + _LOG[b]])


def gf_inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no inverse in GF(256)")
    return int(_EXP[255 - _LOG[a]])


def gf_pow(a: int, e: int) -> int:
    if a == 0:
        return 0 if e else 1
    return int(_EXP[(_LOG[a] * e) % 255])


@dataclass(frozen=True)
class RsCode:
    n_e: int
    k_e: int = 32

    def __post_init__(self):
        if not self.k_e < self.n_e <= 255:
            raise ValueError("need k_e < n_e <= 255")
        if (self.n_e - self.k_e) % 2:
            raise ValueError("parity symbol count must be even (d_e = 2*delta_e + 1)")

    @property
    def d_e(self) -> int:
        return self.n_e - self.k_e + 1

    @property
    def delta_e(self) -> int:
        return (self.d_e - 1) // 2

    @property
    def generator_poly(self) -> tuple[int, ...]:
        """Coefficients g_0..g_2t of prod_{j=1..2t} (x - alpha^j), monic."""
        return _genpoly(self.n_e - self.k_e)

    @property
    def _syndrome_grid(self) -> np.ndarray:
        return _syndrome_grid(self.n_e, self.n_e - self.k_e)


@lru_cache(maxsize=None)
def _genpoly(nparity: int) -> tuple[int, ...]:
    g = [1]
    for j in range(1, nparity + 1):
        root = gf_pow(GENERATOR, j)
        nxt = [0] * (len(g) + 1)
        for i, c in enumerate(g):
            nxt[i] ^= gf_mul(c, root)
            nxt[i + 1] ^= c
        g = nxt
    return tuple(g)


@lru_cache(maxsize=None)
def _syndrome_grid(n_e: int, nparity: int) -> np.ndarray:
    """log(alpha^(i*j)) for syndrome j = 1..2t (rows) and position i (cols)."""
    j = np.arange(1, nparity + 1, dtype=np.int64)[:, None]
    i = np.arange(n_e, dtype=np.int64)[None, :]
    return (i * j) % 255


def rs_encode(message, code: RsCode) -> bytes:
    """Systematic codeword: 2t parity symbols then the message symbols."""
    msg = bytes(message)
    if len(msg) != code.k_e:
        raise ValueError(f"message must have {code.k_e} symbols")
    g = code.generator_poly
    npar = code.n_e - code.k_e
    rem = bytearray(npar)
    for sym in reversed(msg):
        feedback = sym ^ rem[-1]
        rem[1:] = rem[:-1]
        rem[0] = 0
        if feedback:
            lf = _LOG[feedback]
            for i in range(npar):
                if g[i]:
                    rem[i] ^= _EXP[lf + _LOG[g[i]]]
    return bytes(rem) + msg


def syndromes(received: np.ndarray, code: RsCode) -> np.ndarray:
    """S_j = r(alpha^j) for j = 1..2t, vectorized over positions."""
    r = np.asarray(received, dtype=np.uint8)
    grid = code._syndrome_grid
    terms = np.where(r[None, :] != 0, _EXP[(_LOG[r][None, :] + grid) % 255], 0)
    return np.bitwise_xor.reduce(terms.astype(np.uint8), axis=1)


def rs_decode(received, code: RsCode) -> bytes:
    """Message of the unique codeword within distance delta_e, if any.

    Raises DecodeFailure when the error locator is inconsistent (degree
    above delta_e, wrong root count, or a zero error magnitude).  Patterns
    of weight above delta_e may instead decode to a wrong codeword; both
    outcomes count as failure events in DFR accounting.
    """
    r = np.asarray(bytearray(received), dtype=np.uint8)
    if r.shape != (code.n_e,):
        raise ValueError(f"received must have {code.n_e} symbols")
    synd = syndromes(r, code)
    if not synd.any():
        return r[code.n_e - code.k_e:].tobytes()

    sigma = _berlekamp_massey(synd.tolist(), code.delta_e)
    if sigma is None:
        raise DecodeFailure("locator degree exceeds correction radius")
    positions = _chien_search(sigma, code.n_e)
    if len(positions) != len(sigma) - 1:
        raise DecodeFailure("locator roots do not match its degree")
    corrected = bytearray(r.tobytes())
    for pos, mag in zip(positions, _forney(synd.tolist(), sigma, positions)):
        if mag == 0:
            raise DecodeFailure("zero error magnitude")
        corrected[pos] ^= mag
    return bytes(corrected[code.n_e - code.k_e:])


def _berlekamp_massey(synd: list[int], delta_e: int) -> list[int] | None:
    """Error locator sigma(x) as coefficient list [1, s_1, ..., s_L];
    None when L would exceed delta_e."""
    nsynd = len(synd)
    c = [1] + [0] * nsynd
    b = [1] + [0] * nsynd
    el, m, bb = 0, 1, 1
    for i in range(nsynd):
        d = synd[i]
        for j in range(1, el + 1):
            d ^= gf_mul(c[j], synd[i - j])
        if d == 0:
            m += 1
        elif 2 * el <= i:
            t = c.copy()
            coef = gf_mul(d, gf_inv(bb))
            for j in range(nsynd + 1 - m):
                c[j + m] ^= gf_mul(coef, b[j])
            el, b, bb, m = i + 1 - el, t, d, 1
        else:
            coef = gf_mul(d, gf_inv(bb))
            for j in range(nsynd + 1 - m):
                c[j + m] ^= gf_mul(coef, b[j])
            m += 1
    if el > delta_e:
        return None
    return c[: el + 1]


def _chien_search(sigma: list[int], n_e: int) -> list[int]:
    """Positions i < n_e with sigma(alpha^-i) = 0, vectorized."""
    i = np.arange(n_e, dtype=np.int64)
    acc = np.full(n_e, sigma[0], dtype=np.uint8)
    for j in range(1, len(sigma)):
        if sigma[j]:
            e = (_LOG[sigma[j]] - i * j) % 255
            acc ^= _EXP[e]
    return np.nonzero(acc == 0)[0].tolist()


def _forney(synd: list[int], sigma: list[int], positions: list[int]) -> list[int]:
    """Error magnitudes at the located positions (first consecutive root
    b = 1, so no position-power correction factor)."""
    # omega(x) = s(x) * sigma(x) mod x^2t
    omega = [0] * len(synd)
    for i, sc in enumerate(sigma):
        if not sc:
            continue
        for j, sy in enumerate(synd):
            if i + j < len(synd):
                omega[i + j] ^= gf_mul(sc, sy)
    # formal derivative of sigma keeps odd-degree terms
    mags = []
    for pos in positions:
        xinv = gf_pow(GENERATOR, (255 - pos) % 255)  # alpha^-pos
        num = _poly_eval(omega, xinv)
        den = 0
        xp = 1
        for j in range(1, len(sigma), 2):
            den ^= gf_mul(sigma[j], xp)
            xp = gf_mul(xp, gf_mul(xinv, xinv))
        if den == 0:
            mags.append(0)
        else:
            mags.append(gf_mul(num, gf_inv(den)))
    return mags


def _poly_eval(coeffs: list[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = gf_mul(acc, x) ^ c
    return acc
