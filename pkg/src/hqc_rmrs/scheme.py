"""Public-key encryption over the quasi-cyclic ring with the concatenated
decoder.

KeyGen:   h uniform in R, (x, y) of weight w; pk = (h, s = x + h*y).
Encrypt:  (r1, r2) of weight w_r, e of weight w_e;
          u = r1 + h*r2,  v = embed(encode(m)) + s*r2 + e.
Decrypt:  decode the first n1*n2 bits of v + u*y.

The codeword occupies coordinates 0..N-1 of v; the last l = n - N
coordinates carry noise only and are ignored by decoding.  All randomness
is drawn from domain-separated counter-mode streams (see prng), so a seed
fully determines keys and ciphertexts; the keyword-only overrides exist
for tests that freeze one stream.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import prng
from .concat import concat_decode, concat_encode
from .params import HqcParams, params_by_id
from .ring import RingElement, SparseSupport, cyclic_mul_sparse, sample_fixed_weight, sample_uniform

MAGIC_PUBLIC = b"HQPK"
MAGIC_SECRET = b"HQSK"
MAGIC_CIPHERTEXT = b"HQCT"


@dataclass(frozen=True)
class PublicKey:
    params: HqcParams
    h: RingElement
    s: RingElement


@dataclass(frozen=True)
class SecretKey:
    params: HqcParams
    x: SparseSupport
    y: SparseSupport


@dataclass(frozen=True)
class KeyPair:
    public: PublicKey
    secret: SecretKey


@dataclass(frozen=True)
class Ciphertext:
    params: HqcParams
    u: RingElement
    v: RingElement


@dataclass(frozen=True)
class EncryptTrace:
    """Randomness used by one encryption, exposed for tests and simulation."""
    r1: SparseSupport
    r2: SparseSupport
    e: SparseSupport


def keygen(params: HqcParams, seed: int, *,
           x: SparseSupport | None = None,
           y: SparseSupport | None = None,
           h: RingElement | None = None) -> KeyPair:
    if h is None:
        h = sample_uniform(params.n, prng.stream(seed, prng.DOMAIN_PUBLIC))
    key_rng = prng.stream(seed, prng.DOMAIN_SECRET)
    if x is None:
        x = sample_fixed_weight(params.n, params.w, key_rng)
    if y is None:
        y = sample_fixed_weight(params.n, params.w, key_rng)
    s = x.to_ring() + cyclic_mul_sparse(y, h)
    return KeyPair(PublicKey(params, h, s), SecretKey(params, x, y))


def embed(codeword_bits: np.ndarray, n: int) -> RingElement:
    """Place an N-bit codeword in coordinates 0..N-1 of an n-bit element."""
    bits = np.asarray(codeword_bits, dtype=np.uint8)
    value = int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
    return RingElement(n, value)


def encrypt_with_trace(pk: PublicKey, message: bytes, seed: int, *,
                       r1: SparseSupport | None = None,
                       r2: SparseSupport | None = None,
                       e: SparseSupport | None = None) -> tuple[Ciphertext, EncryptTrace]:
    params = pk.params
    enc_rng = prng.stream(seed, prng.DOMAIN_ENCRYPT)
    if r1 is None:
        r1 = sample_fixed_weight(params.n, params.w_r, enc_rng)
    if r2 is None:
        r2 = sample_fixed_weight(params.n, params.w_r, enc_rng)
    if e is None:
        e = sample_fixed_weight(params.n, params.w_e, enc_rng)
    u = r1.to_ring() + cyclic_mul_sparse(r2, pk.h)
    mg = embed(concat_encode(message, params.code), params.n)
    v = mg + cyclic_mul_sparse(r2, pk.s) + e.to_ring()
    return Ciphertext(params, u, v), EncryptTrace(r1, r2, e)


def encrypt(pk: PublicKey, message: bytes, seed: int, **overrides) -> Ciphertext:
    ct, _ = encrypt_with_trace(pk, message, seed, **overrides)
    return ct


def decrypt(sk: SecretKey, ct: Ciphertext) -> bytes:
    """Decoded plaintext; raises rs.DecodeFailure on a decryption failure.

    Tie-breaking inside the inner decoder uses a fixed stream, so
    decryption is a deterministic function of (sk, ct).
    """
    params = sk.params
    if ct.u.n != params.n or ct.v.n != params.n:
        raise ValueError("ciphertext length does not match parameters")
    noisy = ct.v + cyclic_mul_sparse(sk.y, ct.u)
    bits = noisy.to_bits()[: params.truncate_len]
    return concat_decode(bits, params.code, prng.stream(0, prng.DOMAIN_TIEBREAK))


def extract_error(sk: SecretKey, ct: Ciphertext, message: bytes) -> RingElement:
    """Error vector e' = v + u*y + embed(mG) seen by the decoder (full n
    bits, untruncated); simulation support."""
    params = sk.params
    mg = embed(concat_encode(message, params.code), params.n)
    return ct.v + cyclic_mul_sparse(sk.y, ct.u) + mg


# --- file formats ----------------------------------------------------------
#
# public key:  magic "HQPK" | id byte | ring(h) | ring(s)
# secret key:  magic "HQSK" | id byte | w uint32le x indices | w uint32le y
# ciphertext:  magic "HQCT" | id byte | ring(u) | ring(v)
# ring elements use the 4-byte length header + packed-bit payload format.


def _support_bytes(s: SparseSupport) -> bytes:
    return b"".join(i.to_bytes(4, "little") for i in s.indices)


def _read_support(data: bytes, offset: int, count: int, n: int) -> tuple[SparseSupport, int]:
    end = offset + 4 * count
    if end > len(data):
        raise ValueError("truncated support list")
    idx = tuple(int.from_bytes(data[i:i + 4], "little") for i in range(offset, end, 4))
    return SparseSupport(n, idx), end


def public_key_bytes(pk: PublicKey) -> bytes:
    return MAGIC_PUBLIC + bytes([pk.params.param_id]) + pk.h.to_bytes() + pk.s.to_bytes()


def secret_key_bytes(sk: SecretKey) -> bytes:
    return (MAGIC_SECRET + bytes([sk.params.param_id])
            + _support_bytes(sk.x) + _support_bytes(sk.y))


def ciphertext_bytes(ct: Ciphertext) -> bytes:
    return MAGIC_CIPHERTEXT + bytes([ct.params.param_id]) + ct.u.to_bytes() + ct.v.to_bytes()


def _parse_header(data: bytes, magic: bytes, kind: str) -> HqcParams:
    if data[:4] != magic:
        raise ValueError(f"not a {kind} file (bad magic)")
    return params_by_id(data[4])


def public_key_from_bytes(data: bytes) -> PublicKey:
    params = _parse_header(data, MAGIC_PUBLIC, "public-key")
    ring_len = 4 + (params.n + 7) // 8
    h = RingElement.from_bytes(data[5:5 + ring_len])
    s = RingElement.from_bytes(data[5 + ring_len:5 + 2 * ring_len])
    if len(data) != 5 + 2 * ring_len:
        raise ValueError("trailing bytes in public-key file")
    return PublicKey(params, h, s)


def secret_key_from_bytes(data: bytes) -> SecretKey:
    params = _parse_header(data, MAGIC_SECRET, "secret-key")
    x, off = _read_support(data, 5, params.w, params.n)
    y, off = _read_support(data, off, params.w, params.n)
    if off != len(data):
        raise ValueError("trailing bytes in secret-key file")
    return SecretKey(params, x, y)


def ciphertext_from_bytes(data: bytes) -> Ciphertext:
    params = _parse_header(data, MAGIC_CIPHERTEXT, "ciphertext")
    ring_len = 4 + (params.n + 7) // 8
    u = RingElement.from_bytes(data[5:5 + ring_len])
    v = RingElement.from_bytes(data[5 + ring_len:5 + 2 * ring_len])
    if len(data) != 5 + 2 * ring_len:
        raise ValueError("trailing bytes in ciphertext file")
    return Ciphertext(params, u, v)


def _write(path, data: bytes) -> None:
    with open(path, "wb") as f:
        f.write(data)


def _read(path) -> bytes:
    with open(path, "rb") as f:
        return f.read()


def save_public_key(pk: PublicKey, path: str | os.PathLike) -> None:
    _write(path, public_key_bytes(pk))


def load_public_key(path: str | os.PathLike) -> PublicKey:
    return public_key_from_bytes(_read(path))


def save_secret_key(sk: SecretKey, path: str | os.PathLike) -> None:
    _write(path, secret_key_bytes(sk))


def load_secret_key(path: str | os.PathLike) -> SecretKey:
    return secret_key_from_bytes(_read(path))


def save_ciphertext(ct: Ciphertext, path: str | os.PathLike) -> None:
    _write(path, ciphertext_bytes(ct))


def load_ciphertext(path: str | os.PathLike) -> Ciphertext:
    return ciphertext_from_bytes(_read(path))
