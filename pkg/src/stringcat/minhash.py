"""Stateless min-hash encoder over character n-gram sets.

Each signature component j is the minimum, over the n-grams of a string, of a
salted 32-bit hash mapped to [0, 1]. The hash family is the x86 variant of
32-bit MurmurHash3 applied to the UTF-8 bytes of the token, with the salt as
seed; the unsigned digest is normalized by 2**32 - 1. Component-wise equality
of two signatures estimates the Jaccard coefficient of the underlying gram
sets, and component-wise inequality carries set inclusion: if the grams of x
are a subset of the grams of y, every component of y's signature is <= the
corresponding component of x's signature. The dimension needed to read that
inequality as an inclusion test at false-positive level epsilon is
ceil(-log(epsilon) / log(1 + kx/ky)) for set sizes kx, ky.

Everything here is a pure function of its inputs: encoding needs no fitted
state and is safe to parallelize arbitrarily across rows and components.
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, EncodeError
from .textprep import char_ngrams, normalize

DIGEST_MAX = 2**32 - 1

_MASK = 0xFFFFFFFF
_C1 = 0xCC9E2D51
_C2 = 0x1B873593

# numpy counterparts for the salt-vectorized path
_NP_C3 = np.uint32(0xE6546B64)
_NP_F1 = np.uint32(0x85EBCA6B)
_NP_F2 = np.uint32(0xC2B2AE35)
_NP_5 = np.uint32(5)


def _mix_key_block(k1: int) -> int:
    """Salt-independent mixing of one 4-byte key block."""
    k1 = (k1 * _C1) & _MASK
    k1 = ((k1 << 15) | (k1 >> 17)) & _MASK
    return (k1 * _C2) & _MASK


def _key_schedule(data: bytes) -> tuple[list[int], int | None, int]:
    """Pre-mixed little-endian blocks, pre-mixed tail, and byte length."""
    n = len(data)
    nblocks = n // 4
    blocks = []
    for i in range(0, nblocks * 4, 4):
        k1 = data[i] | (data[i + 1] << 8) | (data[i + 2] << 16) | (data[i + 3] << 24)
        blocks.append(_mix_key_block(k1))
    tail = None
    rem = n & 3
    if rem:
        k1 = 0
        base = nblocks * 4
        if rem >= 3:
            k1 ^= data[base + 2] << 16
        if rem >= 2:
            k1 ^= data[base + 1] << 8
        k1 ^= data[base]
        tail = _mix_key_block(k1)
    return blocks, tail, n


def hash32(token: str, salt: int) -> int:
    """Unsigned 32-bit MurmurHash3 (x86 variant) of the UTF-8 bytes of ``token``.

    Bit-exact across platforms for a given (token, salt).
    """
    blocks, tail, n = _key_schedule(token.encode("utf-8"))
    h1 = salt & _MASK
    for k1 in blocks:
        h1 ^= k1
        h1 = ((h1 << 13) | (h1 >> 19)) & _MASK
        h1 = (h1 * 5 + 0xE6546B64) & _MASK
    if tail is not None:
        h1 ^= tail
    h1 ^= n
    h1 ^= h1 >> 16
    h1 = (h1 * 0x85EBCA6B) & _MASK
    h1 ^= h1 >> 13
    h1 = (h1 * 0xC2B2AE35) & _MASK
    h1 ^= h1 >> 16
    return h1


def _hash32_salts(token: str, salts: np.ndarray) -> np.ndarray:
    """``hash32`` of one token under many salts at once (uint32 array in/out)."""
    blocks, tail, n = _key_schedule(token.encode("utf-8"))
    h1 = salts.astype(np.uint32, copy=True)
    for k1 in blocks:
        h1 ^= np.uint32(k1)
        h1 = (h1 << np.uint32(13)) | (h1 >> np.uint32(19))
        h1 = h1 * _NP_5 + _NP_C3
    if tail is not None:
        h1 ^= np.uint32(tail)
    h1 ^= np.uint32(n)
    h1 ^= h1 >> np.uint32(16)
    h1 *= _NP_F1
    h1 ^= h1 >> np.uint32(13)
    h1 *= _NP_F2
    h1 ^= h1 >> np.uint32(16)
    return h1


def digest_to_unit(digest) -> np.ndarray | float:
    """Map unsigned 32-bit digests onto [0, 1] by dividing by 2**32 - 1."""
    return np.asarray(digest, dtype=np.float64) / np.float64(DIGEST_MAX)


def salted_hash(token: str, salt: int) -> float:
    """Hash ``token`` under ``salt`` into [0, 1]; bit-exact given (token, salt)."""
    return float(digest_to_unit(hash32(token, salt)))


def _signature_digests(
    grams: Iterable[str],
    d: int,
    salt_offset: int,
    gram_cache: dict | None = None,
) -> np.ndarray:
    salts = np.arange(salt_offset, salt_offset + d, dtype=np.uint32)
    best: np.ndarray | None = None
    for g in grams:
        if gram_cache is not None:
            row = gram_cache.get(g)
            if row is None:
                row = _hash32_salts(g, salts)
                gram_cache[g] = row
        else:
            row = _hash32_salts(g, salts)
        best = row if best is None else np.minimum(best, row)
    if best is None:
        raise EncodeError("cannot build a min-hash signature from an empty n-gram set")
    return best


def signature(grams: Iterable[str], d: int, salt_offset: int = 0) -> np.ndarray:
    """Min-hash signature of a gram set: component j = min over grams of h_j.

    Salt j is the component index (offset by ``salt_offset``, for independent
    replications). Raises :class:`EncodeError` on an empty gram set.
    """
    if d < 1:
        raise ConfigError(f"signature dimension must be >= 1, got {d}")
    return np.asarray(digest_to_unit(_signature_digests(grams, d, salt_offset)))


def _encode_rows(strings, d, n_min, n_max):
    gram_cache: dict[str, np.ndarray] = {}
    row_cache: dict[str, np.ndarray] = {}
    out = np.empty((len(strings), d), dtype=np.float64)
    for i, s in enumerate(strings):
        row = row_cache.get(s)
        if row is None:
            grams = set(char_ngrams(normalize(s), n_min, n_max))
            try:
                row = np.asarray(
                    digest_to_unit(_signature_digests(grams, d, 0, gram_cache))
                )
            except EncodeError:
                raise EncodeError(
                    f"row {i}: string {s!r} yields no n-grams to hash"
                ) from None
            row_cache[s] = row
        out[i] = row
    return out


def encode_column(
    strings: Sequence[str],
    d: int,
    n_min: int = 2,
    n_max: int = 4,
    threads: int = 1,
) -> np.ndarray:
    """Encode a column of strings into an (n, d) min-hash feature matrix.

    Row i is the signature of the deduplicated n-gram set of the normalized
    string. The encoder is completely stateless: encoding any partition of the
    rows and concatenating gives the same matrix, which is what makes the
    ``threads`` splitting safe.
    """
    if d < 1:
        raise ConfigError(f"signature dimension must be >= 1, got {d}")
    if threads < 1:
        raise ConfigError(f"thread count must be >= 1, got {threads}")
    if threads == 1 or len(strings) < 2 * threads:
        return _encode_rows(strings, d, n_min, n_max)

    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, len(strings), threads + 1, dtype=int)
    chunks = [strings[bounds[k] : bounds[k + 1]] for k in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: _encode_rows(c, d, n_min, n_max), chunks))
    return np.vstack(parts)


def threads_from_env(default: int = 1) -> int:
    """Parallelism cap from the STRINGCAT_THREADS environment variable."""
    raw = os.environ.get("STRINGCAT_THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"STRINGCAT_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"STRINGCAT_THREADS must be >= 1, got {value}")
    return value


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ConfigError(f"signature dimension mismatch: {a.shape} vs {b.shape}")


def estimate_jaccard(a: np.ndarray, b: np.ndarray) -> float:
    """Fraction of bit-equal components; a consistent estimate of the Jaccard
    coefficient of the two underlying gram sets."""
    _check_same_dim(a, b)
    a, b = np.asarray(a), np.asarray(b)
    return float(np.count_nonzero(a == b)) / a.shape[0]


def min_dim_for_inclusion(epsilon: float, kx: int, ky: int) -> int:
    """Smallest signature dimension identifying inclusions at false-positive
    level ``epsilon``: ceil(-log(epsilon) / log(1 + kx/ky)), clamped to >= 1.

    ``kx`` is the size of the candidate subset, ``ky`` the size of the
    candidate superset.
    """
    if not (0.0 < epsilon < 1.0):
        raise ConfigError(f"epsilon must lie strictly in (0, 1), got {epsilon}")
    if kx <= 0 or ky <= 0:
        raise ConfigError(f"set sizes must be positive, got kx={kx}, ky={ky}")
    d = math.ceil(-math.log(epsilon) / math.log1p(kx / ky))
    return max(1, d)


def inclusion_test(x_sig: np.ndarray, y_sig: np.ndarray) -> bool:
    """True iff every component of ``y_sig`` is <= the matching component of
    ``x_sig``, i.e. the set behind y plausibly contains the set behind x.

    Deterministically true for genuine inclusions; for non-inclusions the
    false-positive probability decays geometrically in the dimension.
    """
    _check_same_dim(x_sig, y_sig)
    return bool(np.all(np.asarray(y_sig) <= np.asarray(x_sig)))
