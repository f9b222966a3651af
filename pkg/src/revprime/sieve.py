"""Prime generation and reversed-prime enumeration.

A PrimeTable is an odd-number primality mask built by a segmented sieve of
Eratosthenes.  Reversed primes are enumerated prime-side: for each digit
length L, the primes in [b^(L-1), b^L) are reversed in bulk (primes are much
sparser than integers, and a table to b^L is needed for the primality tests
anyway).  Records are buffered per digit length and sorted, which keeps the
merged stream globally increasing because reversal preserves digit length.

The disk cache layout is:

    bytes 0..15   magic "REVPRIME-SIEVE\\0\\0"
    bytes 16..19  u32 version (= 1), little-endian
    bytes 20..27  u64 limit, little-endian
    ...           odd-number bitset, LSB-first within each byte
                  (bit i of the stream is the primality of 2i + 1)
    last 8 bytes  u64 FNV-1a checksum of everything before it
"""

from __future__ import annotations

import math
import os
from collections.abc import Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .digits import Base, coprime_leading_indicator, reverse_block
from .errors import (
    CacheChecksumError,
    CacheError,
    CacheFormatError,
    CacheVersionError,
    ResourceLimitError,
)

CACHE_MAGIC = b"REVPRIME-SIEVE\x00\x00"
CACHE_VERSION = 1
MAX_SIEVE_LIMIT = 1 << 38
MAX_SEQUENCE_LEN = 1 << 31  # dense weight arrays live in one allocation
SEGMENT_ODDS = 1 << 24  # odd numbers per sieving segment


@dataclass
class PrimeTable:
    """Primality of all n <= limit, stored as a mask over odd numbers."""

    limit: int
    odd_mask: np.ndarray  # bool; odd_mask[i] is the primality of 2i + 1

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise ValueError(f"{n} exceeds table limit {self.limit}")
        if n < 2:
            return False
        if n % 2 == 0:
            return n == 2
        return bool(self.odd_mask[n >> 1])

    def primes(self, limit: int | None = None) -> np.ndarray:
        """All primes <= limit (default: the full table), increasing."""
        limit = self.limit if limit is None else min(limit, self.limit)
        if limit < 2:
            return np.empty(0, dtype=np.int64)
        odd = 2 * np.flatnonzero(self.odd_mask[: (limit + 1) // 2]).astype(np.int64) + 1
        return np.concatenate((np.array([2], dtype=np.int64), odd))

    def count(self, limit: int | None = None) -> int:
        limit = self.limit if limit is None else min(limit, self.limit)
        if limit < 2:
            return 0
        return 1 + int(np.count_nonzero(self.odd_mask[: (limit + 1) // 2]))


def _sieve_bytes(limit: int) -> int:
    return (limit + 1) // 2


def sieve_primes(limit: int, threads: int = 1) -> PrimeTable:
    """Segmented odd-only sieve of Eratosthenes up to `limit` inclusive."""
    if not 2 <= limit <= MAX_SIEVE_LIMIT:
        raise ResourceLimitError(
            f"sieve limit {limit} outside [2, {MAX_SIEVE_LIMIT}] "
            f"(mask would need {_sieve_bytes(max(limit, 2))} bytes)"
        )
    size = _sieve_bytes(limit)
    odd = np.ones(size, dtype=bool)
    odd[0] = False  # 1 is not prime

    root = math.isqrt(limit)
    base_size = (root + 1) // 2
    if base_size > 0:
        base = odd[:base_size].copy()
        for p in range(3, root + 1, 2):
            if base[p >> 1]:
                base[(p * p) >> 1 :: p] = False
        base_primes = (2 * np.flatnonzero(base) + 1).tolist()
    else:
        base_primes = []

    def mark(seg_lo: int, seg_hi: int) -> None:
        # indices [seg_lo, seg_hi) of `odd`, representing values 2i + 1
        lo_val = 2 * seg_lo + 1
        for p in base_primes:
            start = max(p * p, ((lo_val + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            idx = start >> 1
            if idx < seg_hi:
                odd[idx:seg_hi:p] = False

    segments = [(lo, min(lo + SEGMENT_ODDS, size)) for lo in range(0, size, SEGMENT_ODDS)]
    if threads > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(lambda seg: mark(*seg), segments))
    else:
        for seg in segments:
            mark(*seg)
    return PrimeTable(limit, odd)


_table_cache: PrimeTable | None = None


def get_prime_table(limit: int, threads: int = 1) -> PrimeTable:
    """Return a table covering `limit`, reusing (or growing) a shared one."""
    global _table_cache
    if _table_cache is None or _table_cache.limit < limit:
        _table_cache = sieve_primes(limit, threads=threads)
    return _table_cache


# ---------------------------------------------------------------------------
# Reversed primes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReversedPrimeRecord:
    """One reversed prime n = reverse(p), with its source prime and weight."""

    n: int
    p: int
    weight: float  # natural log of p
    coprime_flag: bool  # gcd(n, b^3 - b) == 1


@dataclass
class ReversedPrimeArrays:
    """Columnar form of a reversed-prime enumeration, sorted by n."""

    base: Base
    x: int
    n: np.ndarray  # int64, strictly increasing
    p: np.ndarray  # int64, reverse(n)
    weight: np.ndarray  # float64, log(p)
    coprime: np.ndarray  # bool, gcd(n, b^3 - b) == 1

    def __len__(self) -> int:
        return len(self.n)

    def restrict(self, x: int) -> "ReversedPrimeArrays":
        cut = int(np.searchsorted(self.n, x, side="right"))
        return ReversedPrimeArrays(
            self.base, x, self.n[:cut], self.p[:cut],
            self.weight[:cut], self.coprime[:cut],
        )

    def coprime_only(self) -> "ReversedPrimeArrays":
        m = self.coprime
        return ReversedPrimeArrays(
            self.base, self.x, self.n[m], self.p[m],
            self.weight[m], np.ones(int(m.sum()), dtype=bool),
        )


def _max_block_length(x: int, base: Base) -> int:
    """Largest digit length L whose block can contain a reversed prime <= x.

    An L-digit reversed prime exceeds b^(L-1) strictly (its last digit is
    the leading digit of the source prime, hence nonzero), so block L
    contributes only when b^(L-1) < x.
    """
    L = 0
    while base.b**L < x:
        L += 1
    return L


def _build_blocks(L_max: int, base: Base, table: PrimeTable) -> ReversedPrimeArrays:
    b = base.b
    parts_n, parts_p = [], []
    primes = table.primes(min(b**L_max - 1, table.limit))
    for L in range(1, L_max + 1):
        lo = np.searchsorted(primes, b ** (L - 1), side="left")
        hi = np.searchsorted(primes, b**L, side="left")
        block = primes[lo:hi]
        if L > 1:
            # drop primes ending in digit 0 (only p = b itself, for prime b)
            block = block[block % b != 0]
        rev = reverse_block(block, L, base)
        order = np.argsort(rev, kind="stable")
        parts_n.append(rev[order])
        parts_p.append(block[order])
    n = np.concatenate(parts_n) if parts_n else np.empty(0, dtype=np.int64)
    p = np.concatenate(parts_p) if parts_p else np.empty(0, dtype=np.int64)
    weight = np.log(p.astype(np.float64)) if len(p) else np.empty(0)
    if base.modulus < (1 << 63):
        coprime = np.gcd(n, base.modulus) == 1
    else:  # primorial-sized bases overflow int64; values n still fit
        coprime = np.array([math.gcd(int(v), base.modulus) == 1 for v in n], dtype=bool)
    return ReversedPrimeArrays(base, b**L_max - 1, n, p, weight, coprime)


_rev_cache: dict[int, tuple[int, ReversedPrimeArrays]] = {}


def reversed_prime_arrays(
    x: int,
    base: Base,
    require_coprime: bool = False,
    table: PrimeTable | None = None,
) -> ReversedPrimeArrays:
    """All reversed primes n <= x in base b, as sorted columnar arrays.

    n ranges over integers with nonzero last digit whose digital reverse is
    prime; equivalently n = reverse(p) over primes p with nonzero last digit.
    With require_coprime, keep only gcd(n, b^3 - b) = 1.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    L_max = _max_block_length(x, base)
    if table is not None:
        if table.limit < base.b**L_max - 1:
            raise ValueError("prime table too small for this bound")
        full = _build_blocks(L_max, base, table)
    else:
        cached = _rev_cache.get(base.b)
        if cached is None or cached[0] < L_max:
            limit = base.b**L_max - 1
            if limit < 2:
                limit = 2
            full = _build_blocks(L_max, base, get_prime_table(limit))
            _rev_cache[base.b] = (L_max, full)
        else:
            full = cached[1]
    out = full.restrict(x)
    return out.coprime_only() if require_coprime else out


def enumerate_reversed_primes(
    x: int,
    base: Base,
    require_coprime: bool = False,
    table: PrimeTable | None = None,
) -> Iterator[ReversedPrimeRecord]:
    """Stream reversed primes n <= x in increasing n order."""
    arrays = reversed_prime_arrays(x, base, require_coprime, table)
    for n, p, w, c in zip(arrays.n, arrays.p, arrays.weight, arrays.coprime):
        yield ReversedPrimeRecord(int(n), int(p), float(w), bool(c))


# ---------------------------------------------------------------------------
# Weighted indicator sequences
# ---------------------------------------------------------------------------

@dataclass
class WeightedSequence:
    """Dense array of non-negative weights indexed 0..x (weights[0] = 0)."""

    kind: str
    weights: np.ndarray  # float64
    error_bound: float = 0.0  # a-posteriori bound carried through FFT paths

    @property
    def length(self) -> int:
        return len(self.weights)

    def __len__(self) -> int:
        return len(self.weights)


def weighted_indicator(
    x: int,
    kind: str,
    base: Base | None = None,
    table: PrimeTable | None = None,
) -> WeightedSequence:
    """Log-weighted indicator array w[0..x].

    kind = "prime":                   w[n] = log n for prime n
    kind = "reversed_prime_coprime":  w[n] = log(reverse(n)) for reversed
                                      primes n with gcd(n, b^3 - b) = 1
                                      (the weight is the log of the source
                                      prime, not of n itself)
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if x >= MAX_SEQUENCE_LEN:
        raise ResourceLimitError(
            f"indicator of length {x + 1} exceeds the {MAX_SEQUENCE_LEN} ceiling"
        )
    w = np.zeros(x + 1, dtype=np.float64)
    if kind == "prime":
        tbl = table if table is not None else get_prime_table(max(x, 2))
        ps = tbl.primes(x)
        w[ps] = np.log(ps.astype(np.float64))
    elif kind == "reversed_prime_coprime":
        if base is None:
            raise ValueError("base is required for reversed-prime indicators")
        arrays = reversed_prime_arrays(x, base, require_coprime=True, table=table)
        w[arrays.n] = arrays.weight
    else:
        raise ValueError(f"unknown indicator kind {kind!r}")
    return WeightedSequence(kind, w)


def unit_indicator(x: int) -> WeightedSequence:
    """w[n] = 1 for 1 <= n <= x."""
    w = np.ones(x + 1, dtype=np.float64)
    w[0] = 0.0
    return WeightedSequence("all", w)


def leading_coprime_sequence(x: int, base: Base) -> WeightedSequence:
    """0/1 indicator of integers whose leading digit is coprime to b."""
    return WeightedSequence("B_set", coprime_leading_indicator(x, base))


# ---------------------------------------------------------------------------
# Disk cache
# ---------------------------------------------------------------------------

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def fnv1a64(data: bytes | memoryview) -> int:
    h = _FNV_OFFSET
    for byte in bytes(data):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _pack_mask(mask: np.ndarray) -> bytes:
    return np.packbits(mask, bitorder="little").tobytes()


def _unpack_mask(raw: bytes, count: int) -> np.ndarray:
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    return bits[:count].astype(bool)


def cache_store(path: str | os.PathLike, table: PrimeTable) -> None:
    """Write a PrimeTable to disk (single writer: guarded by a lock file,
    written to a temp file and renamed into place)."""
    path = os.fspath(path)
    payload = (
        CACHE_MAGIC
        + CACHE_VERSION.to_bytes(4, "little")
        + table.limit.to_bytes(8, "little")
        + _pack_mask(table.odd_mask)
    )
    checksum = fnv1a64(payload).to_bytes(8, "little")
    lock_path = path + ".lock"
    try:
        fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise CacheError(f"{path}: locked by another writer ({lock_path} exists)")
    try:
        tmp_path = path + ".tmp"
        with open(tmp_path, "wb") as fh:
            fh.write(payload)
            fh.write(checksum)
        os.replace(tmp_path, path)
    finally:
        os.close(fd)
        os.unlink(lock_path)


def cache_load(path: str | os.PathLike) -> PrimeTable:
    """Read a PrimeTable back, validating magic, version, and checksum."""
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < len(CACHE_MAGIC) + 4 + 8 + 8:
        raise CacheFormatError(f"{path}: file too short for a cache header")
    if data[: len(CACHE_MAGIC)] != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic string")
    payload, stored = data[:-8], int.from_bytes(data[-8:], "little")
    if fnv1a64(payload) != stored:
        raise CacheChecksumError(f"{path}: checksum mismatch")
    off = len(CACHE_MAGIC)
    version = int.from_bytes(payload[off : off + 4], "little")
    if version != CACHE_VERSION:
        raise CacheVersionError(f"{path}: version {version}, expected {CACHE_VERSION}")
    limit = int.from_bytes(payload[off + 4 : off + 12], "little")
    count = _sieve_bytes(limit)
    raw = payload[off + 12 :]
    if len(raw) != (count + 7) // 8:
        raise CacheFormatError(f"{path}: bitset length {len(raw)} does not match limit {limit}")
    return PrimeTable(limit, _unpack_mask(raw, count))
