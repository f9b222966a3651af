import math
import os

import numpy as np
import pytest

from revprime.digits import Base
from revprime.errors import (
    CacheChecksumError,
    CacheFormatError,
    CacheVersionError,
    ResourceLimitError,
)
from revprime.sieve import (
    CACHE_MAGIC,
    cache_load,
    cache_store,
    enumerate_reversed_primes,
    fnv1a64,
    reversed_prime_arrays,
    sieve_primes,
    weighted_indicator,
)


def trial_division_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, math.isqrt(n) + 1)):
            out.append(n)
    return out


def test_sieve_small_sets():
    assert sieve_primes(30).primes().tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert sieve_primes(2).primes().tolist() == [2]
    assert sieve_primes(3).primes().tolist() == [2, 3]


def test_sieve_vs_trial_division():
    table = sieve_primes(10**4)
    assert table.primes().tolist() == trial_division_primes(10**4)
    assert table.count() == 1229
    for n in (0, 1, 2, 3, 4, 9973, 9999, 10000):
        assert table.is_prime(n) == (n in set(trial_division_primes(10**4)))


def test_sieve_millionth_count():
    assert sieve_primes(10**6).count() == 78498


def test_sieve_threads_match():
    a = sieve_primes(10**5, threads=1)
    b = sieve_primes(10**5, threads=4)
    assert np.array_equal(a.odd_mask, b.odd_mask)


def test_sieve_limit_range():
    with pytest.raises(ResourceLimitError):
        sieve_primes(1)
    with pytest.raises(ResourceLimitError) as err:
        sieve_primes((1 << 38) + 1)
    assert "bytes" in str(err.value)


def rev_int(n, b):
    r = 0
    while n:
        r = r * b + n % b
        n //= b
    return r


@pytest.mark.parametrize("b", [2, 3, 6, 10])
def test_enumeration_matches_oracle(b):
    base = Base(b)
    x = 10**4
    # independent n-side oracle: walk n, reverse by divmod, test primality
    table = sieve_primes(10**6)
    expected = []
    for n in range(1, x + 1):
        if n % b == 0:
            continue
        p = rev_int(n, b)
        if table.is_prime(p):
            expected.append((n, p))
    got = [(rec.n, rec.p) for rec in enumerate_reversed_primes(x, base)]
    assert got == expected


@pytest.mark.parametrize("b", [2, 3, 6, 10])
def test_enumeration_matches_nside_oracle_1e5(b):
    # n-side formulation at scale: walk every n <= 1e5 with nonzero last
    # digit, reverse blockwise, and keep those whose reverse is prime
    from revprime.digits import reverse_block

    base = Base(b)
    x = 10**5
    table = sieve_primes(10**6)
    expected_n = []
    L = 1
    while b ** (L - 1) < x:
        lo, hi = b ** (L - 1), min(b**L - 1, x)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        n = n[n % b != 0]
        rev = reverse_block(n, L, base)
        is_p = np.array([table.is_prime(int(p)) for p in rev]) if len(rev) < 2000 else (
            (rev == 2) | ((rev % 2 == 1) & table.odd_mask[rev // 2])
        )
        expected_n.extend(int(v) for v in n[is_p])
        L += 1
    got = reversed_prime_arrays(x, base, table=table)
    assert sorted(expected_n) == got.n.tolist()


def test_enumeration_examples(b10):
    recs = {rec.n: rec for rec in enumerate_reversed_primes(40, b10)}
    assert recs[32].p == 23 and not recs[32].coprime_flag
    assert list(enumerate_reversed_primes(1, b10)) == []
    first = next(enumerate_reversed_primes(2, b10))
    assert (first.n, first.p) == (2, 2)


def test_enumeration_monotone_and_weights(b10):
    arr = reversed_prime_arrays(10**5, b10)
    assert np.all(np.diff(arr.n) > 0)
    assert np.allclose(arr.weight, np.log(arr.p.astype(float)), rtol=0, atol=0)
    # involution on records: reversing n recovers p and vice versa
    for n, p in zip(arr.n[:200], arr.p[:200]):
        assert rev_int(int(n), 10) == int(p) and rev_int(int(p), 10) == int(n)


@pytest.mark.parametrize("b", [2, 3, 5, 7])
def test_only_base_itself_skipped(b):
    # the single prime with last digit zero is p = b (prime bases only);
    # every other prime must appear as a source
    base = Base(b)
    x = b**3
    table = sieve_primes(x)
    sources = set(int(p) for p in reversed_prime_arrays(x - 1, base, table=table).p)
    for p in table.primes(x - 1):
        p = int(p)
        if p == b:
            assert p not in sources
        else:
            assert p in sources, (b, p)


def test_coprime_filter(b10):
    arr = reversed_prime_arrays(1000, b10, require_coprime=True)
    assert np.all(np.gcd(arr.n, 990) == 1)
    # against the unfiltered stream
    full = reversed_prime_arrays(1000, b10)
    assert len(arr) == int((np.gcd(full.n, 990) == 1).sum())


def test_weighted_indicator_prime():
    w = weighted_indicator(10, "prime")
    assert set(np.flatnonzero(w.weights).tolist()) == {2, 3, 5, 7}
    assert w.weights[7] == math.log(7)


def test_weighted_indicator_reversed(b10):
    w = weighted_indicator(40, "reversed_prime_coprime", base=b10)
    # 32 = rev(23) is a reversed prime but gcd(32, 990) = 2, so excluded here
    assert w.weights[32] == 0.0
    assert w.weights[13] == math.log(31)
    assert w.weights[0] == 0.0


def test_weighted_indicator_total_matches_direct_sum(b10):
    w = weighted_indicator(100, "reversed_prime_coprime", base=b10)
    direct = sum(
        math.log(rev_int(n, 10))
        for n in range(1, 101)
        if n % 10 and math.gcd(n, 990) == 1 and sieve_primes(10**3).is_prime(rev_int(n, 10))
    )
    assert abs(w.weights.sum() - direct) < 1e-9


def test_fnv1a64_reference():
    # classic reference vectors for 64-bit FNV-1a
    assert fnv1a64(b"") == 0xCBF29CE484222325
    assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C


def test_cache_roundtrip(tmp_path):
    table = sieve_primes(10**4)
    path = tmp_path / "table.bin"
    cache_store(path, table)
    loaded = cache_load(path)
    assert loaded.limit == table.limit
    assert np.array_equal(loaded.odd_mask, table.odd_mask)


def test_cache_truncation_checksum(tmp_path):
    path = tmp_path / "table.bin"
    cache_store(path, sieve_primes(10**4))
    raw = path.read_bytes()
    path.write_bytes(raw[:-25])
    with pytest.raises(CacheChecksumError):
        cache_load(path)


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "table.bin"
    cache_store(path, sieve_primes(100))
    raw = path.read_bytes()
    path.write_bytes(b"NOTMAGIC" + raw[8:])
    with pytest.raises(CacheFormatError):
        cache_load(path)


def test_cache_bad_version(tmp_path):
    path = tmp_path / "table.bin"
    cache_store(path, sieve_primes(100))
    raw = bytearray(path.read_bytes())
    off = len(CACHE_MAGIC)
    raw[off : off + 4] = (9).to_bytes(4, "little")
    # re-seal the checksum so the version check is what fires
    payload = bytes(raw[:-8])
    raw[-8:] = fnv1a64(payload).to_bytes(8, "little")
    path.write_bytes(bytes(raw))
    with pytest.raises(CacheVersionError):
        cache_load(path)


def test_cache_lock_released(tmp_path):
    path = tmp_path / "table.bin"
    cache_store(path, sieve_primes(100))
    assert not os.path.exists(str(path) + ".lock")
    cache_store(path, sieve_primes(200))
    assert cache_load(path).limit == 200
