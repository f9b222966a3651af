"""Sums of reversed primes only: gap-interval verification in primorial
bases, minimal-k representation search, and range scans.

The reversed-prime set here carries NO coprimality filter: every n whose
digital reverse is prime is admitted.  In the primorial base b_i (product
of the first i primes) every prime above b_i ends in a digit coprime to
b_i, so L-digit reversed primes have leading digit 1 or > p_i; the interval
[2 b_i^(L-1), (p_i + 1) b_i^(L-1)] is therefore free of reversed primes for
i >= 2, which forces any representation of its right endpoint to use at
least (p_i + 1)/2 summands.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .digits import Base
from .sieve import PrimeTable, reversed_prime_arrays

_FIRST_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)

MAX_SEARCH_K = 8


def primorial(i: int) -> int:
    """Product of the first i primes, 1 <= i <= 9."""
    if not 1 <= i <= len(_FIRST_PRIMES):
        raise ValueError(f"i must be in [1, {len(_FIRST_PRIMES)}]")
    out = 1
    for p in _FIRST_PRIMES[:i]:
        out *= p
    return out


@dataclass
class GapReport:
    base: Base
    L: int
    lo: int
    hi: int
    reversed_prime_count: int  # exact enumeration over [lo, hi]
    forced_k: Fraction  # (p_i + 1) / 2, the forced summand count at hi


def verify_gap(i: int, L: int, table: PrimeTable | None = None) -> GapReport:
    """Enumerate reversed primes in [2 b_i^(L-1), (p_i+1) b_i^(L-1)].

    The count is 0 for i >= 2 and L >= 2 by the digit argument above; the
    i = 1 construction is degenerate (p_1 + 1 = 3 is itself below the next
    coprime digit) and the report simply records what enumeration finds.
    """
    if L < 2:
        raise ValueError("L must be >= 2")
    b_i = primorial(i)
    p_i = _FIRST_PRIMES[i - 1]
    base = Base(b_i)
    lo = 2 * b_i ** (L - 1)
    hi = (p_i + 1) * b_i ** (L - 1)
    arrays = reversed_prime_arrays(hi, base, require_coprime=False, table=table)
    inside = int(np.count_nonzero((arrays.n >= lo) & (arrays.n <= hi)))
    return GapReport(base, L, lo, hi, inside, Fraction(p_i + 1, 2))


@dataclass
class MinKResult:
    N: int
    k: int | None  # smallest summand count <= k_max, or None
    witness: list[int]  # one representation (empty when k is None)
    single: bool  # True when N is itself a reversed prime (k = 1)


def _reversed_prime_pool(N: int, base: Base, table: PrimeTable | None):
    arrays = reversed_prime_arrays(N, base, require_coprime=False, table=table)
    values = [int(v) for v in arrays.n]
    return values, set(values)


def _find_sum(N: int, k: int, values: list[int], pool: set[int]) -> list[int] | None:
    """Smallest-first search for N as a sum of exactly k pool elements."""
    if k == 1:
        return [N] if N in pool else None
    if k == 2:
        for r in values:
            if 2 * r > N:
                break
            if N - r in pool:
                return [r, N - r]
        return None
    if not values:
        return None
    smallest = values[0]
    for r in values:
        if r + (k - 1) * smallest > N:
            break
        rest = _find_sum(N - r, k - 1, values, pool)
        if rest is not None:
            return [r] + rest
    return None


def min_k_representation(
    N: int, base: Base, k_max: int, table: PrimeTable | None = None
) -> MinKResult:
    """Smallest k <= k_max with N a sum of k reversed primes, plus one
    witness.  k = 1 (N itself a reversed prime) is reported but flagged,
    since the constant of interest is defined with k > 1."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if not 1 <= k_max <= MAX_SEARCH_K:
        raise ValueError(f"k_max must be in [1, {MAX_SEARCH_K}]")
    values, pool = _reversed_prime_pool(N, base, table)
    for k in range(1, k_max + 1):
        witness = _find_sum(N, k, values, pool)
        if witness is not None:
            return MinKResult(N, k, witness, single=(k == 1))
    return MinKResult(N, None, [], single=False)


@dataclass
class ScanResult:
    x_lo: int
    x_hi: int
    k_max: int
    counts: dict[int, int]  # minimal k -> how many N in range attain it
    failures: list[int]  # N with no representation within k_max

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + len(self.failures)


def scan_min_k(
    x_lo: int, x_hi: int, base: Base, k_max: int, table: PrimeTable | None = None
) -> ScanResult:
    """Minimal-k histogram over [x_lo, x_hi]; deterministic (pure search
    over one shared reversed-prime pool)."""
    if not 2 <= x_lo <= x_hi:
        raise ValueError("need 2 <= x_lo <= x_hi")
    if not 1 <= k_max <= MAX_SEARCH_K:
        raise ValueError(f"k_max must be in [1, {MAX_SEARCH_K}]")
    values, pool = _reversed_prime_pool(x_hi, base, table)
    counts: dict[int, int] = {}
    failures: list[int] = []
    for N in range(x_lo, x_hi + 1):
        found = None
        for k in range(1, k_max + 1):
            if _find_sum(N, k, values, pool) is not None:
                found = k
                break
        if found is None:
            failures.append(N)
        else:
            counts[found] = counts.get(found, 0) + 1
    return ScanResult(x_lo, x_hi, k_max, counts, failures)
