"""Base-b numeral machinery: digit expansions, digital reversal, and the
coprime-leading-digit counting function.

Digits are stored little-endian throughout, so index i holds the coefficient
of b^i and reversal is an index flip.  The digital reverse of n with L digits
is sum(digit[i] * b^(L-1-i)); when n ends in zero digits the reverse is a
shorter integer (leading zeros drop), so reversal is an involution exactly on
integers whose last digit is nonzero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class Base:
    """A fixed radix b >= 2 with its precomputed reversal modulus b^3 - b."""

    b: int
    modulus: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.b < 2:
            raise ValueError(f"base must be >= 2, got {self.b}")
        object.__setattr__(self, "modulus", self.b**3 - self.b)


@dataclass(frozen=True)
class Numeral:
    """An integer with its little-endian base-b expansion."""

    value: int
    digits: tuple[int, ...]
    base: Base

    @classmethod
    def from_int(cls, n: int, base: Base) -> "Numeral":
        if n < 0:
            raise ValueError("numerals are non-negative")
        return cls(n, tuple(digits_of(n, base)), base)

    @property
    def length(self) -> int:
        return len(self.digits)

    def reversed_value(self) -> int:
        return reverse(self.value, self.base)


def digits_of(n: int, base: Base) -> list[int]:
    """Little-endian digit list of n; [0] for n = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return [0]
    b = base.b
    out = []
    while n:
        n, d = divmod(n, b)
        out.append(d)
    return out


def digit_length(n: int, base: Base) -> int:
    """Number of base-b digits of n (1 for n = 0)."""
    return len(digits_of(n, base))


def leading_digit(n: int, base: Base) -> int:
    if n <= 0:
        raise ValueError("n must be positive")
    b = base.b
    while n >= b:
        n //= b
    return n


def reverse(n: int, base: Base) -> int:
    """Digital reverse of n >= 1 in base b.

    reverse(reverse(n)) == n exactly when the last digit of n is nonzero;
    otherwise the reverse is a shorter integer and information is lost.
    """
    if n < 1:
        raise ValueError("reverse is undefined for n < 1")
    b = base.b
    rev = 0
    while n:
        n, d = divmod(n, b)
        rev = rev * b + d
    return rev


def reverse_padded(n: int, length: int, base: Base) -> int:
    """Reverse of n zero-padded to `length` digits: sum(d_i * b^(length-1-i)).

    Agrees with reverse() on integers with exactly `length` digits.
    """
    if n < 0 or n >= base.b**length:
        raise ValueError("n must have at most `length` digits")
    b = base.b
    rev = 0
    for _ in range(length):
        n, d = divmod(n, b)
        rev = rev * b + d
    return rev


def reverse_block(values: np.ndarray, length: int, base: Base) -> np.ndarray:
    """Vectorized digital reverse for an array of integers with exactly
    `length` base-b digits (zero-padded reversal, same value on that range)."""
    b = base.b
    rev = np.zeros_like(values)
    tmp = values.copy()
    for _ in range(length):
        rev = rev * b + tmp % b
        tmp //= b
    return rev


def is_reversal_coprime(n: int, base: Base) -> bool:
    """True iff gcd(n, b^3 - b) = 1 (the coprimality filter on reversed
    numbers that removes all small-modulus obstructions at once)."""
    if n < 1:
        raise ValueError("n must be positive")
    return math.gcd(n, base.modulus) == 1


@lru_cache(maxsize=None)
def coprime_digits(base: Base) -> tuple[int, ...]:
    """Digits d in [1, b) with gcd(d, b) = 1; there are phi(b) of them."""
    return tuple(d for d in range(1, base.b) if math.gcd(d, base.b) == 1)


def rev_coprime_to_base(r: int, base: Base) -> int:
    """1 iff gcd(reverse(r), b) = 1, i.e. the last nonzero digit of r is
    coprime to b; else 0."""
    if r < 1:
        raise ValueError("r must be positive")
    return 1 if math.gcd(reverse(r, base), base.b) == 1 else 0


def residue_admissible(a: int, q: int, base: Base) -> int:
    """1 iff gcd(a, q, b^3 - b) = 1, else 0.

    The progression a mod q can contain reversed primes coprime to b^3 - b
    only in the admissible case; a = 0 means gcd(a, q) = q.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    return 1 if math.gcd(a, q, base.modulus) == 1 else 0


def count_coprime_leading(x: int, base: Base) -> int:
    """#{1 <= n <= x : leading base-b digit of n coprime to b}.

    Equivalently the count of n <= x with gcd(reverse(n), b) = 1.  Computed
    in O(log x) from per-digit-length blocks: a full block of length l
    contributes phi(b) * b^(l-1); the partial top block counts leading
    digits up to the actual one.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0
    b = base.b
    cop = coprime_digits(base)
    length = digit_length(x, base)
    total = 0
    for ell in range(1, length):
        total += len(cop) * b ** (ell - 1)
    block = b ** (length - 1)
    lead = x // block
    total += sum(block for d in cop if d < lead)
    if math.gcd(lead, b) == 1:
        total += x - lead * block + 1
    return total


def coprime_leading_indicator(x: int, base: Base) -> np.ndarray:
    """0/1 float array w[0..x] with w[n] = 1 iff the leading digit of n is
    coprime to b (w[0] = 0)."""
    if x < 0:
        raise ValueError("x must be non-negative")
    b = base.b
    lookup = np.zeros(b, dtype=np.float64)
    lookup[list(coprime_digits(base))] = 1.0
    w = np.zeros(x + 1, dtype=np.float64)
    block = 1
    while block <= x:
        lo = block
        hi = min(block * b - 1, x)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        w[lo : hi + 1] = lookup[n // block]
        block *= b
    return w
