"""Counting reversed primes in arithmetic progressions, against the
predicted equidistribution main terms.

All observed values are full enumerations (no sampling): the log-weighted
count of reversed primes n with gcd(n, b^3 - b) = 1 in a residue class,
either over a fixed digit length, a cutoff n <= x, or a leading-digit
window.  Main terms share the factor

    (q, b^3-b)/phi((q, b^3-b)) * rho_b(a, q) / q,

which accounts for the classes mod gcd(q, b^3 - b) being either empty or
over-weighted relative to uniform.

The asymptotics hold for q up to exp(c sqrt(L)) with an ineffective c, which
cannot be checked; as a practical stand-in, queries with q > b^(L/4) emit a
ModulusRangeWarning (results are computed regardless).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arithmetic import totient
from .digits import (
    Base,
    count_coprime_leading,
    digit_length,
    residue_admissible,
    rev_coprime_to_base,
    reverse,
    reverse_block,
)
from .errors import ModulusRangeWarning
from .sieve import PrimeTable, get_prime_table, reversed_prime_arrays

NAN = float("nan")


@dataclass
class APResult:
    """Observed log-weighted count vs. predicted main term."""

    observed: float
    main_term: float
    ratio: float  # observed / main_term, NaN when the main term vanishes
    raw_count: int


def _shared_factor(q: int, base: Base) -> Fraction:
    g = math.gcd(q, base.modulus)
    return Fraction(g, totient(g)) / q


def _check_modulus_guard(q: int, L: int, base: Base) -> None:
    if q**4 > base.b**L:
        warnings.warn(
            f"q={q} exceeds the practical guard b^(L/4)={(base.b**L) ** 0.25:.1f} "
            f"for L={L}; the main term may be unreliable",
            ModulusRangeWarning,
            stacklevel=3,
        )


def _result(observed: float, main: float, raw: int) -> APResult:
    ratio = observed / main if main > 0 else NAN
    return APResult(observed, main, ratio, raw)


def weighted_count_by_length(
    L: int, a: int, q: int, base: Base, table: PrimeTable | None = None
) -> APResult:
    """Reversed primes with exactly L digits, coprime to b^3 - b, congruent
    to a mod q; main term phi(b)/b * (q,m)/phi((q,m)) * rho/q * b^L."""
    if L < 1 or q < 1:
        raise ValueError("L and q must be >= 1")
    _check_modulus_guard(q, L, base)
    a %= q
    b = base.b
    arrays = reversed_prime_arrays(b**L - 1, base, require_coprime=True, table=table)
    lo = int(np.searchsorted(arrays.n, b ** (L - 1), side="left"))
    n, w = arrays.n[lo:], arrays.weight[lo:]
    mask = n % q == a
    observed = float(w[mask].sum())
    raw = int(mask.sum())
    main = float(
        Fraction(totient(b), b)
        * _shared_factor(q, base)
        * residue_admissible(a, q, base)
        * b**L
    )
    return _result(observed, main, raw)


def weighted_count_up_to(
    x: int, a: int, q: int, base: Base, table: PrimeTable | None = None
) -> APResult:
    """Reversed primes n <= x, coprime to b^3 - b, with n = a mod q; main
    term (q,m)/phi((q,m)) * rho/q * #{n <= x : leading digit coprime to b}."""
    if x < 1 or q < 1:
        raise ValueError("x and q must be >= 1")
    _check_modulus_guard(q, digit_length(x, base), base)
    a %= q
    arrays = reversed_prime_arrays(x, base, require_coprime=True, table=table)
    mask = arrays.n % q == a
    observed = float(arrays.weight[mask].sum())
    raw = int(mask.sum())
    main = float(
        _shared_factor(q, base)
        * residue_admissible(a, q, base)
        * count_coprime_leading(x, base)
    )
    return _result(observed, main, raw)


def weighted_count_window(
    L: int,
    eta: int,
    r: int,
    a: int,
    q: int,
    base: Base,
    table: PrimeTable | None = None,
) -> APResult:
    """Reversed primes with L digits whose top eta digits equal r, in the
    class a mod q; main term kappa(rev r) * rho * (q,m)/phi((q,m)) * b^(L-eta)/q.

    Counting reversed primes with leading digits r is the same as counting
    primes p = reverse(n) with p = reverse(r) mod b^eta; both enumerations
    are run and must agree (raw counts exactly, weights to rounding).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if not 1 <= eta <= L:
        raise ValueError("eta must satisfy 1 <= eta <= L")
    b = base.b
    if not b ** (eta - 1) <= r < b**eta:
        raise ValueError(f"r={r} outside [{b**(eta-1)}, {b**eta})")
    _check_modulus_guard(q, L, base)
    a %= q

    arrays = reversed_prime_arrays(b**L - 1, base, require_coprime=True, table=table)
    lo = int(np.searchsorted(arrays.n, r * b ** (L - eta), side="left"))
    hi = int(np.searchsorted(arrays.n, (r + 1) * b ** (L - eta), side="left"))
    n, w = arrays.n[lo:hi], arrays.weight[lo:hi]
    mask = n % q == a
    observed = float(w[mask].sum())
    raw = int(mask.sum())

    # independent prime-side enumeration: p = rev(r) mod b^eta
    obs2, raw2 = _prime_side_window(L, eta, r, a, q, base, table)
    if raw2 != raw or abs(obs2 - observed) > 8 * np.finfo(float).eps * max(raw, 1) * max(observed, 1.0):
        raise RuntimeError(
            f"window formulations disagree: n-side ({raw}, {observed}) vs "
            f"prime-side ({raw2}, {obs2})"
        )

    main = float(
        rev_coprime_to_base(r, base)
        * residue_admissible(a, q, base)
        * _shared_factor(q, base)
        * b ** (L - eta)
    )
    return _result(observed, main, raw)


def _prime_side_window(
    L: int, eta: int, r: int, a: int, q: int, base: Base, table: PrimeTable | None
) -> tuple[float, int]:
    b = base.b
    tbl = table if table is not None else get_prime_table(b**L - 1)
    primes = tbl.primes(b**L - 1)
    lo = int(np.searchsorted(primes, b ** (L - 1), side="left"))
    block = primes[lo:]
    if L > 1:
        block = block[block % b != 0]
    block = block[block % b**eta == reverse(r, base)]
    rev = reverse_block(block, L, base)
    if base.modulus < (1 << 63):
        keep = np.gcd(rev, base.modulus) == 1
    else:
        keep = np.array([math.gcd(int(v), base.modulus) == 1 for v in rev], dtype=bool)
    keep &= rev % q == a
    return float(np.log(block[keep].astype(np.float64)).sum()), int(keep.sum())


def window_partition_check(
    L: int, a: int, q: int, base: Base, etas: tuple[int, ...] = (1, 2),
    table: PrimeTable | None = None,
) -> bool:
    """The windows over all r with eta leading digits partition the L-digit
    block: their observed counts must sum to the full-length count."""
    whole = weighted_count_by_length(L, a, q, base, table=table)
    b = base.b
    for eta in etas:
        if eta > L:
            continue
        total, raw = 0.0, 0
        for r in range(b ** (eta - 1), b**eta):
            part = weighted_count_window(L, eta, r, a, q, base, table=table)
            total += part.observed
            raw += part.raw_count
        if raw != whole.raw_count:
            return False
        if abs(total - whole.observed) > 1e-9 * max(1.0, whole.observed):
            return False
    return True
