"""Circle-method instrumentation: exponential sums, major-arc partitions,
approximation residuals, Weyl-type bound ratios, and weakly-digital
diagnostics.

The exponential sums are evaluated directly over their coefficient arrays:

    S(alpha)      = sum_{p <= x} e(p alpha) log p              kind "prime"
    revS(alpha)   = sum over reversed primes n <= x coprime    kind "reversed_prime_coprime"
                    to b^3 - b of e(n alpha) log(reverse(n))
    v(beta)       = sum_{n <= x} e(n beta)                     kind "all"
    revv(beta)    = sum_{n <= x, lead digit coprime} e(n beta) kind "B_set"

with e(t) = exp(2 pi i t).  Accumulation uses numpy pairwise summation,
whose error grows like log(n) * eps (at least as tight as a compensated
running sum).  Everything here is diagnostic: ratios and residuals are
reported, and nothing on the minor arcs is asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arithmetic import mobius, totient
from .digits import Base, coprime_leading_indicator
from .errors import ResourceLimitError
from .sieve import PrimeTable, get_prime_table, reversed_prime_arrays, weighted_indicator

EXP_SUM_KINDS = ("prime", "reversed_prime_coprime", "all", "B_set")
MAX_SUM_LEN = 1 << 31


def _support(kind: str, x: int, base: Base | None, table: PrimeTable | None):
    """(indices, weights) of the coefficient array for an exponential sum."""
    if kind == "prime":
        tbl = table if table is not None else get_prime_table(max(x, 2))
        ps = tbl.primes(x)
        return ps, np.log(ps.astype(np.float64))
    if kind == "reversed_prime_coprime":
        if base is None:
            raise ValueError("base required for reversed-prime sums")
        arr = reversed_prime_arrays(x, base, require_coprime=True, table=table)
        return arr.n, arr.weight
    if kind == "all":
        n = np.arange(1, x + 1, dtype=np.int64)
        return n, np.ones(x, dtype=np.float64)
    if kind == "B_set":
        if base is None:
            raise ValueError("base required for B-set sums")
        ind = coprime_leading_indicator(x, base)
        n = np.flatnonzero(ind)
        return n, np.ones(len(n), dtype=np.float64)
    raise ValueError(f"unknown exponential sum kind {kind!r}")


def exp_sum(
    alpha: float,
    x: int,
    kind: str,
    base: Base | None = None,
    table: PrimeTable | None = None,
) -> complex:
    """The complex exponential sum of the given kind at alpha (reduced mod 1)."""
    if x < 1:
        raise ValueError("x must be >= 1")
    if x >= MAX_SUM_LEN:
        raise ResourceLimitError(f"sum over {x} terms exceeds the {MAX_SUM_LEN} ceiling")
    alpha = alpha % 1.0
    n, w = _support(kind, x, base, table)
    theta = 2.0 * np.pi * ((n * alpha) % 1.0)
    return complex(np.sum(w * np.cos(theta)), np.sum(w * np.sin(theta)))


# ---------------------------------------------------------------------------
# Major arcs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    a: int
    q: int
    center: float
    halfwidth: float
    lo: float  # clipped to [0, 1]
    hi: float

    def contains(self, alpha: float) -> bool:
        return self.lo <= alpha <= self.hi


@dataclass
class ArcPartition:
    """Major arcs {alpha : |alpha - a/q| <= Q/N} for q <= Q = (log N)^B,
    gcd(a, q) = 1, 0 <= a <= q, clipped to [0, 1]; pairwise disjoint."""

    N: int
    B: float
    Q: float
    arcs: list[Arc] = field(default_factory=list)

    @property
    def total_measure(self) -> float:
        return sum(arc.hi - arc.lo for arc in self.arcs)

    def find(self, alpha: float) -> Arc | None:
        for arc in self.arcs:
            if arc.contains(alpha):
                return arc
        return None


def build_arcs(N: int, B: float) -> ArcPartition:
    """Construct the major-arc family; raises if the arcs are not disjoint
    (N too small for the chosen B)."""
    if N < 16:
        raise ValueError("N must be >= 16")
    if B < 1:
        raise ValueError("B must be >= 1")
    Q = math.log(N) ** B
    halfwidth = Q / N
    arcs = []
    for q in range(1, int(Q) + 1):
        for a in range(0, q + 1):
            if math.gcd(a, q) != 1:
                continue
            center = a / q
            lo = max(0.0, center - halfwidth)
            hi = min(1.0, center + halfwidth)
            arcs.append(Arc(a, q, center, halfwidth, lo, hi))
    arcs.sort(key=lambda arc: (arc.lo, arc.hi))
    for prev, cur in zip(arcs, arcs[1:]):
        if cur.lo <= prev.hi:
            raise ValueError(
                f"major arcs {prev.a}/{prev.q} and {cur.a}/{cur.q} overlap; "
                f"N={N} is too small for B={B}"
            )
    return ArcPartition(N, B, Q, arcs)


def major_arc_residual(
    alpha: float,
    N: int,
    base: Base,
    which: str = "revS",
    B: float = 1.0,
    arcs: ArcPartition | None = None,
    table: PrimeTable | None = None,
) -> float:
    """|sum(alpha) - predicted| / N on the major arc containing alpha.

    which = "S":    predicted = mu(q)/phi(q) * v(beta)
    which = "revS": predicted = mu(q)/phi(q) * 1[q | b^3-b] * revv(beta)

    with beta = alpha - a/q.  At alpha = 0 and which = "S" this reduces to
    the prime-number-theorem residual |theta(N) - N| / N.
    """
    if which not in ("S", "revS"):
        raise ValueError("which must be 'S' or 'revS'")
    part = arcs if arcs is not None else build_arcs(N, B)
    arc = part.find(alpha % 1.0)
    if arc is None:
        raise ValueError(f"alpha={alpha} lies outside every major arc")
    beta = alpha % 1.0 - arc.center
    coef = mobius(arc.q) / totient(arc.q)
    if which == "S":
        lhs = exp_sum(alpha, N, "prime", table=table)
        predicted = coef * _exp_sum_signed(beta, N, "all", base, table)
    else:
        lhs = exp_sum(alpha, N, "reversed_prime_coprime", base, table=table)
        if base.modulus % arc.q != 0:
            coef = 0.0
        predicted = coef * _exp_sum_signed(beta, N, "B_set", base, table)
    return abs(lhs - predicted) / N


def _exp_sum_signed(beta: float, x: int, kind: str, base: Base | None, table) -> complex:
    # beta may be negative and tiny; reduce mod 1 like exp_sum does
    return exp_sum(beta % 1.0, x, kind, base, table)


def distance_to_integer(t: float) -> float:
    f = t % 1.0
    return min(f, 1.0 - f)


def weyl_ratio(
    beta: float,
    N: int,
    base: Base | None = None,
    kind: str = "all",
    table: PrimeTable | None = None,
) -> float:
    """Scaled geometric-sum magnitudes that the linear exponential-sum
    bounds assert are O(1):

    kind "all":   |sum_{n<=N} e(n beta)| * ||beta||
    kind "B_set": |sum_{n<=N, lead coprime} e(n beta)| * ||beta|| / log N
    """
    dist = distance_to_integer(beta)
    if dist == 0.0:
        raise ValueError("beta must not be an integer")
    s = abs(exp_sum(beta, N, kind, base, table))
    if kind == "all":
        return s * dist
    if kind == "B_set":
        return s * dist / math.log(N)
    raise ValueError("kind must be 'all' or 'B_set'")


# ---------------------------------------------------------------------------
# Mean square (Parseval) check
# ---------------------------------------------------------------------------

@dataclass
class ParsevalResult:
    lhs: float  # exact coefficient-square sum
    rhs: float  # DFT quadrature of |revS|^2 over [0,1)
    scaled: float  # lhs / (N log N)


def parseval_check(N: int, base: Base, table: PrimeTable | None = None) -> ParsevalResult:
    """Mean square of revS over the circle, two ways.

    The integrand is a trigonometric polynomial of degree <= N, so a DFT of
    length M >= 2N + 1 integrates it exactly (up to float rounding); the
    orthogonality value is the sum of squared coefficients.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    w = weighted_indicator(N, "reversed_prime_coprime", base=base, table=table).weights
    lhs = float(np.sum(w * w))
    M = 2 * N + 2
    spectrum = np.fft.rfft(w, M)
    sq = np.abs(spectrum) ** 2
    # rfft halves the spectrum; double interior bins (M even: bin M/2 unique)
    rhs = (sq[0] + 2.0 * sq[1:-1].sum() + sq[-1]) / M
    return ParsevalResult(lhs, rhs, lhs / (N * math.log(N)))


# ---------------------------------------------------------------------------
# Minor-arc probe (exploratory only)
# ---------------------------------------------------------------------------

@dataclass
class MinorArcProbe:
    N: int
    B: float
    samples: int
    seed: int
    max_abs: float  # max |revS(alpha)| over sampled minor-arc points
    max_abs_prime: float  # max |S(alpha)| over the same points (report only)
    scaled: dict[float, float]  # A -> max_abs * (log N)^A / N


def minor_arc_probe(
    N: int,
    B: float,
    base: Base,
    samples: int,
    seed: int = 0,
    exponents: tuple[float, ...] = (0.0, 1.0, 2.0, 3.0, 4.0),
    table: PrimeTable | None = None,
) -> MinorArcProbe:
    """Sample |revS| (and |S|) at uniform minor-arc points (rejection
    against the major arcs) and report max |revS| * (log N)^A / N over a
    grid of A.  Purely exploratory: no pass/fail is attached to either the
    conjectured reversed-prime decay or the classical prime-sum decay."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    part = build_arcs(N, B)
    rng = np.random.default_rng(seed)
    arr = reversed_prime_arrays(N, base, require_coprime=True, table=table)
    tbl = table if table is not None else get_prime_table(max(N, 2))
    primes = tbl.primes(N)
    prime_w = np.log(primes.astype(np.float64))
    max_abs = 0.0
    max_abs_prime = 0.0
    drawn = 0
    while drawn < samples:
        alpha = float(rng.random())
        if part.find(alpha) is not None:
            continue
        drawn += 1
        theta = 2.0 * np.pi * ((arr.n * alpha) % 1.0)
        s = abs(complex(np.sum(arr.weight * np.cos(theta)), np.sum(arr.weight * np.sin(theta))))
        max_abs = max(max_abs, s)
        theta_p = 2.0 * np.pi * ((primes * alpha) % 1.0)
        sp = abs(complex(np.sum(prime_w * np.cos(theta_p)), np.sum(prime_w * np.sin(theta_p))))
        max_abs_prime = max(max_abs_prime, sp)
    logN = math.log(N)
    scaled = {A: max_abs * logN**A / N for A in exponents}
    return MinorArcProbe(N, B, samples, seed, max_abs, max_abs_prime, scaled)


# ---------------------------------------------------------------------------
# Weakly digital diagnostics
# ---------------------------------------------------------------------------

@dataclass
class WeaklyDigitalSeed:
    """Per-position digit maps alpha_i: {0..b-1} -> R, stored as rows of a
    (length, b) array; positions beyond the stored length are zero maps."""

    base: Base
    maps: np.ndarray  # shape (length, b)

    def __post_init__(self):
        self.maps = np.asarray(self.maps, dtype=np.float64)
        if self.maps.ndim != 2 or self.maps.shape[1] != self.base.b:
            raise ValueError(f"maps must have shape (L, {self.base.b})")

    @property
    def length(self) -> int:
        return self.maps.shape[0]

    def row(self, i: int) -> np.ndarray:
        if i < self.length:
            return self.maps[i]
        return np.zeros(self.base.b, dtype=np.float64)


def gamma_sigma(seed: WeaklyDigitalSeed, lam: int) -> tuple[list[float], float]:
    """Per-position oscillation measures gamma_i for i < lam and their sum.

        gamma_i = (2 log 2) / (2 (b-1) b^4 (log b)^2)
                  * sum_{0 <= m < n < b} || D_i(m) - D_i(n) ||^2

    with D_i(d) = b * alpha_i(d) - alpha_(i+1)(d) and ||.|| the distance to
    the nearest integer.  A large sum forces cancellation in exponential
    sums weighted by the seeded digit function.
    """
    if lam < 0 or lam > seed.length:
        raise ValueError(f"lambda must be in [0, {seed.length}]")
    b = seed.base.b
    const = (2.0 * math.log(2.0)) / (2.0 * (b - 1) * b**4 * math.log(b) ** 2)
    gammas = []
    for i in range(lam):
        diff = b * seed.row(i) - seed.row(i + 1)
        total = 0.0
        for m in range(b):
            for n in range(m + 1, b):
                t = diff[m] - diff[n]
                t = abs(t - round(t))
                total += t * t
        gammas.append(const * total)
    return gammas, math.fsum(gammas)


def congruence_reversal_seed(
    base: Base, h: int, q: int, L: int, k: int = 0, d: int = 1
) -> WeaklyDigitalSeed:
    """Seed whose digit function is (h/q) * reverse_padded(n, L) + (k/d) * n:

        alpha_i(m) = (h/q) * m * b^(L-i-1) + (k/d) * m * b^i.

    This encodes a reversal phase h/q together with a congruence phase k/d,
    the combination whose oscillation measure controls reversed-prime
    exponential sums twisted by residue classes.
    """
    if q < 1 or d < 1 or L < 1:
        raise ValueError("q, d, L must be >= 1")
    b = base.b
    m = np.arange(b, dtype=np.float64)
    rows = [
        (h / q) * m * float(b ** (L - i - 1)) + (k / d) * m * float(b**i)
        for i in range(L)
    ]
    return WeaklyDigitalSeed(base, np.vstack(rows))
