import math

import numpy as np
import pytest

import revprime.representations as reps
from revprime.digits import Base
from revprime.representations import (
    composition_count,
    convolve,
    count_exceptional_evens,
    exact_int_convolve,
    exceptional_evens,
    representation_count,
    squarefree_mask,
    squarefree_shift_count,
)
from revprime.sieve import (
    WeightedSequence,
    get_prime_table,
    reversed_prime_arrays,
    weighted_indicator,
)


def test_convolve_delta():
    d = WeightedSequence("d", np.array([0.0, 1.0]))
    assert convolve(d, d).weights.tolist() == [0.0, 0.0, 1.0]


def test_convolve_hand_example():
    w = weighted_indicator(10, "prime")
    c = convolve(w, w)
    # 10 = 3+7 = 7+3 = 5+5
    assert abs(c.weights[10] - (2 * math.log(3) * math.log(7) + math.log(5) ** 2)) < 1e-12


def test_fft_matches_direct_within_bound():
    rng = np.random.default_rng(42)
    for _ in range(100):
        u = WeightedSequence("u", rng.random(4096))
        v = WeightedSequence("v", rng.random(4096))
        direct = np.convolve(u.weights, v.weights)
        old = reps.DIRECT_OPS_CAP
        reps.DIRECT_OPS_CAP = 1  # force the FFT path
        try:
            fft = convolve(u, v)
        finally:
            reps.DIRECT_OPS_CAP = old
        assert fft.error_bound > 0
        assert float(np.abs(fft.weights - direct).max()) <= fft.error_bound


def test_exact_int_convolve():
    a = np.array([0, 1, 2, 3])
    b = np.array([5, 0, 7])
    expected = np.convolve(a, b)
    got = exact_int_convolve(a, b)
    assert [int(x) for x in got] == expected.tolist()
    big = np.array([2**40, 2**41])
    gotbig = exact_int_convolve(big, big)
    assert gotbig[1] == 2 * 2**81


def brute_family(N, seqs):
    """Literal nested loops over summand values."""
    if len(seqs) == 2:
        u, v = seqs
        return math.fsum(
            u[i] * v[N - i] for i in range(1, N) if u[i] and N - i >= 0 and v[N - i]
        )
    u, rest = seqs[0], seqs[1:]
    return math.fsum(
        u[i] * brute_family(N - i, rest) for i in range(1, N - 1) if u[i]
    )


@pytest.mark.parametrize("b", [2, 10])
def test_families_vs_nested_loops(b):
    base = Base(b)
    M = 400
    pr = weighted_indicator(M, "prime").weights
    rev = weighted_indicator(M, "reversed_prime_coprime", base=base).weights
    for family, seqs, k in (
        ("r11", [pr, rev], None),
        ("r12", [pr, rev, rev], None),
        ("r21", [pr, pr, rev], None),
        ("r0k", [rev, rev], 2),
        ("r0k", [rev, rev, rev], 3),
    ):
        for N in (17, 100, 255, 256, 399):
            got = representation_count(N, family, base, k=k).exact
            want = brute_family(N, seqs)
            assert abs(got - want) <= 1e-9 * max(1.0, want), (b, family, N)


def test_r11_odd_parity_structure(b10):
    # odd N forces p1 = 2, so the count collapses to the N-2 term:
    # 71 = rev(17) is coprime to 990, hence R11(73) = log 2 * log 17
    got = representation_count(73, "r11", b10)
    assert abs(got.exact - math.log(2) * math.log(17)) < 1e-12
    # and an odd N with N-2 not a reversed prime has no representation
    got = representation_count(35, "r11", b10)
    assert got.exact == 0.0


def test_r0k_600_exact_zero(b10):
    for exp in (2, 3):
        profile = representation_count(6 * 10**exp, "r0k", b10, k=2)
        assert profile.exact == 0.0
        assert profile.provenance == "exact"


def test_r12_even_suppressed(b10):
    # even targets only admit p1 = 2 in the ternary mixed sum; the count
    # stays far below the odd-N scale N^2
    even = representation_count(1000, "r12", b10).exact
    odd = representation_count(1001, "r12", b10).exact
    assert even < odd / 50
    from revprime.arithmetic import singular_series_ternary

    assert singular_series_ternary(1000, b10) == 0


def test_composition_counts(b10):
    assert composition_count(6, "s21", b10) == 6
    # constraint is vacuous in a prime base: compositions into k parts
    assert composition_count(20, "s0k", Base(3), k=3) == math.comb(19, 2)
    assert composition_count(50, "s0k", Base(7), k=2) == 49


def brute_s12(N, base):
    from revprime.digits import coprime_leading_indicator

    ind = coprime_leading_indicator(N, base)
    return sum(
        1
        for n2 in range(1, N)
        for n3 in range(1, N - n2)
        if ind[n2] and ind[n3]
    )


@pytest.mark.parametrize("b", [2, 6, 10])
def test_s12_brute(b):
    base = Base(b)
    for N in (10, 57, 200):
        assert composition_count(N, "s12", base) == brute_s12(N, base)


@pytest.mark.parametrize("b", [2, 3, 6, 10])
def test_composition_bounds(b):
    base = Base(b)
    for N in (10**3, 10**4):
        s12 = composition_count(N, "s12", base)
        s21 = composition_count(N, "s21", base)
        assert N * N / (16 * b * b) <= s12 <= N * N / 2
        assert N * N / (8 * b) <= s21 <= N * N / 2


def test_squarefree_mask():
    m = squarefree_mask(50)
    for n in range(51):
        expect = n != 0 and all(n % (d * d) for d in range(2, 8))
        assert m[n] == expect


def test_squarefree_shift_exact(b10):
    profile = squarefree_shift_count(100, b10)
    assert abs(profile.exact - 23.984898763069932) < 1e-12
    assert profile.provenance == "exact"


def test_squarefree_shift_excludes_difference_zero(b10):
    # 17 is itself a reversed prime (rev 71); the n = N term must not count
    profile = squarefree_shift_count(17, b10)
    arr = reversed_prime_arrays(17, b10, require_coprime=True)
    sq = squarefree_mask(17)
    expected = float(arr.weight[(arr.n < 17) & sq[17 - arr.n]].sum())
    assert abs(profile.exact - expected) < 1e-12


def test_squarefree_ratio_tolerance(b10, fixtures):
    tol = fixtures["rsquare_ratio_tol.b10"]
    devs = []
    for N in (10**4, 10**5, 10**6):
        profile = squarefree_shift_count(N, b10)
        devs.append(abs(profile.ratio - 1.0))
        assert devs[-1] <= tol, (N, profile.ratio)
    assert devs[-1] < devs[0]  # the trend tightens over the decade span


def test_exceptional_evens_brute(b10):
    exc = exceptional_evens(100, b10)
    # direct double loop
    table = get_prime_table(100)
    arr = reversed_prime_arrays(100, b10, require_coprime=True)
    revs = set(int(v) for v in arr.n)
    brute = [
        N
        for N in range(2, 101, 2)
        if not any(table.is_prime(p) and (N - p) in revs for p in range(2, N))
    ]
    assert exc.tolist() == brute == [2, 4, 6, 8, 52]
    assert count_exceptional_evens(100, b10) == 5


def test_exception_density_decreasing(b10):
    densities = [
        count_exceptional_evens(x, b10) / (x // 2) for x in (10**3, 10**4, 10**5)
    ]
    assert densities[0] > densities[1] > densities[2]


def test_representation_validation(b10):
    with pytest.raises(ValueError):
        representation_count(1, "r11", b10)
    with pytest.raises(ValueError):
        representation_count(100, "r0k", b10, k=9)
    with pytest.raises(ValueError):
        composition_count(100, "nope", b10)
