"""Reversed primes: distribution in arithmetic progressions, Goldbach-type
representation counts, and circle-method instrumentation."""

from .arithmetic import (
    TWIN_PRIME_CONSTANT,
    ZETA2,
    admissible_exp_sum,
    mobius,
    ramanujan_sum,
    singular_series_binary,
    singular_series_k,
    singular_series_squarefree,
    singular_series_ternary,
    singular_series_ternary_divisor_sum,
    totient,
)
from .circle import (
    ArcPartition,
    WeaklyDigitalSeed,
    build_arcs,
    congruence_reversal_seed,
    exp_sum,
    gamma_sigma,
    major_arc_residual,
    minor_arc_probe,
    parseval_check,
    weyl_ratio,
)
from .digits import (
    Base,
    Numeral,
    count_coprime_leading,
    is_reversal_coprime,
    residue_admissible,
    rev_coprime_to_base,
    reverse,
    reverse_padded,
)
from .errors import (
    CacheChecksumError,
    CacheError,
    CacheFormatError,
    CacheVersionError,
    ModulusRangeWarning,
    ResourceLimitError,
)
from .progressions import (
    APResult,
    weighted_count_by_length,
    weighted_count_up_to,
    weighted_count_window,
    window_partition_check,
)
from .representations import (
    RepresentationProfile,
    composition_count,
    convolve,
    count_exceptional_evens,
    exceptional_evens,
    representation_count,
    squarefree_shift_count,
)
from .schnirelmann import (
    GapReport,
    MinKResult,
    min_k_representation,
    primorial,
    scan_min_k,
    verify_gap,
)
from .sieve import (
    PrimeTable,
    ReversedPrimeRecord,
    WeightedSequence,
    cache_load,
    cache_store,
    enumerate_reversed_primes,
    get_prime_table,
    reversed_prime_arrays,
    sieve_primes,
    weighted_indicator,
)

__version__ = "0.1.0"
