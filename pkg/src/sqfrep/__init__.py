"""Toolkit for verifying that integers are a prime plus a square-free
number co-prime to a modulus, and for reproducing the explicit analytic
bounds that extend the verification beyond computational range."""

from .sieve import (
    SEGMENT_CAPACITY,
    Segment,
    SegmentCapacityError,
    is_prime,
    is_squarefree,
    mobius_in,
    primes_in,
    sieve_segment,
    squarefree_bitmap,
)
from .oracles import (
    CountReport,
    count_T,
    count_Tq,
    count_report,
    prime_count_progression,
    theta,
    theta_progression,
    weighted_R,
    weighted_Rq,
)
from .witness import (
    ArithContext,
    ExceptionLedger,
    Strategy,
    WitnessNotFound,
    WitnessRecord,
    find_coprime_cover,
    find_direct,
    find_double_goldbach,
    find_rep_large_modulus,
    find_rep_pair_small_modulus,
    find_triple_odd,
    run_strategy_chain,
    witness_admits_modulus,
)
from .bounds import (
    BoundOutcome,
    BoundParams,
    CThetaTable,
    CThetaTableError,
    Regime,
    Scenario,
    artin_constant,
    brun_titchmarsh,
    check_lemma41,
    check_lemma42,
    ctheta_lookup,
    optimize_A,
    phi_square_sum,
    r3_lower_constant,
    ramare_tail,
    rn_error_budget,
    rn_lower_constant,
    rq_lower_constant,
)
from .pipeline import (
    CheckpointError,
    ConfigMismatchError,
    KClass,
    RunConfig,
    RunReport,
    analytic_verdict,
    resume,
    verify_range,
)

__version__ = "0.1.0"
