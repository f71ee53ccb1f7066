"""Parity-query design laboratory: degree distributions, random query sets,
ML (GF(2) elimination) and peeling decoders, analytic oracles, and a
deterministic Monte Carlo harness for sample-complexity phase transitions.
"""

from .degrees import (
    DegreeDistribution,
    DistSpecError,
    harmonic,
    make_adjusted_soliton,
    make_degenerate,
    make_mixture,
    make_soliton,
    min_k_for_spec,
    parse_dist_spec,
    sample_degree,
    sample_degrees,
)
from .gf2 import InconsistentSystem, MlOutcome, rank, solve
from .harness import (
    ExperimentConfig,
    ResultRow,
    ResultTable,
    mix_seed,
    read_csv_rows,
    run_experiment,
    run_trial,
    trial_rng,
    write_csv,
)
from .oracles import (
    BoundReport,
    ReleaseProfile,
    binary_entropy,
    coupon_expected_samples,
    detection_floor,
    even_overlap_bound,
    even_overlap_count,
    fano_lower_bound,
    harmonic_log_gap,
    min_n_for_isolation,
    ml_error_union_bound_exact,
    ml_error_union_bound_relaxed,
    parity_cancel_prob,
    release_floor_holds,
    release_prob,
    release_prob_by_degree,
    release_prob_by_degree_enum,
    release_prob_soliton_closed,
    release_profile,
    run_oracle_checks,
    soliton_release_prob_frac,
    telescoping_sum_identity,
)
from .peeling import ContradictoryAnswers, PeelResult, peel, recovered_fraction, ripple_stays_in_band, trace_csv
from .queries import (
    AnswerVector,
    QuerySet,
    answer_queries,
    count_isolated,
    generate_queries,
    isolation_probability,
)

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
