"""Biased-sampling profit-extraction auction.

A prior-free multi-unit auction: agents are split into two biased coin
groups and a remainder, the larger-maximum coin group plus the remainder
forms the market, the other coin group's bids set a revenue target, and a
profit extractor charges market winners critical prices.  The package pairs
the mechanism with its envy-free revenue benchmark, closed-form guarantee
factors, and a seeded verification harness.
"""

from .analysis import (
    ApproxFactors,
    RuinBounds,
    approx_factors,
    guarantee_threshold,
    minimize_ratio,
    ruin_bounds,
    ruin_probability_finite,
)
from .auction import (
    Orientation,
    PartitionAssignment,
    SamplingBias,
    orient,
    partition,
    run_auction,
    run_on_assignment,
    vickrey_single_item,
)
from .benchmark import (
    EnvyFreeSolution,
    envy_free_bruteforce,
    envy_free_contribution,
    envy_free_optimal,
)
from .extractor import (
    ExtractionParams,
    critical_payment,
    extraction_params,
    extractor_allocation,
    profit_extract,
)
from .harness import (
    IcViolation,
    SimConfig,
    StatSummary,
    check_bounds,
    check_extractor,
    check_ic,
    check_ruin,
    check_sampling,
    default_battery,
    deviation_grid,
    exact_expected_revenue,
    generate_profile,
    ic_scan,
    iter_trial_revenues,
    regression_instance,
    run_trials,
    run_verify,
    summarize,
)
from .profiles import (
    Environment,
    Money,
    Outcome,
    ValuationProfile,
    dominates,
    drop_highest,
    is_padding,
    lower_highest_to_second,
    make_profile,
    pad,
    validate_outcome,
)
from .seeding import RandomSource

__version__ = "0.1.0"

__all__ = [
    "ApproxFactors",
    "Environment",
    "EnvyFreeSolution",
    "ExtractionParams",
    "IcViolation",
    "Money",
    "Orientation",
    "Outcome",
    "PartitionAssignment",
    "RandomSource",
    "RuinBounds",
    "SamplingBias",
    "SimConfig",
    "StatSummary",
    "ValuationProfile",
    "approx_factors",
    "check_bounds",
    "check_extractor",
    "check_ic",
    "check_ruin",
    "check_sampling",
    "critical_payment",
    "default_battery",
    "deviation_grid",
    "dominates",
    "drop_highest",
    "envy_free_bruteforce",
    "envy_free_contribution",
    "envy_free_optimal",
    "exact_expected_revenue",
    "extraction_params",
    "extractor_allocation",
    "generate_profile",
    "guarantee_threshold",
    "ic_scan",
    "is_padding",
    "iter_trial_revenues",
    "lower_highest_to_second",
    "make_profile",
    "minimize_ratio",
    "orient",
    "pad",
    "partition",
    "profit_extract",
    "regression_instance",
    "ruin_bounds",
    "ruin_probability_finite",
    "run_auction",
    "run_on_assignment",
    "run_trials",
    "run_verify",
    "summarize",
    "validate_outcome",
    "vickrey_single_item",
]
