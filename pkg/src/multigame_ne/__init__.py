"""Pure Bayesian Nash equilibria of two-player, two-action double games."""

from .continuous import (
    ContinuousSolution,
    SolverError,
    solve_dgpd_general_prior,
    solve_dgpd_uniform,
)
from .discrete import (
    EquilibriumResult,
    IntervalIndex,
    SearchStats,
    compute_cumul_proba,
    dgpd_search,
    finder,
    general_search,
    monotone_fixed_point,
    prop10_check,
    search_space_boundaries,
)
from .gamefile import GameFileError, dumps, loads, parse_game_file
from .model import (
    Action,
    DGPDParams,
    DiscreteTypeSpace,
    InvalidGameError,
    LocalGamePayoff,
    Multigame,
    Orientation,
    TabulatedCDFTypeSpace,
    UniformTypeSpace,
    delta_vector,
    dgpd_game,
    expected_utility,
    has_pure_ne_guarantee,
    is_purely_cooperative,
    validate_dgpd,
    zeta,
)
from .oracle import RegretReport, brute_force_ne, enumerate_candidates, verify_equilibrium
from .strategies import (
    ALWAYS_C,
    ALWAYS_D,
    INDIFFERENT,
    ThresholdStrategy,
    VectorThreshold,
    apply_strategy,
    delta_monotonicity,
    lambda_mu,
    strategies_equivalent,
    threshold_function_dgpd,
    threshold_function_general,
)

__version__ = "0.1.0"
