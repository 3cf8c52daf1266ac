"""Logit dynamics for finite strategic games.

Exact stationary analysis, mixing times, couplings, and the path-coupling
and distance-chain machinery for the OR and XOR games.
"""

from .errors import (
    CapacityError,
    ConfigError,
    HorizonError,
    InvalidParametersError,
    InvalidProfileError,
    InvalidSetError,
    LogitDynError,
    MissingPotentialError,
    NumericalError,
    ReversibilityError,
    UnsupportedGameError,
)
from .games import (
    DEFAULT_ENUM_CAP,
    GameSpec,
    ProfileSpace,
    make_anti_coordination,
    make_ck,
    make_coordination,
    make_matching_pennies,
    make_or,
    make_stairs,
    make_xor,
    pure_nash_equilibria,
    social_welfare,
    validate_profile,
    verify_exact_potential,
)
from .dynamics import (
    DEFAULT_DENSE_CAP,
    detailed_balance_check,
    gibbs_stationary,
    simulate_trajectory,
    stationary_solve,
    transition_matrix,
    update_distribution,
)
from .analysis import (
    MixingReport,
    SpectralBounds,
    bottleneck_lower_bound,
    bottleneck_ratio,
    d_of_t,
    expected_social_welfare,
    mixing_time_exact,
    relaxation_bounds,
    tv_distance,
)
from .coupling import (
    CoupledState,
    JointUpdate,
    coalescence_time,
    coupled_step,
    coupling_product_matrix,
    coupling_tmix_upper,
    joint_update,
)
from .or_weights import (
    EdgeCheck,
    RecursionTable,
    WeightSchedule,
    check_edge_inequalities,
    coupled_expected_distance,
    delta_max_bound,
    deltas_from_gammas,
    edge_lhs,
    gamma_sequence,
    path_coupling_bound,
    recursion_table,
    verify_or_contraction,
    weights_large_beta,
    weights_log_beta,
    weights_small_beta,
)
from .xor_distance import (
    coupled_distance_law,
    distance_hitting_times,
    distance_step_distribution,
    distance_transition_matrix,
    expected_coalescence_bound,
    mu_closed_form,
    nu_closed_form,
    verify_xor_coupling_law,
    xor_lumping_deviation,
)
from . import theory

__version__ = "0.1.0"
