"""Categorized multi-armed bandit simulator.

Arms are grouped into categories ordered by a dominance relation
(group-sparse, strong, or first-order stochastic); policies that exploit
the ordering are benchmarked against flat baselines on Gaussian instances.
"""
from .confidence import (
    category_radius,
    elimination_round_bound,
    hoeffding_radius,
    max_linear_minus_norm,
    min_linear_plus_norm,
    ratio_max,
    sorted_category_radius,
    sparse_activation_threshold,
)
from .dominance import (
    DominanceOrder,
    find_dominating_category,
    first_order_dominates,
    first_order_simplex_check,
    group_sparse_dominates,
    strong_simplex_check,
    strongly_dominates,
)
from .harness import (
    AggregateTrace,
    ExperimentConfig,
    PolicyAggregate,
    default_checkpoints,
    derive_seed,
    run_episode,
    run_experiment,
    write_csv,
)
from .lower_bounds import (
    LowerBoundResult,
    c_mu_first_order_2x2,
    c_mu_for_order,
    c_mu_group_sparse,
    c_mu_strong,
    check_intertwined,
)
from .model import (
    Environment,
    GapTable,
    History,
    MeanMatrix,
    RegretTrace,
    gaps,
    load_instance,
    make_environment,
    pseudo_regret,
)
from .policies import (
    DeltaSchedule,
    Policy,
    PolicyConfig,
    PolicyKind,
    Posterior,
    active_set_first_order,
    active_set_group_sparse,
    active_set_strong,
    make_policy,
    murphy_sample,
    potential_weights,
    ts_select,
)
from .scenarios import SCENARIOS, Scenario, get_scenario, scenario_names

__version__ = "0.1.0"
