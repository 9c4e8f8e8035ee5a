"""Explanation as search: a shared concept has to be found before it can be used.

An explainer walks its own knowledge graph outward from the concept to be
explained, looking for any node the listener also knows. This package
simulates that search, tracks the Bayesian belief about how much knowledge
is shared, and decides when continuing is no longer worth the cost.
"""

__version__ = "0.1.0"

from .analytic import (
    TimeDistribution,
    abandonment_probability,
    expected_explanation_time,
    success_hazard,
    time_pmf,
    time_pmf_exact,
)
from .belief import (
    BenefitTrajectory,
    CostFunction,
    OverlapPrior,
    TrendClass,
    benefit_trajectory,
    classify_trend,
    expected_benefit,
    make_point_prior,
    make_truncated_normal_prior,
    make_uniform_prior,
    moments,
    myopic_stop_time,
    update_after_failure,
    worth_continuing,
)
from .errors import (
    BeliefStateError,
    ExplainSimError,
    ImpossibleFailureError,
    InfeasiblePlacementError,
    InvalidArgumentError,
)
from .experiments import (
    ExperimentConfig,
    PointPrior,
    SummaryStats,
    TruncatedNormalPrior,
    UniformPrior,
    chi_square_vs_pmf,
    compare_strategies,
    monte_carlo,
    reproduce_figure1,
    reproduce_figure2,
)
from .graph import (
    Complete,
    ErdosRenyi,
    FarFromTarget,
    KnowledgeGraph,
    OtherComponent,
    SmallWorld,
    TwoComponent,
    UniformRandom,
    component_of,
    generate,
    place_overlap,
)
from .search import EpisodeResult, Outcome, SearchStrategy, StoppingRule, run_episode
