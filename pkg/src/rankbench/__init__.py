"""Multi-criteria QoS ranking workbench.

Rank service alternatives under weighted criteria with two methods
(eigenvector-based pairwise comparison and direction-normalized weighted
sums), run named weight scenarios, quantify cross-method rank agreement and
sweep weights for what-if analysis.
"""

from .ahp import (
    ConsistencyReport,
    PairwiseMatrix,
    PriorityVector,
    RANDOM_INDEX,
    ahp_rank,
    consistency_ratio,
    derive_criteria_weights,
    principal_priority_vector,
    ratio_pairwise_matrix,
)
from .catalog_io import (
    RunConfig,
    builtin_catalog,
    builtin_scenarios,
    format_report,
    load_catalog,
    load_decision_matrix_csv,
    load_pairwise_matrix,
    load_run_config,
    load_scenarios,
    save_catalog,
    save_report,
)
from .core import (
    Criterion,
    DecisionMatrix,
    Direction,
    Method,
    Provenance,
    RankEntry,
    Ranking,
    ServiceCatalog,
    ServiceProfile,
    WeightVector,
    build_decision_matrix,
    build_ranking,
    normalize_benefit,
    normalize_cost,
    validate_weights,
)
from .saw import SawScoreBoard, saw_rank, saw_score
from .scenarios import (
    MethodComparison,
    Scenario,
    SweepPoint,
    kendall_tau,
    rank_table,
    rescale_weights,
    round_half_up,
    run_scenario,
    sweep_weights,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyReport",
    "Criterion",
    "DecisionMatrix",
    "Direction",
    "Method",
    "MethodComparison",
    "PairwiseMatrix",
    "PriorityVector",
    "Provenance",
    "RANDOM_INDEX",
    "RankEntry",
    "Ranking",
    "RunConfig",
    "SawScoreBoard",
    "Scenario",
    "ServiceCatalog",
    "ServiceProfile",
    "SweepPoint",
    "WeightVector",
    "ahp_rank",
    "build_decision_matrix",
    "build_ranking",
    "builtin_catalog",
    "builtin_scenarios",
    "consistency_ratio",
    "derive_criteria_weights",
    "format_report",
    "kendall_tau",
    "load_catalog",
    "load_decision_matrix_csv",
    "load_pairwise_matrix",
    "load_run_config",
    "load_scenarios",
    "normalize_benefit",
    "normalize_cost",
    "principal_priority_vector",
    "rank_table",
    "ratio_pairwise_matrix",
    "rescale_weights",
    "round_half_up",
    "run_scenario",
    "save_catalog",
    "save_report",
    "saw_rank",
    "saw_score",
    "sweep_weights",
    "validate_weights",
    "__version__",
]
