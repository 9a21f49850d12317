"""Implicit-bias simulation over correlation-weighted concept networks.

Builds a symmetric absolute-correlation network from a tabular dataset,
iterates a quasi-nonlinear reasoning rule with an L2-normalizing transfer
function, and reports the bias collected by protected concepts under
expert-driven what-if scenarios.
"""

__version__ = "0.1.0"

from .correlation import (
    WeightMatrix,
    build_weight_matrix,
    cramers_v,
    pearson,
    r_squared,
)
from .ingest import Dataset, build_dataset, expand_groups, load_csv, normalize
from .reasoning import (
    FixedPoint,
    Inconclusive,
    LimitCycle,
    ReasoningConfig,
    SimulationTrace,
    recover_initial,
    rescaled_transfer,
    run,
    sigmoid_transfer,
    step,
    tanh_transfer,
)
from .scenario import (
    BiasReport,
    ScenarioSpec,
    group_report,
    make_scenarios,
    phi_sweep,
    run_batch,
)
from .schema import Feature, FeatureSchema, Group, GroupExpansion
from .spectral import EigenResult, dominant_eigenvector

__all__ = [
    "BiasReport",
    "Dataset",
    "EigenResult",
    "Feature",
    "FeatureSchema",
    "FixedPoint",
    "Group",
    "GroupExpansion",
    "Inconclusive",
    "LimitCycle",
    "ReasoningConfig",
    "ScenarioSpec",
    "SimulationTrace",
    "WeightMatrix",
    "build_dataset",
    "build_weight_matrix",
    "cramers_v",
    "dominant_eigenvector",
    "expand_groups",
    "group_report",
    "load_csv",
    "make_scenarios",
    "normalize",
    "pearson",
    "phi_sweep",
    "r_squared",
    "recover_initial",
    "rescaled_transfer",
    "run",
    "run_batch",
    "sigmoid_transfer",
    "step",
    "tanh_transfer",
    "__version__",
]
