"""Exhaustive landscape analysis for sparsity-constrained least squares.

Enumerates all M-stationary points of ``min 0.5 ||A x - b||^2`` subject to
``||x||_0 <= s``, certifies nondegeneracy, classifies minimizers and saddle
points, counts connected components of lower level sets exactly, verifies the
Morse relation between saddle and minimizer counts, and probes strong
stability under data perturbations.
"""

from .errors import (
    DimensionMismatchError,
    InfeasiblePointError,
    InstanceFormatError,
    L0LandscapeError,
    MeasurementBoundError,
    NonFiniteDataError,
    NotStationaryError,
    RankDeficiencyError,
    SparsityRangeError,
    ToleranceError,
    ValidationError,
)
from .linalg import (
    default_rank_tol,
    largest_eigenvalue_gram,
    numerical_rank,
    pseudoinverse_apply,
    solve_normal_equations,
)
from .model import (
    FeasiblePoint,
    Instance,
    Support,
    ToleranceConfig,
    complement_of,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    objective,
    support_of,
    validate_instance,
)
from .stationarity import (
    CellAttachment,
    NondegeneracyCertificate,
    PointKind,
    StationaryPoint,
    cell_attachment,
    certify,
    classify,
    gradient,
    is_m_stationary,
    nd1_vector_direct,
    nd1_vector_projection,
    stationarity_residual,
)
from .enumeration import (
    GenericityReport,
    LandscapeReport,
    check_s_regularity,
    enumerate_stationary,
    enumerate_supports,
    run_genericity_experiment,
)
from .levelsets import (
    LevelSetGraph,
    SupportSubspace,
    SweepResult,
    component_count,
    subspace_min,
    support_min_table,
    sweep_levels,
)
from .stability import (
    StabilityProbeConfig,
    StabilityReport,
    StabilityVerdict,
    default_probe_epsilon,
    perturb_instance,
    probe_strong_stability,
)
from .iht import IhtResult, hard_threshold, iht_solve

__version__ = "0.1.0"

__all__ = [
    "CellAttachment",
    "DimensionMismatchError",
    "FeasiblePoint",
    "GenericityReport",
    "IhtResult",
    "InfeasiblePointError",
    "Instance",
    "InstanceFormatError",
    "L0LandscapeError",
    "LandscapeReport",
    "LevelSetGraph",
    "MeasurementBoundError",
    "NonFiniteDataError",
    "NondegeneracyCertificate",
    "NotStationaryError",
    "PointKind",
    "RankDeficiencyError",
    "SparsityRangeError",
    "StabilityProbeConfig",
    "StabilityReport",
    "StabilityVerdict",
    "StationaryPoint",
    "Support",
    "SupportSubspace",
    "SweepResult",
    "ToleranceConfig",
    "ToleranceError",
    "ValidationError",
    "cell_attachment",
    "certify",
    "check_s_regularity",
    "classify",
    "complement_of",
    "component_count",
    "default_probe_epsilon",
    "default_rank_tol",
    "enumerate_stationary",
    "enumerate_supports",
    "gradient",
    "hard_threshold",
    "iht_solve",
    "instance_from_dict",
    "instance_to_dict",
    "is_m_stationary",
    "largest_eigenvalue_gram",
    "load_instance",
    "nd1_vector_direct",
    "nd1_vector_projection",
    "numerical_rank",
    "objective",
    "perturb_instance",
    "probe_strong_stability",
    "pseudoinverse_apply",
    "run_genericity_experiment",
    "solve_normal_equations",
    "stationarity_residual",
    "subspace_min",
    "support_min_table",
    "support_of",
    "sweep_levels",
    "validate_instance",
]
