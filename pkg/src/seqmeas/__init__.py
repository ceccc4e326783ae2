"""Sequential weak measurement of two non-commuting qubit observables.

A weak pre-measurement of sigma_z (via a meter qubit of coupling amplitude
gamma) followed by a projective measurement of ``sigma . n`` on the disturbed
signal.  The package provides the exact outcome laws, the disturbance
correction recovering the undisturbed statistics, unbiased expectation
estimators, Fisher-information precision ratios with their trade-off curve,
and a deterministic Monte Carlo engine to verify the statistical claims.
"""

from .correction import (
    DEGENERACY_TOL,
    RecoveredStatistics,
    ZnzdClass,
    estimate_a,
    estimate_b,
    is_znzd,
    recover_a,
    recover_all,
    recover_b,
)
from .coupling import (
    BinaryDistribution,
    Coupling,
    Decomposition,
    JointDistribution,
    JointSetup,
    b_probabilities,
    decompose,
    entangled_state,
    joint_distribution,
    meter_probabilities,
    post_measurement_density,
)
from .errors import (
    DegenerateCoupling,
    DegenerateDistribution,
    InvalidParameter,
    SeqmeasError,
    UnboundedVariance,
)
from .fisher import (
    FisherReport,
    TradeoffPoint,
    cramer_rao_bound,
    fisher_a_joint,
    fisher_a_proj,
    fisher_b_joint,
    fisher_b_proj,
    fisher_binary,
    precisions,
    tradeoff_curve,
)
from .montecarlo import (
    CrbReport,
    SampleStats,
    TrialBatch,
    UnbiasednessReport,
    crb_check,
    estimate,
    sample,
    unbiasedness_check,
)
from .qubit import (
    DensityMatrix,
    ObservableDirection,
    PureState,
    a_direction,
    born_probability,
    commutator_magnitude,
    expectation,
    make_direction,
    make_state,
    projector,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryDistribution",
    "Coupling",
    "CrbReport",
    "DEGENERACY_TOL",
    "Decomposition",
    "DegenerateCoupling",
    "DegenerateDistribution",
    "DensityMatrix",
    "FisherReport",
    "InvalidParameter",
    "JointDistribution",
    "JointSetup",
    "ObservableDirection",
    "PureState",
    "RecoveredStatistics",
    "SampleStats",
    "SeqmeasError",
    "TradeoffPoint",
    "TrialBatch",
    "UnbiasednessReport",
    "UnboundedVariance",
    "ZnzdClass",
    "a_direction",
    "b_probabilities",
    "born_probability",
    "commutator_magnitude",
    "cramer_rao_bound",
    "crb_check",
    "decompose",
    "entangled_state",
    "estimate",
    "estimate_a",
    "estimate_b",
    "expectation",
    "fisher_a_joint",
    "fisher_a_proj",
    "fisher_b_joint",
    "fisher_b_proj",
    "fisher_binary",
    "is_znzd",
    "joint_distribution",
    "make_direction",
    "make_state",
    "meter_probabilities",
    "post_measurement_density",
    "precisions",
    "projector",
    "recover_a",
    "recover_all",
    "recover_b",
    "sample",
    "tradeoff_curve",
    "unbiasedness_check",
]
