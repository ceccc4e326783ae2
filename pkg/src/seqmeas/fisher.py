"""Fisher information of the measurement records and the precision trade-off.

Each outcome law is treated as a function of the target expectation value
alone: the meter law depends on the first observable's expectation with
constant sensitivity ``kappa / 2``, and the disturbed second law depends on
the second observable's expectation with constant sensitivity ``deco / 2``
(its population-only part held fixed).  For a binary law with constant
sensitivity ``dp`` the Fisher information is ``dp^2 / (p_plus p_minus)``.

Precisions are the ratios of joint-measurement information to the
information of an independent projective measurement; both lie in [0, 1]
and trade off against each other as the coupling strength varies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .correction import ZnzdClass, is_znzd
from .coupling import BinaryDistribution, Coupling, JointSetup, b_probabilities, meter_probabilities
from .errors import DegenerateDistribution, InvalidParameter, UnboundedVariance
from .qubit import ObservableDirection, PureState, a_direction, born_probability

GAMMA_MIN = 1.0 / math.sqrt(2.0)

# Offset keeping the swept couplings strictly away from the degenerate endpoints.
ENDPOINT_OFFSET = 1e-6


@dataclass(frozen=True)
class FisherReport:
    """The four Fisher informations of one scenario and the precision ratios."""

    i_A_joint: float
    i_B_joint: float
    i_A_proj: float
    i_B_proj: float
    epsilon: float
    eta: float


@dataclass(frozen=True)
class TradeoffPoint:
    """One row of the precision trade-off sweep."""

    gamma: float
    kappa: float
    epsilon: float
    eta: float
    valid: bool = True


def _check_nondegenerate(p: BinaryDistribution, label: str) -> None:
    if p.p_plus <= 0.0 or p.p_plus >= 1.0:
        raise DegenerateDistribution(
            f"{label} outcome distribution is degenerate "
            f"(p_plus = {p.p_plus!r}); Fisher information diverges"
        )


def fisher_binary(p: BinaryDistribution, dp: float) -> float:
    """Fisher information of a binary law whose +1 probability has sensitivity ``dp``."""
    _check_nondegenerate(p, "binary")
    return dp * dp / (p.p_plus * p.p_minus)


def fisher_a_joint(setup: JointSetup) -> float:
    """Information about the first observable carried by one meter record."""
    p = meter_probabilities(setup)
    _check_nondegenerate(p, "meter (A channel)")
    return fisher_binary(p, 0.5 * setup.coupling.kappa)


def fisher_b_joint(setup: JointSetup) -> float:
    """Information about the second observable carried by one disturbed record."""
    p = b_probabilities(setup)
    _check_nondegenerate(p, "second measurement (B channel)")
    return fisher_binary(p, 0.5 * setup.coupling.deco)


def fisher_a_proj(state: PureState) -> float:
    """Information per record of an independent projective measurement of sigma_z."""
    p = BinaryDistribution(
        born_probability(state, a_direction(), +1),
        born_probability(state, a_direction(), -1),
    )
    _check_nondegenerate(p, "projective A (state is an eigenstate of A)")
    return 0.25 / (p.p_plus * p.p_minus)


def fisher_b_proj(state: PureState, direction: ObservableDirection) -> float:
    """Information per record of an independent projective measurement of ``sigma . n``."""
    p = BinaryDistribution(
        born_probability(state, direction, +1),
        born_probability(state, direction, -1),
    )
    _check_nondegenerate(p, "projective B (state is an eigenstate of B)")
    return 0.25 / (p.p_plus * p.p_minus)


def precisions(setup: JointSetup) -> FisherReport:
    """Fisher informations of the scenario and the precision ratios epsilon, eta."""
    i_a_joint = fisher_a_joint(setup)
    i_b_joint = fisher_b_joint(setup)
    i_a_proj = fisher_a_proj(setup.state)
    i_b_proj = fisher_b_proj(setup.state, setup.b_dir)
    return FisherReport(
        i_A_joint=i_a_joint,
        i_B_joint=i_b_joint,
        i_A_proj=i_a_proj,
        i_B_proj=i_b_proj,
        epsilon=i_a_joint / i_a_proj,
        eta=i_b_joint / i_b_proj,
    )


def cramer_rao_bound(fi: float, trials: int) -> float:
    """Lowest achievable estimator variance with ``trials`` independent records."""
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials!r}")
    if fi <= 0.0:
        raise UnboundedVariance("zero Fisher information: the variance bound is infinite")
    return 1.0 / (trials * fi)


def tradeoff_curve(
    state: PureState, direction: ObservableDirection, grid: int
) -> list[TradeoffPoint]:
    """Sweep the coupling and tabulate the precision pair (epsilon, eta).

    Rows are ``grid`` couplings uniform on the open interval plus exact
    endpoint rows carrying the analytic limits (0, 1) and (1, 0); the
    formula path is never evaluated at the endpoints themselves.  Rows whose
    distributions degenerate are marked invalid rather than aborting the
    sweep.  States that are eigenstates of either observable are rejected,
    as are states whose second-measurement statistics do not depend on the
    coupling at all (no trade-off exists there).
    """
    if grid < 2:
        raise InvalidParameter(f"grid must be >= 2, got {grid!r}")
    # Fails with DegenerateDistribution for eigenstates of either observable.
    fisher_a_proj(state)
    fisher_b_proj(state, direction)
    if is_znzd(state, direction) is not ZnzdClass.NOT_ZNZD:
        raise InvalidParameter(
            "the second measurement's statistics are coupling-invariant for "
            "this state and observable (ZNZD); the precision sweep is undefined"
        )

    points = [TradeoffPoint(gamma=GAMMA_MIN, kappa=0.0, epsilon=0.0, eta=1.0)]
    lo, hi = GAMMA_MIN + ENDPOINT_OFFSET, 1.0 - ENDPOINT_OFFSET
    for k in range(grid):
        gamma = lo + (hi - lo) * k / (grid - 1)
        coupling = Coupling(gamma)
        try:
            report = precisions(JointSetup(state, direction, coupling))
            points.append(
                TradeoffPoint(gamma, coupling.kappa, report.epsilon, report.eta)
            )
        except DegenerateDistribution:
            points.append(
                TradeoffPoint(gamma, coupling.kappa, math.nan, math.nan, valid=False)
            )
    points.append(TradeoffPoint(gamma=1.0, kappa=1.0, epsilon=1.0, eta=0.0))
    return points
