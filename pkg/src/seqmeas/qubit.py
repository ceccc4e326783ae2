"""Qubit states, Bloch-direction observables, projectors and expectation values.

Conventions used throughout the package:

* The signal state is the pure qubit ``sin(alpha)|0> + cos(alpha) e^{i phi}|1>``.
  A global phase is fixed so that the |0> amplitude is real and non-negative.
* An observable is a unit Bloch direction ``n = (sin t cos v, sin t sin v, cos t)``
  standing for ``sigma . n``.  Its +1 eigenvector is
  ``cos(t/2)|0> + e^{iv} sin(t/2)|1>``; the -1 eigenvector is the orthogonal
  ``sin(t/2)|0> - e^{iv} cos(t/2)|1>``.  The first (weakly measured) observable
  is the ``theta = 0`` instance, i.e. sigma_z with |0> <-> +1 and |1> <-> -1.
* Outcomes are labelled +1/-1 everywhere, never 0/1.

Angles are accepted anywhere on the real line and reduced to canonical ranges;
the reduction only ever changes an unobservable global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter

TWO_PI = 2.0 * math.pi

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameter(f"{name} must be finite, got {value!r}")
    return value


def _wrap_two_pi(angle: float) -> float:
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0.0:
        wrapped += TWO_PI
    if wrapped >= TWO_PI:  # tiny negatives can round back up to 2 pi exactly
        wrapped = 0.0
    return wrapped


@dataclass(frozen=True)
class PureState:
    """Signal qubit ``sin(alpha)|0> + cos(alpha) e^{i phi}|1>``, canonical phase."""

    alpha: float
    phi: float

    @property
    def amplitudes(self) -> tuple[complex, complex]:
        return (
            complex(math.sin(self.alpha)),
            math.cos(self.alpha) * complex(math.cos(self.phi), math.sin(self.phi)),
        )

    def vector(self) -> np.ndarray:
        return np.array(self.amplitudes, dtype=complex)

    def projector_matrix(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class ObservableDirection:
    """Unit Bloch direction defining the observable ``sigma . n``."""

    theta: float
    varphi: float

    @property
    def n_vec(self) -> tuple[float, float, float]:
        st = math.sin(self.theta)
        return (st * math.cos(self.varphi), st * math.sin(self.varphi), math.cos(self.theta))

    def matrix(self) -> np.ndarray:
        nx, ny, nz = self.n_vec
        return nx * SIGMA_X + ny * SIGMA_Y + nz * SIGMA_Z

    def ket(self, sign: int) -> np.ndarray:
        """Eigenvector of ``sigma . n`` with eigenvalue ``sign`` (+1 or -1)."""
        half = 0.5 * self.theta
        phase = complex(math.cos(self.varphi), math.sin(self.varphi))
        if sign == +1:
            return np.array([math.cos(half), phase * math.sin(half)], dtype=complex)
        if sign == -1:
            return np.array([math.sin(half), -phase * math.cos(half)], dtype=complex)
        raise InvalidParameter(f"sign must be +1 or -1, got {sign!r}")


@dataclass(frozen=True)
class DensityMatrix:
    """2x2 density matrix; validated Hermitian, unit trace, positive semidefinite."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise InvalidParameter(f"density matrix must be 2x2, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InvalidParameter("density matrix entries must be finite")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise InvalidParameter("density matrix must be Hermitian within 1e-12")
        if abs(np.trace(m).real - 1.0) > 1e-12:
            raise InvalidParameter("density matrix must have unit trace within 1e-12")
        if np.linalg.eigvalsh(m).min() < -1e-12:
            raise InvalidParameter("density matrix must be positive semidefinite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def off_diagonal_magnitude(self) -> float:
        return abs(self.entries[0, 1])


def make_state(alpha: float, phi: float) -> PureState:
    """Build the signal state, reducing angles to their canonical ranges.

    alpha is folded into [0, pi] (so the |0> amplitude is non-negative) and
    phi into [0, 2 pi).  Shifting alpha by pi multiplies both amplitudes by -1,
    a pure global phase, so the reduction leaves every probability unchanged.
    """
    alpha = _require_finite("alpha", alpha)
    phi = _require_finite("phi", phi)
    a = _wrap_two_pi(alpha)
    if a > math.pi:
        a -= math.pi
    return PureState(alpha=a, phi=_wrap_two_pi(phi))


def make_direction(theta: float, varphi: float) -> ObservableDirection:
    """Build an observable direction with theta in [0, pi], varphi in [0, 2 pi)."""
    theta = _require_finite("theta", theta)
    varphi = _require_finite("varphi", varphi)
    t = _wrap_two_pi(theta)
    if t > math.pi:
        t = TWO_PI - t
        varphi = varphi + math.pi
    return ObservableDirection(theta=t, varphi=_wrap_two_pi(varphi))


def a_direction() -> ObservableDirection:
    """Direction of the first observable (sigma_z)."""
    return ObservableDirection(theta=0.0, varphi=0.0)


def projector(direction: ObservableDirection, sign: int) -> DensityMatrix:
    """Rank-1 projector onto the ``sign`` eigenvector of ``sigma . n``."""
    v = direction.ket(sign)
    return DensityMatrix(np.outer(v, v.conj()))


def born_probability(state: PureState, direction: ObservableDirection, sign: int) -> float:
    """Probability of outcome ``sign`` when measuring ``sigma . n`` on the state."""
    amp = np.vdot(direction.ket(sign), state.vector())
    p = float((amp * amp.conjugate()).real)
    return min(1.0, max(0.0, p))


def expectation(state: PureState, direction: ObservableDirection) -> float:
    """Expectation value of ``sigma . n`` on the state, as p(+1) - p(-1)."""
    return born_probability(state, direction, +1) - born_probability(state, direction, -1)


def commutator_magnitude(state: PureState, direction: ObservableDirection) -> float:
    """|<[sigma_z, sigma . n]>| on the state: ``|2 sin(2 alpha) sin(theta) sin(varphi - phi)|``."""
    return abs(
        2.0
        * math.sin(2.0 * state.alpha)
        * math.sin(direction.theta)
        * math.sin(direction.varphi - state.phi)
    )
