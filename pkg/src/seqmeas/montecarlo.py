"""Deterministic seeded sampling of the joint outcome law and statistical checks.

Randomness is counter-based: the uniform variate of trial ``i`` is a stateless
splitmix64-style hash of ``(seed, i)``, so a batch is a pure function of
``(setup, trials, seed)`` and the counts are bit-identical however the trial
range is sharded across workers.  Merging shards is plain count addition.

Estimates are affine functions of the observed cell frequencies and are never
clamped to [-1, 1]; standard errors are propagated exactly through the
multinomial covariance of the frequencies.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .correction import ensure_informative, ensure_nonprojective, estimate_a, estimate_b
from .coupling import (
    BinaryDistribution,
    JointSetup,
    joint_distribution,
)
from .errors import InvalidParameter
from .fisher import cramer_rao_bound, fisher_a_joint, fisher_b_joint
from .qubit import a_direction, expectation

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM = 0xD1B54A32D192ED03

# Largest number of trials materialized as one array.
_CHUNK = 1 << 22


def _mix64(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, vectorized over uint64."""
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def trial_uniforms(seed: int, start: int, stop: int) -> np.ndarray:
    """Uniform [0, 1) variates of trials ``start .. stop-1`` for this seed."""
    idx = np.arange(start + 1, stop + 1, dtype=np.uint64)
    z = _mix64(np.uint64(seed & _MASK64) + idx * np.uint64(_GOLDEN))
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, stream: int) -> int:
    """Independent child seed for repeat ``stream`` of a master seed."""
    z = (seed + (stream + 1) * _STREAM) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


@dataclass(frozen=True)
class TrialBatch:
    """Outcome counts of one batch, in the joint cell order (++, +-, -+, --)."""

    counts: tuple[int, int, int, int]
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise InvalidParameter(f"trials must be >= 1, got {self.trials!r}")
        if any(c < 0 for c in self.counts):
            raise InvalidParameter(f"counts must be non-negative, got {self.counts!r}")
        if sum(self.counts) != self.trials:
            raise InvalidParameter(
                f"counts {self.counts!r} do not sum to trials {self.trials!r}"
            )

    def frequencies(self) -> np.ndarray:
        return np.array(self.counts, dtype=float) / self.trials


@dataclass(frozen=True)
class SampleStats:
    """Point estimates of both expectations with multinomial standard errors."""

    est_A: float
    est_B: float
    se_A: float
    se_B: float
    n: int


@dataclass(frozen=True)
class UnbiasednessReport:
    mean_A: float
    mean_B: float
    z_A: float
    z_B: float
    true_A: float
    true_B: float
    se_mean_A: float
    se_mean_B: float
    repeats: int
    trials: int
    pass_A: bool
    pass_B: bool


@dataclass(frozen=True)
class CrbReport:
    var_A_emp: float
    crb_A: float
    ratio_A: float
    var_B_emp: float
    var_B_analytic: float
    ratio_B: float
    crb_B: float
    var_B_meets_crb: bool
    repeats: int
    trials: int


def _counts_for_range(cum: np.ndarray, seed: int, start: int, stop: int) -> np.ndarray:
    counts = np.zeros(4, dtype=np.int64)
    for lo in range(start, stop, _CHUNK):
        hi = min(lo + _CHUNK, stop)
        u = trial_uniforms(seed, lo, hi)
        cells = np.searchsorted(cum, u, side="right")
        counts += np.bincount(cells, minlength=4)[:4]
    return counts


def sample(setup: JointSetup, trials: int, seed: int, workers: int = 1) -> TrialBatch:
    """Draw ``trials`` outcomes of the joint law; trial i depends only on (seed, i)."""
    if trials < 1:
        raise InvalidParameter(f"trials must be >= 1, got {trials!r}")
    if workers < 1:
        raise InvalidParameter(f"workers must be >= 1, got {workers!r}")
    law = joint_distribution(setup)
    cum = np.cumsum(law.as_array())
    cum[-1] = 1.0  # guard against cumulative rounding below the largest variate

    if workers == 1:
        counts = _counts_for_range(cum, seed, 0, trials)
    else:
        bounds = np.linspace(0, trials, workers + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                lambda span: _counts_for_range(cum, seed, span[0], span[1]),
                zip(bounds[:-1], bounds[1:]),
            )
            counts = sum(parts, np.zeros(4, dtype=np.int64))
    return TrialBatch(counts=tuple(int(c) for c in counts), trials=trials, seed=seed)


def _estimator_coefficients(setup: JointSetup) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell coefficients of the affine estimators of both expectations."""
    c = setup.coupling
    ensure_informative(c)
    ensure_nonprojective(c)
    a = np.array([1.0, 1.0, -1.0, -1.0]) / c.kappa
    cross = (1.0 - c.deco) * math.cos(setup.b_dir.theta) / c.kappa
    b = (np.array([1.0, -1.0, 1.0, -1.0]) - cross * np.array([1.0, 1.0, -1.0, -1.0])) / c.deco
    return a, b


def _affine_variance(weights: np.ndarray, probs: np.ndarray, n: int) -> float:
    """Variance of ``weights . f`` when ``n f`` is multinomial(``n``, ``probs``)."""
    mean = float(weights @ probs)
    return (float(weights * weights @ probs) - mean * mean) / n


def estimate(batch: TrialBatch, setup: JointSetup) -> SampleStats:
    """Point estimates of both expectations from one batch.

    Standard errors use the multinomial covariance of the observed
    frequencies (plug-in), propagated exactly through the affine maps.
    """
    w_a, w_b = _estimator_coefficients(setup)
    f = batch.frequencies()
    p_m = BinaryDistribution(f[0] + f[1], f[2] + f[3])
    p_b = BinaryDistribution(f[0] + f[2], f[1] + f[3])
    est_A = estimate_a(p_m, setup.coupling)
    est_B = estimate_b(p_b, p_m, setup.b_dir, setup.coupling)
    return SampleStats(
        est_A=est_A,
        est_B=est_B,
        se_A=math.sqrt(max(0.0, _affine_variance(w_a, f, batch.trials))),
        se_B=math.sqrt(max(0.0, _affine_variance(w_b, f, batch.trials))),
        n=batch.trials,
    )


def _z_score(mean: float, truth: float, se: float) -> float:
    """Standard score; a zero-variance, zero-bias result scores exactly 0."""
    bias = mean - truth
    if se == 0.0:
        return 0.0 if bias == 0.0 else math.copysign(math.inf, bias)
    return bias / se


def _batch_estimates(
    setup: JointSetup, trials: int, repeats: int, seed: int, workers: int
) -> tuple[np.ndarray, np.ndarray]:
    if repeats < 1:
        raise InvalidParameter(f"repeats must be >= 1, got {repeats!r}")
    _estimator_coefficients(setup)  # fail fast on degenerate couplings
    est_a_vals = np.empty(repeats)
    est_b_vals = np.empty(repeats)
    for r in range(repeats):
        batch = sample(setup, trials, derive_seed(seed, r), workers=workers)
        stats = estimate(batch, setup)
        est_a_vals[r] = stats.est_A
        est_b_vals[r] = stats.est_B
    return est_a_vals, est_b_vals


def unbiasedness_check(
    setup: JointSetup,
    trials: int,
    repeats: int,
    seed: int,
    z_limit: float = 5.0,
    workers: int = 1,
) -> UnbiasednessReport:
    """Compare the mean of repeated estimates against the exact expectations."""
    est_a_vals, est_b_vals = _batch_estimates(setup, trials, repeats, seed, workers)
    true_a = expectation(setup.state, a_direction())
    true_b = expectation(setup.state, setup.b_dir)
    mean_a, mean_b = float(est_a_vals.mean()), float(est_b_vals.mean())
    se_a = float(est_a_vals.std(ddof=1)) / math.sqrt(repeats) if repeats > 1 else 0.0
    se_b = float(est_b_vals.std(ddof=1)) / math.sqrt(repeats) if repeats > 1 else 0.0
    z_a = _z_score(mean_a, true_a, se_a)
    z_b = _z_score(mean_b, true_b, se_b)
    return UnbiasednessReport(
        mean_A=mean_a,
        mean_B=mean_b,
        z_A=z_a,
        z_B=z_b,
        true_A=true_a,
        true_B=true_b,
        se_mean_A=se_a,
        se_mean_B=se_b,
        repeats=repeats,
        trials=trials,
        pass_A=abs(z_a) < z_limit,
        pass_B=abs(z_b) < z_limit,
    )


def crb_check(
    setup: JointSetup,
    trials: int,
    repeats: int,
    seed: int,
    crb_tolerance: float = 0.1,
    workers: int = 1,
) -> CrbReport:
    """Empirical estimator variances against the Cramer-Rao bound.

    The A estimator saturates its bound by construction, so
    ``var_A_emp * trials * I_A_joint`` concentrates near 1.  The B estimator
    also uses the meter record, which the B-channel Fisher information does
    not account for, so its variance is compared to the exact multinomial
    propagation instead; whether it clears the B-channel bound is reported
    but not asserted.
    """
    est_a_vals, est_b_vals = _batch_estimates(setup, trials, repeats, seed, workers)
    var_a = float(est_a_vals.var(ddof=1))
    var_b = float(est_b_vals.var(ddof=1))
    crb_a = cramer_rao_bound(fisher_a_joint(setup), trials)
    crb_b = cramer_rao_bound(fisher_b_joint(setup), trials)
    _, w_b = _estimator_coefficients(setup)
    var_b_analytic = _affine_variance(w_b, joint_distribution(setup).as_array(), trials)
    return CrbReport(
        var_A_emp=var_a,
        crb_A=crb_a,
        ratio_A=var_a / crb_a,
        var_B_emp=var_b,
        var_B_analytic=var_b_analytic,
        ratio_B=var_b / var_b_analytic,
        crb_B=crb_b,
        var_B_meets_crb=var_b >= crb_b * (1.0 - crb_tolerance),
        repeats=repeats,
        trials=trials,
    )
