"""Acceptance gate: every criterion at its stated tolerance, one verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines.
Statistical criteria are pinned to fixed seeds; the counter-based sampler makes
them exactly reproducible.
"""

import json
import math
import time

import numpy as np
import pytest

from seqmeas import (
    Coupling,
    DegenerateCoupling,
    JointSetup,
    ZnzdClass,
    b_probabilities,
    born_probability,
    is_znzd,
    joint_distribution,
    make_direction,
    make_state,
    meter_probabilities,
    post_measurement_density,
    recover_a,
    recover_b,
    tradeoff_curve,
)
from seqmeas import oracle
from seqmeas.cli import main
from seqmeas.montecarlo import crb_check, unbiasedness_check
from seqmeas.verify import default_setup, random_setups, znzd_states

from test_fisher import fd_fisher

GAMMA_MIN = 1.0 / math.sqrt(2.0)


def conclude(number: int, description: str, ok: bool, note: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f" [{note}]" if note else ""
    print(f"acceptance criterion {number} ({description}): {verdict}{suffix}")
    assert ok, f"criterion {number} ({description}) failed{suffix}"


def test_criterion_1_oracle_equivalence():
    setups = random_setups(1000, seed=2025, gamma_range=(0.7072, 0.9999))
    start = time.perf_counter()
    worst = 0.0
    for setup in setups:
        ref = oracle.simulate(setup)
        p_m = meter_probabilities(setup)
        p_b = b_probabilities(setup)
        law = joint_distribution(setup)
        rho = post_measurement_density(setup).entries
        worst = max(
            worst,
            abs(p_m.p_plus - ref.meter_probs[0]),
            abs(p_m.p_minus - ref.meter_probs[1]),
            abs(p_b.p_plus - ref.b_probs[0]),
            abs(p_b.p_minus - ref.b_probs[1]),
            float(np.max(np.abs(rho - ref.density))),
            max(abs(law.prob(m, b) - ref.joint[(m, b)]) for m in (1, -1) for b in (1, -1)),
        )
    elapsed = time.perf_counter() - start
    conclude(
        1,
        "oracle equivalence",
        worst <= 1e-10 and elapsed < 1.0,
        f"max dev {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_round_trip_correction():
    worst = 0.0
    for setup in random_setups(1000, seed=2025, gamma_range=(0.7072, 0.9999)):
        p_m = meter_probabilities(setup)
        p_b = b_probabilities(setup)
        rec_a = recover_a(p_m, setup.coupling)
        rec_b = recover_b(p_b, p_m, setup.b_dir, setup.coupling)
        s2 = math.sin(setup.state.alpha) ** 2
        born_plus = born_probability(setup.state, setup.b_dir, +1)
        worst = max(
            worst,
            abs(rec_a.p_plus - s2),
            abs(rec_a.p_minus - (1.0 - s2)),
            abs(rec_b.p_plus - born_plus),
            abs(rec_b.p_minus - (1.0 - born_plus)),
        )

    setup = default_setup()
    p_m, p_b = meter_probabilities(setup), b_probabilities(setup)
    zero_strength, projective = Coupling(GAMMA_MIN), Coupling(1.0)
    assert zero_strength.kappa == 0.0 and projective.deco == 0.0
    failures_ok = True
    for call in (
        lambda: recover_a(p_m, zero_strength),
        lambda: recover_b(p_b, p_m, setup.b_dir, zero_strength),
        lambda: recover_b(p_b, p_m, setup.b_dir, projective),
    ):
        try:
            call()
            failures_ok = False
        except DegenerateCoupling:
            pass
    conclude(
        2,
        "round-trip correction",
        worst <= 1e-10 and failures_ok,
        f"max dev {worst:.2e}, degenerate couplings refuse: {failures_ok}",
    )


def test_criterion_3_unbiasedness():
    setup = default_setup()
    start = time.perf_counter()
    report = unbiasedness_check(setup, trials=10**6, repeats=30, seed=2025)
    elapsed = time.perf_counter() - start
    ok = (
        abs(report.z_A) < 5.0
        and abs(report.z_B) < 5.0
        and report.true_A == pytest.approx(-0.5, abs=1e-12)
        and report.true_B == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
        and elapsed < 30.0
    )
    conclude(
        3,
        "unbiasedness",
        ok,
        f"z_A {report.z_A:+.2f}, z_B {report.z_B:+.2f}, {elapsed:.1f}s",
    )


def test_criterion_4_cramer_rao_saturation():
    setup = default_setup()
    start = time.perf_counter()
    report = crb_check(setup, trials=10**5, repeats=200, seed=9)
    elapsed = time.perf_counter() - start
    ok = (
        0.9 <= report.ratio_A <= 1.1
        and 0.9 <= report.ratio_B <= 1.1
        and elapsed < 60.0
    )
    conclude(
        4,
        "Cramer-Rao saturation",
        ok,
        f"ratio_A {report.ratio_A:.3f}, ratio_B {report.ratio_B:.3f}, {elapsed:.1f}s",
    )


def test_criterion_5_fisher_closed_forms():
    from seqmeas import decompose, expectation, fisher_a_joint, fisher_b_joint
    from seqmeas.qubit import a_direction

    checked = 0
    worst_rel = 0.0
    for setup in random_setups(800, seed=5150):
        p_m = meter_probabilities(setup)
        p_b = b_probabilities(setup)
        if min(p_m.p_plus, p_m.p_minus, p_b.p_plus, p_b.p_minus) < 0.02:
            continue
        kappa, deco = setup.coupling.kappa, setup.coupling.deco
        if kappa < 1e-3 or deco < 1e-3:
            continue
        gb2 = setup.coupling.gamma_bar ** 2
        n = decompose(setup).independent_part

        def meter_law(x, kappa=kappa, gb2=gb2):
            return (kappa * (1 + x) / 2 + gb2, kappa * (1 - x) / 2 + gb2)

        def b_law(x, deco=deco, n=n):
            return ((1 - deco) * n + deco * (1 + x) / 2,
                    (1 - deco) * (1 - n) + deco * (1 - x) / 2)

        fd_a = fd_fisher(meter_law, expectation(setup.state, a_direction()))
        fd_b = fd_fisher(b_law, expectation(setup.state, setup.b_dir))
        worst_rel = max(
            worst_rel,
            abs(fisher_a_joint(setup) / fd_a - 1.0),
            abs(fisher_b_joint(setup) / fd_b - 1.0),
        )
        checked += 1
        if checked == 200:
            break
    conclude(
        5,
        "Fisher closed forms",
        checked == 200 and worst_rel < 1e-6,
        f"{checked} setups, worst rel err {worst_rel:.2e}",
    )


def test_criterion_6_tradeoff_reproduction():
    state = make_state(math.pi / 6, 0.0)
    direction = make_direction(math.pi / 3, 0.0)  # varphi = phi = 0
    points = tradeoff_curve(state, direction, grid=100)
    first, last = points[0], points[-1]
    endpoints_ok = (
        (first.gamma, first.epsilon, first.eta) == (GAMMA_MIN, 0.0, 1.0)
        and (last.gamma, last.epsilon, last.eta) == (1.0, 1.0, 0.0)
    )
    monotone_ok = all(
        b.epsilon > a.epsilon and b.eta < a.eta for a, b in zip(points, points[1:])
    )
    conclude(
        6,
        "trade-off reproduction",
        endpoints_ok and monotone_ok and all(p.valid for p in points),
        f"{len(points)} rows, endpoints {endpoints_ok}, strict monotone {monotone_ok}",
    )


def test_criterion_7_znzd():
    gammas = np.linspace(GAMMA_MIN, 1.0, 50)
    max_drift = 0.0
    znzd_ok = True
    for state, direction in znzd_states(100, seed=77, nontrivial=True):
        assert abs(math.cos(direction.varphi - state.phi)) < 1e-12
        values = [
            b_probabilities(JointSetup(state, direction, Coupling(g))).p_plus for g in gammas
        ]
        max_drift = max(max_drift, max(values) - min(values))
        znzd_ok &= is_znzd(state, direction) is ZnzdClass.NONTRIVIAL
    min_variation = math.inf
    generic_ok = True
    for state, direction in znzd_states(100, seed=78, nontrivial=False):
        values = [
            b_probabilities(JointSetup(state, direction, Coupling(g))).p_plus for g in gammas
        ]
        min_variation = min(min_variation, max(values) - min(values))
        generic_ok &= is_znzd(state, direction) is ZnzdClass.NOT_ZNZD
    ok = znzd_ok and generic_ok and max_drift <= 1e-12 and min_variation > 1e-6
    conclude(
        7,
        "ZNZD invariance",
        ok,
        f"max drift {max_drift:.2e}, min generic variation {min_variation:.2e}",
    )


def test_criterion_8_determinism(capsys):
    estimate_args = [
        "estimate", "--alpha", "0.5235987755982988", "--phi", "0",
        "--theta", "1.5707963267948966", "--varphi", "0",
        "--gamma", "0.8944271909999159", "--trials", "1000000", "--seed", "42",
    ]
    verify_args = ["verify", "--seed", "42"]

    outputs = {}
    for label, argv in (
        ("estimate_run1", estimate_args),
        ("estimate_run2", estimate_args),
        ("estimate_threaded", [*estimate_args, "--workers", "4"]),
        ("verify_run1", verify_args),
        ("verify_run2", verify_args),
        ("verify_threaded", [*verify_args, "--workers", "4"]),
    ):
        code = main(argv)
        outputs[label] = capsys.readouterr().out
        assert code == 0, f"{label} exited {code}"

    estimate_ok = outputs["estimate_run1"] == outputs["estimate_run2"] == outputs["estimate_threaded"]
    verify_ok = outputs["verify_run1"] == outputs["verify_run2"] == outputs["verify_threaded"]
    seed42 = json.loads(outputs["estimate_run1"])["seed"] == 42
    conclude(
        8,
        "determinism",
        estimate_ok and verify_ok and seed42,
        f"estimate identical {estimate_ok}, verify identical {verify_ok}",
    )
