"""Acceptance suite: one test and one printed pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they complete.  The full-size scaling study (through 300 ions) is long
and sits behind the DICKELADDER_FULL=1 environment flag; the default run
covers ion counts up to 128.
"""

import math
import os

import numpy as np
import pytest

from dickeladder import (
    EffectiveParams,
    PulseSchedule,
    build_via_closed_form,
    build_via_projection,
    fidelity,
    full_tensor_check,
    initial_state,
    ladder_equivalence_check,
    leakage_study,
    min_gap,
    optimize_detuning,
    p_coeff,
    propagate,
    scaling_study,
    spectrum_scan,
    wigner_d_half_pi,
)

TWO_PI = 2.0 * math.pi
FULL_SCALE = os.environ.get("DICKELADDER_FULL") == "1"


def report(number: int, name: str, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    print(f"ACCEPTANCE {number} {name}: {verdict} ({detail})")


def test_criterion_1_two_ion_anchor():
    g = 1.0
    params = EffectiveParams(n_pairs=1, g=g)
    projection = build_via_projection(params).elements
    closed = build_via_closed_form(params).elements
    path_dev = float(np.max(np.abs(projection - closed)))
    spectrum_dev = float(
        np.max(np.abs(np.linalg.eigvalsh(projection) - np.array([0.0, 3.0 * g])))
    )
    ok = path_dev < 1e-12 and spectrum_dev < 1e-12
    report(1, "two-ion anchor", ok,
           f"spectrum dev {spectrum_dev:.2e}, path dev {path_dev:.2e}")
    assert spectrum_dev < 1e-12
    assert path_dev < 1e-12


def test_criterion_2_oracle_equivalence():
    tensor_devs = {2 * n: full_tensor_check(n, omega1=9.1, g=0.8) for n in (1, 2, 3)}
    ladder_devs = {2 * n: ladder_equivalence_check(n, g=0.7) for n in range(1, 13)}
    worst_tensor = max(tensor_devs.values())
    worst_ladder = max(ladder_devs.values())
    ok = worst_tensor < 1e-12 and worst_ladder < 1e-9
    report(2, "oracle equivalence", ok,
           f"tensor dev {worst_tensor:.2e} (2-6 ions), ladder dev {worst_ladder:.2e} (<=24 ions)")
    assert worst_tensor < 1e-12
    assert worst_ladder < 1e-9


def test_criterion_3_leakage_scaling():
    study = leakage_study(2, ratios=(1 / 64, 1 / 32, 1 / 16), chi=1.0)
    slope_ok = abs(study.slope - 2.0) <= 0.3
    absolute_ok = study.leakages[0] < 1e-3
    report(3, "leakage scaling", slope_ok and absolute_ok,
           f"slope {study.slope:.3f} (want 2 +- 0.3), "
           f"leakage at 1/64 = {study.leakages[0]:.2e} (want < 1e-3)")
    assert slope_ok
    assert absolute_ok


def test_criterion_4_rap_sixteen_ions():
    params = EffectiveParams.from_chi(8, chi=TWO_PI * 3.0)
    schedule = PulseSchedule.rap(
        duration=2.0,
        delta_start=-TWO_PI * 28.0,
        delta_end=TWO_PI * 28.0,
        chi_peak=TWO_PI * 3.0,
        envelope_width=1.3,
    )
    trace = propagate(initial_state(8), schedule, params)
    final = float(trace.fidelity[-1])
    norm_ok = float(np.max(trace.norm_error)) < 1e-10
    ok = final > 0.95 and norm_ok
    report(4, "adiabatic sweep, 16 ions", ok,
           f"final fidelity {final:.4f} (want > 0.95), "
           f"max norm error {np.max(trace.norm_error):.1e}")
    assert final > 0.95
    assert norm_ok


def test_criterion_5_minimal_gap_sixteen_ions():
    chi = TWO_PI * 3.0
    params = EffectiveParams.from_chi(8, chi=chi)
    # the sweep window of the adiabatic protocol is +-2pi*28 kHz, but in
    # this detuning convention the top-curve pinch sits near +2pi*67 kHz;
    # scan wide enough to bracket it (the minimal gap value itself does
    # not depend on how the detuning axis is scaled)
    grid = np.linspace(-TWO_PI * 28.0, TWO_PI * 112.0, 561)
    spectrum = spectrum_scan(params, grid)
    result = min_gap(spectrum, which="highest")
    ratio = result.gap / (8.02 * chi)
    ok = abs(ratio - 1.0) <= 0.05 and not result.at_boundary
    detail = (
        f"gap {result.gap / chi:.4f}*chi at delta = {result.delta_at_min / TWO_PI:+.1f} kHz, "
        f"ratio to 8.02*chi = {ratio:.4f}"
    )
    if not ok and (abs(ratio - 2.0) <= 0.1 or abs(ratio - 0.5) <= 0.025):
        detail += " -- CONVENTION FINDING: clean factor-of-2 discrepancy"
    report(5, "minimal gap, 16 ions", ok, detail)
    assert not result.at_boundary
    assert abs(ratio - 1.0) <= 0.05, detail


def test_criterion_6_optimized_square_pulse():
    sixteen = optimize_detuning(8, chi=TWO_PI * 3.0)
    # two-ion case in units with g = 1 rad/ms: analytic optimum delta = g
    two = optimize_detuning(1, chi=2.0)
    ok_16 = sixteen.best_fidelity > 0.9
    ok_2 = two.best_fidelity >= 1.0 - 1e-6 and abs(two.delta_opt - 1.0) <= 1e-6
    report(6, "optimized square pulse", ok_16 and ok_2,
           f"F(16 ions) = {sixteen.best_fidelity:.4f} (want > 0.9); "
           f"2 ions: F = {two.best_fidelity:.8f}, delta_opt - g = {two.delta_opt - 1.0:+.2e}")
    assert ok_16
    assert two.best_fidelity >= 1.0 - 1e-6
    assert abs(two.delta_opt - 1.0) <= 1e-6


def test_criterion_7_scaling_study():
    counts = [2, 4, 8, 16, 32, 64, 128] + ([300] if FULL_SCALE else [])
    study = scaling_study(counts, chi=TWO_PI * 3.0)
    fid_exp = study.fidelity_fit.exponent
    delta_exp = study.delta_opt_fit.exponent
    largest = study.results[-1]
    fid_ok = abs(fid_exp - (-0.04)) <= 0.02
    delta_ok = abs(delta_exp - (-0.7)) <= 0.15
    large_ok = largest.best_fidelity > 0.8
    ok = study.complete and fid_ok and delta_ok and large_ok
    report(7, f"scaling study ({'2..300' if FULL_SCALE else '2..128'} ions)", ok,
           f"fidelity exponent {fid_exp:.4f} (want -0.04 +- 0.02), "
           f"delta_opt exponent {delta_exp:.4f} (want -0.7 +- 0.15), "
           f"F({largest.n_ions} ions) = {largest.best_fidelity:.4f} (want > 0.8)")
    assert study.complete
    assert fid_ok
    assert large_ok
    assert delta_ok


def test_criterion_8_property_suite():
    # expansion coefficients: normalization, parity zeros, oracle agreement
    coeff_dev = 0.0
    norm_dev = 0.0
    parity_ok = True
    for n in range(0, 21):
        total = 0.0
        for m in range(-n, n + 1):
            p = p_coeff(n, m)
            d = wigner_d_half_pi(n, m)
            coeff_dev = max(coeff_dev, abs(abs(p) - d))
            if d < 1e-12 and p != 0.0:
                parity_ok = False
            total += p * p
        norm_dev = max(norm_dev, abs(total - 1.0))

    # propagation: unitarity, step-doubling convergence, bit-identical reruns
    params = EffectiveParams.from_chi(3, chi=TWO_PI * 3.0)
    schedule = PulseSchedule.rap(
        0.6, -TWO_PI * 10.0, TWO_PI * 10.0, chi_peak=TWO_PI * 3.0, envelope_width=0.45
    )
    trace = propagate(initial_state(3), schedule, params, n_out=256)
    rerun = propagate(initial_state(3), schedule, params, n_out=256)
    doubled = propagate(initial_state(3), schedule, params,
                        steps=2 * trace.steps_used, n_out=256)
    norm_err = float(np.max(trace.norm_error))
    doubling_dev = float(np.max(np.abs(doubled.populations - trace.populations)))
    identical = np.array_equal(trace.populations, rerun.populations)

    opt_a = optimize_detuning(2, chi=2.0)
    opt_b = optimize_detuning(2, chi=2.0)

    ok = (
        coeff_dev < 1e-10 and norm_dev < 1e-10 and parity_ok
        and norm_err < 1e-10 and doubling_dev < 1e-8
        and identical and opt_a == opt_b
    )
    report(8, "property suite", ok,
           f"oracle dev {coeff_dev:.1e}, norm dev {norm_dev:.1e}, parity {'ok' if parity_ok else 'BROKEN'}, "
           f"unitarity {norm_err:.1e}, step-doubling {doubling_dev:.1e}, "
           f"reruns {'identical' if identical and opt_a == opt_b else 'DIFFER'}")
    assert coeff_dev < 1e-10
    assert norm_dev < 1e-10
    assert parity_ok
    assert norm_err < 1e-10
    assert doubling_dev < 1e-8
    assert identical
    assert opt_a == opt_b


def test_fidelity_helper_consistency():
    # the trace's fidelity column is the target-state population
    params = EffectiveParams.from_chi(2, chi=TWO_PI * 3.0)
    schedule = PulseSchedule.square(0.3, delta=0.0, chi=TWO_PI * 3.0)
    trace = propagate(initial_state(2), schedule, params, n_out=32)
    assert np.array_equal(trace.fidelity, trace.populations[:, -1])
    assert fidelity(initial_state(2)) == 0.0
