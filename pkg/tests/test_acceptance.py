"""One pass/fail line per acceptance criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import oracles
from eigbiphoton import cli, metrics
from eigbiphoton.biphoton import (
    Regime,
    RegimeConfig,
    array_factor,
    coincidence,
    coincidence_resonance,
    coincidence_resonance_numeric,
    default_tau_grid,
    half_period_nodes,
    joint_spectrum,
    slit_kernel,
)
from eigbiphoton.diffraction import angular_pattern, default_theta_grid, lobe_powers, order_angle
from eigbiphoton.export import read_csv
from eigbiphoton.medium import absorption, group_delay, transmission_profile
from eigbiphoton.specfun import QuadratureSpec, struve_h0

pytestmark = pytest.mark.slow


def record(log, n, name, ok, detail, elapsed, limit=None):
    timing = f"{elapsed:.2f} s" + (f" (limit {limit:g} s)" if limit else "")
    line = f"[{'PASS' if ok else 'FAIL'}] {n} {name}: {detail}; {timing}"
    log[n] = line
    print(line)
    return ok


def test_c1_struve_oracle(acceptance_log):
    z = np.linspace(0.0, 30.0, 1000)
    ref = np.array([oracles.struve_integral(v) for v in z])
    t0 = time.perf_counter()
    got = struve_h0(z)
    elapsed = time.perf_counter() - t0
    err = np.max(np.abs(got - ref))
    ok = record(acceptance_log, 1, "struve oracle", err < 1e-9 and elapsed < 1.0,
                f"max |diff| {err:.2e} (< 1e-9)", elapsed, 1)
    assert ok


def test_c2_x_integral_identity(acceptance_log, geometry):
    t0 = time.perf_counter()
    x, w = half_period_nodes(geometry, QuadratureSpec(16, 1e-10, 32))
    worst = 0.0
    for z in (0.5, 1.0, 5.0, 10.0, 20.0):
        val = np.sum(w * np.sin(z * np.cos(np.pi * x / geometry.d)))
        ref = oracles.sin_cos_x_integral(z, geometry.d)
        worst = max(worst, abs(val - ref) / abs(ref), abs(geometry.d * struve_h0(z) - ref) / abs(ref))
    elapsed = time.perf_counter() - t0
    ok = record(acceptance_log, 2, "x-integral identity", worst < 1e-6 and elapsed < 1.0,
                f"max rel err {worst:.2e} (< 1e-6)", elapsed, 1)
    assert ok


def test_c3_resonance_oracle(acceptance_log, params, geometry):
    t0 = time.perf_counter()
    tau = np.linspace(0.0, 5.0 / params.gamma_e, 2000)
    analytic = coincidence_resonance(tau, params, geometry).rate
    numeric = coincidence_resonance_numeric(tau, params, geometry).rate
    elapsed = time.perf_counter() - t0
    err = oracles.rel_l2(numeric, analytic)
    first = metrics.local_minima(tau, analytic, floor=1e-3)[0]
    rabi = math.pi / params.omega_c
    shift = abs(first - rabi) / rabi
    ok = (err < 1e-2 and analytic[0] == 0.0 and numeric[0] < 1e-6 and shift > 0.05 and elapsed < 30)
    record(acceptance_log, 3, "resonance oracle", ok,
           f"rel L2 {err:.3e} (< 1e-2), R(0) {analytic[0]:.1e}/{numeric[0]:.1e}, "
           f"first zero {first:.2f} ns vs pi/Omega_c {rabi:.2f} ns ({100 * shift:.0f}% off)", elapsed, 30)
    assert ok


def test_c4_boxcar_oracle(acceptance_log, params, geometry):
    cfg = RegimeConfig(Regime.PHASE_MATCHING, include_chi3=False)
    t0 = time.perf_counter()
    errs = []
    for frac in (0.0, 0.1, 0.2, 0.3, 0.4):
        x = frac * geometry.d
        delay = float(group_delay(x, params, geometry))
        tau = np.linspace(-100.0, 1.5 * delay, 2000)
        got = slit_kernel(x, tau, params, geometry, cfg)
        ref = oracles.attenuated_boxcar(tau, delay, float(absorption(x, params, geometry)))
        errs.append(oracles.rel_l2(got, ref))
    elapsed = time.perf_counter() - t0
    ok = record(acceptance_log, 4, "boxcar oracle", max(errs) < 1e-3 and elapsed < 10,
                f"max rel L2 {max(errs):.2e} over 5 x values (< 1e-3)", elapsed, 10)
    assert ok


def test_c5_delay_traces(acceptance_log, params, geometry):
    cfg = RegimeConfig(Regime.FULL, include_chi3=True)
    transit = geometry.length / params.v0
    t0 = time.perf_counter()
    tau = default_tau_grid(params, geometry)
    with_g = coincidence(tau, params, geometry, cfg, grating=True).rate
    without = coincidence(tau, params, geometry, cfg, grating=False).rate
    elapsed = time.perf_counter() - t0
    edge = metrics.trailing_edge(tau, without)
    late = with_g[tau > 1000.0].max()
    bumps = metrics.tail_maxima(tau, with_g, start=transit)
    spike = metrics.precursor(tau, with_g, transit)
    ok = (abs(edge - transit) <= 0.05 * transit and late > 0.01 and bumps.size >= 2 and spike
          and elapsed < 120)
    record(acceptance_log, 5, "delay traces", ok,
           f"no-grating edge {edge:.1f} ns, grating max beyond 1000 ns {late:.3f}, "
           f"tail maxima at {np.round(bumps, 1).tolist()} ns, precursor {spike}", elapsed, 120)
    assert ok


def test_c6_transmission(acceptance_log, params, geometry):
    d = geometry.d
    t0 = time.perf_counter()
    x = np.linspace(-2 * d, 2 * d, 4001)
    t = transmission_profile(x, params, geometry)
    shifted = transmission_profile(x + d, params, geometry)
    node = float(transmission_profile(np.array([0.5 * d]), params, geometry)[0])
    antinode = float(transmission_profile(np.array([0.0]), params, geometry)[0])
    elapsed = time.perf_counter() - t0
    period_err = np.max(np.abs(t - shifted))
    node_err = abs(node - math.exp(-params.optical_depth))
    ok = period_err < 1e-12 and node_err < 1e-6 and antinode > 0.9 and elapsed < 1.0
    record(acceptance_log, 6, "transmission profile", ok,
           f"period err {period_err:.1e}, node {node:.6e} (|diff| {node_err:.1e}), "
           f"antinode {antinode:.4f} (> 0.9)", elapsed, 1)
    assert ok


def test_c7_diffraction(acceptance_log, params, geometry):
    t0 = time.perf_counter()
    theta = default_theta_grid()
    step = theta[1] - theta[0]
    af = np.abs(array_factor(theta, geometry)) ** 2
    offsets = {}
    for m in (0, 1, -1):
        target = order_angle(m, geometry)
        near = np.abs(theta - target) < 0.02
        offsets[m] = abs(theta[near][np.argmax(af[near])] - target)
    powers = lobe_powers(angular_pattern(50.0, theta, params, geometry, RegimeConfig()), geometry)
    elapsed = time.perf_counter() - t0
    zeroth = all(powers[0] > v for k, v in powers.items() if k != 0)
    ok = max(offsets.values()) <= step and zeroth and elapsed < 5
    record(acceptance_log, 7, "diffraction orders", ok,
           f"max offset {max(offsets.values()):.1e} rad (step {step:.1e}), "
           f"lobe powers m=0 {powers[0]:.4f}, m=+1 {powers[1]:.4f}", elapsed, 5)
    assert ok


def test_c8_spectrum_narrowing(acceptance_log, params, geometry):
    cfg = RegimeConfig()
    t0 = time.perf_counter()
    with_g = joint_spectrum(params, geometry, cfg, grating=True)
    without = joint_spectrum(params, geometry, cfg, with_g.omega_grid, grating=False)
    elapsed = time.perf_counter() - t0
    w1 = metrics.fwhm(with_g.omega_grid, with_g.intensity)
    w0 = metrics.fwhm(without.omega_grid, without.intensity)
    ok = w1 < w0 and elapsed < 30
    record(acceptance_log, 8, "spectrum narrowing", ok,
           f"FWHM {w1:.3e} rad/ns with grating vs {w0:.3e} without", elapsed, 30)
    assert ok


RUNS = [
    ("transmission", ""),
    ("orders", ""),
    ("coincidence", "regime = full\n"),
    ("coincidence", "regime = resonance\ntau_max_ns = 400\ntau_points = 801\n"),
    ("diffraction", ""),
    ("spectrum", ""),
]


def _refined(text):
    return text + "x_panels = 64\noversample = 2.5\n"


def test_c9_determinism_and_convergence(acceptance_log, tmp_path):
    t0 = time.perf_counter()
    identical = True
    worst, worst_name = 0.0, ""
    for i, (command, text) in enumerate(RUNS):
        first = None
        for tag, body in (("a", text), ("a", text), ("fine", _refined(text))):
            cfg = tmp_path / f"{i}{tag}.cfg"
            cfg.write_text(body)
            out = tmp_path / f"{i}{tag}.csv"
            assert cli.main([command, "--config", str(cfg), "--out", str(out)]) == 0
            if tag == "a" and first is None:
                first = out.read_bytes()
            elif tag == "a":
                identical &= out.read_bytes() == first
        a, fine = tmp_path / f"{i}a.csv", tmp_path / f"{i}fine.csv"
        names, base = read_csv(a)
        _, ref = read_csv(fine)
        for j, name in enumerate(names[1:], start=1):
            keep = np.isfinite(base[:, j])
            err = oracles.rel_l2(ref[keep, j], base[keep, j]) if np.any(base[keep, j]) else 0.0
            if err > worst:
                worst, worst_name = err, f"{command}:{name}"
    elapsed = time.perf_counter() - t0
    ok = identical and worst < 1e-3
    record(acceptance_log, 9, "determinism and convergence", ok,
           f"byte-identical {identical}, worst refinement change {worst:.1e} ({worst_name}) (< 1e-3)", elapsed)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([str(Path(__file__)), "-q", "-s", "-p", "no:cacheprovider"]))
