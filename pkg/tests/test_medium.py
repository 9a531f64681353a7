import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from eigbiphoton.medium import (
    AtomicParams,
    GratingGeometry,
    absorption,
    chi3_as,
    chi_linear_as,
    chi_linear_s,
    effective_rabi,
    group_delay,
    group_velocity,
    mhz_to_rad_per_ns,
    standing_wave,
    transmission_profile,
)


def test_units():
    assert mhz_to_rad_per_ns(3.0) == pytest.approx(2 * math.pi * 3e-3)


def test_lab_units_ratio(params):
    assert params.gamma21 == pytest.approx(0.6 * params.gamma31)
    assert params.omega_c == pytest.approx(5 * params.gamma31)
    assert params.v0 == pytest.approx(1500 / 800)
    assert params.gamma_e == pytest.approx(0.8 * params.gamma31)


@pytest.mark.parametrize("field,value", [("gamma31", 0.0), ("gamma21", -1.0), ("v0", 0.0),
                                         ("optical_depth", -0.1), ("omega_c", float("nan"))])
def test_params_invariants(params, field, value):
    kw = {f: getattr(params, f) for f in params.__dataclass_fields__}
    kw[field] = value
    with pytest.raises(ValueError, match=field):
        AtomicParams(**kw)


def test_weak_probe_enforced():
    with pytest.raises(ValueError, match="weak-probe"):
        AtomicParams.from_lab_units(omega_p_over_gamma31=2.0, delta_p_over_gamma31=20.0)


@pytest.mark.parametrize("m", [0, 3, -2])
def test_geometry_needs_positive_even_m(m):
    with pytest.raises(ValueError, match="m_slits"):
        GratingGeometry(m_slits=m)


def test_rabi_node_antinode_quarter(params, geometry):
    gg = params.gamma31 * params.gamma21
    d = geometry.d
    assert effective_rabi(d / 2, params, geometry) == pytest.approx(math.sqrt(gg), rel=1e-12)
    assert effective_rabi(d / 4, params, geometry) == pytest.approx(
        math.sqrt(params.omega_c**2 / 2 + gg), rel=1e-12)
    at0 = effective_rabi(0.0, params, geometry)
    assert abs(at0 / params.omega_c - 1) <= gg / (2 * params.omega_c**2)


@settings(max_examples=50)
@given(st.floats(-20, 20), st.integers(-5, 5))
def test_periodic_and_even(x, k):
    p = AtomicParams.from_lab_units()
    g = GratingGeometry()
    w = 0.013
    for f in (lambda x: chi_linear_as(w, x, p, g), lambda x: chi3_as(w, x, p, g),
              lambda x: absorption(x, p, g), lambda x: group_velocity(x, p, g)):
        base = f(x)
        assert abs(f(x + k * g.d) - base) <= 1e-9 * abs(base) + 1e-12
        assert abs(f(-x) - base) <= 1e-12 * abs(base) + 1e-15


@settings(max_examples=50)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=20), st.floats(0, 1))
def test_chi3_magnitude_symmetric(omegas, x):
    p = AtomicParams.from_lab_units()
    g = GratingGeometry()
    w = np.array(omegas)
    assert np.allclose(np.abs(chi3_as(w, x, p, g)), np.abs(chi3_as(-w, x, p, g)), rtol=1e-13)


def test_chi3_peaks(params, geometry):
    oe = float(effective_rabi(0.0, params, geometry))
    w = np.linspace(-3 * oe, 3 * oe, 200001)
    mag = np.abs(chi3_as(w, 0.0, params, geometry))
    inner = np.nonzero((mag[1:-1] > mag[:-2]) & (mag[1:-1] > mag[2:]))[0] + 1
    expected = math.sqrt(oe**2 - params.gamma_e**2)
    assert np.allclose(np.sort(w[inner]), [-expected, expected], atol=2 * (w[1] - w[0]))


def test_chi3_linewidth():
    # Omega_e = 10 gamma_e at the antinode
    g31 = mhz_to_rad_per_ns(3.0)
    ge = 0.8 * g31
    oc = math.sqrt((10 * ge) ** 2 - 0.6 * g31**2)
    p = AtomicParams(g31, 0.6 * g31, g31, oc, 0.2 * g31, 20 * g31, 5.0, 1.875)
    g = GratingGeometry()
    w = np.linspace(0, 20 * ge, 400001)
    inten = np.abs(chi3_as(w, 0.0, p, g)) ** 2
    k = np.argmax(inten)
    half = inten[k] / 2
    lo = w[np.nonzero(inten[:k] < half)[0][-1]]
    hi = w[k + np.nonzero(inten[k:] < half)[0][0]]
    assert (hi - lo) == pytest.approx(2 * ge, rel=0.1)


def test_stokes_suppressed():
    p = AtomicParams.from_lab_units(omega_p_over_gamma31=0.2, delta_p_over_gamma31=20.0)
    g = GratingGeometry()
    w = np.linspace(-1, 1, 2001)[:, None]
    x = np.linspace(0, 1, 51)[None, :]
    ratio = np.abs(chi_linear_s(w, x, p, g)) / np.abs(chi_linear_as(w, x, p, g))
    assert ratio.max() <= 1e-4


def test_stokes_suppression_bound_at_limit():
    p = AtomicParams.from_lab_units(omega_p_over_gamma31=1.99, delta_p_over_gamma31=20.0)
    g = GratingGeometry()
    w = np.linspace(-1, 1, 2001)[:, None]
    x = np.linspace(0, 1, 51)[None, :]
    ratio = np.abs(chi_linear_s(w, x, p, g)) / np.abs(chi_linear_as(w, x, p, g))
    assert ratio.max() < 1e-2


def test_linear_as_loss_largest_at_node(params, geometry):
    im0 = chi_linear_as(0.0, 0.0, params, geometry).imag
    im_node = chi_linear_as(0.0, geometry.d / 2, params, geometry).imag
    x = np.linspace(0, geometry.d / 2, 101)
    im = chi_linear_as(0.0, x, params, geometry).imag
    assert abs(im0) == pytest.approx(np.abs(im).min())
    assert abs(im_node) == pytest.approx(np.abs(im).max())


def test_group_velocity_values(params, geometry):
    d = geometry.d
    assert group_velocity(0.0, params, geometry) == pytest.approx(params.v0)
    assert group_velocity(d / 2, params, geometry) == pytest.approx(0.0, abs=1e-30)
    assert group_velocity(d / 4, params, geometry) == pytest.approx(params.v0 / 2)
    assert group_delay(0.0, params, geometry) == pytest.approx(800.0)


def test_absorption_values(params, geometry):
    gg = params.gamma21 * params.gamma31
    assert absorption(geometry.d / 2, params, geometry) == pytest.approx(params.optical_depth / 2)
    approx = params.optical_depth * gg / (2 * params.omega_c**2)
    assert absorption(0.0, params, geometry) == pytest.approx(approx, rel=gg / params.omega_c**2)


def test_absorption_monotone_in_control(params, geometry):
    x = np.linspace(0, geometry.d / 2, 500)
    a = absorption(x, params, geometry)
    c = standing_wave(x, geometry)
    order = np.argsort(c)
    assert np.all(np.diff(a[order]) <= 0)
    t = transmission_profile(x, params, geometry)
    assert np.all(np.diff(t[order]) >= 0)


def test_transmission_node_value(params, geometry):
    t = transmission_profile(np.array([0.0, geometry.d / 2]), params, geometry)
    assert abs(t[1] - oracles.EXP_MINUS_5) < 1e-12
    # antinode: exp(-OD gamma21 gamma31 / (Omega_c^2 + gamma21 gamma31)) = exp(-3/25.6)
    assert t[0] == pytest.approx(math.exp(-3 / 25.6), rel=1e-12)


def test_transmission_no_medium(geometry):
    p = AtomicParams.from_lab_units(od=0.0)
    assert np.all(transmission_profile(np.linspace(-2, 2, 41), p, geometry) == 1.0)


def test_transmission_needs_sorted_grid(params, geometry):
    with pytest.raises(ValueError):
        transmission_profile([0.5, 0.1], params, geometry)
