"""Two-photon amplitude and coincidence traces shaped by the induced grating.

The single-slit amplitude is computed per transverse position: at each
Gauss-Legendre node ``x`` the frequency integral of the spectral kernel is
taken with :func:`~eigbiphoton.specfun.oscillatory_ft` on a window sized for
that node, and the nodes are then summed with the ``cos(pi x/d)`` weight.
Only the half period ``[0, d/2]`` is sampled; every kernel is even in ``x``.

Regimes share one kernel:

* ``resonance`` -- ``chi3(w)`` alone,
* ``phase_matching`` -- ``sinc(dk L/2) exp(i dk L/2)``, multiplied by
  ``chi3`` when ``include_chi3`` is set,
* ``full`` -- always the product.

with ``dk L = w L / v_g(x) + i alpha(x) L``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .medium import (
    AtomicParams,
    GratingGeometry,
    absorption,
    chi3_as,
    effective_rabi,
    group_delay,
)
from .specfun import (
    ConvergenceError,
    FrequencyWindow,
    NumericalError,
    QuadratureSpec,
    gauss_legendre,
    oscillatory_ft,
    struve_h0,
)

# exp(-23) ~ 1e-10: a decaying exponential is treated as ended here
_DECAY_LOGS = 23.0
_MAX_SAMPLES = 2**24
FOLD_SPANS = 1024.0


class Regime(str, Enum):
    RESONANCE = "resonance"
    PHASE_MATCHING = "phase_matching"
    FULL = "full"


@dataclass(frozen=True)
class RegimeConfig:
    """Numerical recipe for one evaluation.

    ``window`` pins a single frequency window for every node; left as
    ``None``, each node gets a window whose edges sit where the kernel has
    fallen below ``edge_tol`` of its peak and whose sample spacing resolves
    the node's response out to ``oversample`` times the needed delay span.
    """

    regime: Regime = Regime.FULL
    x_quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    window: FrequencyWindow | None = None
    include_chi3: bool = True
    edge_tol: float = 1e-6
    oversample: float = 1.25

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        if not self.edge_tol > 0:
            raise ValueError(f"edge_tol must be > 0, got {self.edge_tol}")
        if not self.oversample >= 1:
            raise ValueError(f"oversample must be >= 1, got {self.oversample}")

    @property
    def uses_chi3(self) -> bool:
        return self.regime is not Regime.PHASE_MATCHING or self.include_chi3

    @property
    def uses_phase_matching(self) -> bool:
        return self.regime is not Regime.RESONANCE

    def refined(self, factor: int = 2) -> "RegimeConfig":
        """Same recipe with ``factor`` times the x panels and frequency samples."""
        window = None
        if self.window is not None:
            window = FrequencyWindow(self.window.half_width, self.window.n_samples * factor)
        return RegimeConfig(
            regime=self.regime,
            x_quadrature=self.x_quadrature.refined(factor),
            window=window,
            include_chi3=self.include_chi3,
            edge_tol=self.edge_tol,
            oversample=self.oversample * factor,
        )


@dataclass(frozen=True)
class ComplexSpectrum:
    omega_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.omega_grid.shape != self.values.shape:
            raise ValueError("omega_grid and values must have equal lengths")

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2


@dataclass(frozen=True)
class CoincidenceTrace:
    tau_grid: np.ndarray
    rate: np.ndarray
    normalized: bool = True

    @classmethod
    def from_amplitude(cls, tau_grid, amplitude, normalize: bool = True) -> "CoincidenceTrace":
        rate = np.abs(np.asarray(amplitude)) ** 2
        if normalize:
            peak = rate.max()
            if peak > 0:
                rate = rate / peak
        return cls(np.asarray(tau_grid, dtype=float), rate, normalize)


def default_tau_grid(p: AtomicParams, g: GratingGeometry, n: int = 2000) -> np.ndarray:
    """``n`` delays over five times the longer of ``1/gamma_e`` and ``L/v0``."""
    span = 5.0 * max(1.0 / p.gamma_e, float(group_delay(0.0, p, g)))
    return np.linspace(0.0, span, n)


# ------------------------------------------------------------------ kernels

@dataclass(frozen=True)
class _Local:
    """Medium seen at one transverse position."""

    rabi: float
    delay: float   # L / v_g, ns
    loss: float    # alpha L


def _local(x: float, p: AtomicParams, g: GratingGeometry, grating: bool) -> _Local:
    x = float(x) if grating else 0.0
    return _Local(float(effective_rabi(x, p, g)), float(group_delay(x, p, g)), float(absorption(x, p, g)))


def _chi3_from_rabi(omega, rabi, p: AtomicParams):
    ge = p.gamma_e
    return 1.0 / ((omega - rabi + 1j * ge) * (omega + rabi + 1j * ge))


def _phase_matching(omega, delay, loss):
    # sinc(z) exp(iz) with z = dk L / 2, evaluated as (exp(2iz) - 1) / 2iz
    z2 = omega * delay + 1j * loss
    small = np.abs(z2) < 2e-4
    safe = np.where(small, 1.0, z2)
    direct = np.expm1(1j * safe) / (1j * safe)
    series = 1.0 + 0.5j * z2 - z2 * z2 / 6.0
    return np.where(small, series, direct)


def spectral_kernel(omega, x, p: AtomicParams, g: GratingGeometry, config: RegimeConfig, grating: bool = True):
    """Integrand of the frequency integral at transverse position ``x``.

    ``x`` may be an array broadcastable against ``omega``.  With
    ``grating=False`` the medium is frozen at its antinode value.
    """
    omega = np.asarray(omega, dtype=float)
    xs = np.asarray(x, dtype=float) if grating else np.zeros_like(np.asarray(x, dtype=float))
    out = np.ones(np.broadcast(omega, xs).shape, dtype=complex)
    if config.uses_chi3:
        out = out * chi3_as(omega, xs, p, g)
    if config.uses_phase_matching:
        out = out * _phase_matching(omega, group_delay(xs, p, g), absorption(xs, p, g))
    return out


def _envelope(omega, local: _Local, p: AtomicParams, config: RegimeConfig):
    # Non-oscillating upper bound of |kernel|, decreasing for |omega| > rabi.
    omega = np.abs(np.asarray(omega, dtype=float))
    env = np.ones_like(omega)
    if config.uses_chi3:
        env = env * np.abs(_chi3_from_rabi(omega, local.rabi, p))
    if config.uses_phase_matching:
        bound = (1.0 + math.exp(-local.loss)) / np.abs(omega * local.delay + 1j * local.loss)
        env = env * np.minimum(1.0, bound)
    return env


def _peak(local: _Local, p: AtomicParams, config: RegimeConfig) -> float:
    scale = local.rabi + p.gamma_e
    probe = np.concatenate([
        np.linspace(-3.0 * scale, 3.0 * scale, 2001),
        np.linspace(-8.0, 8.0, 401) / local.delay,
    ])
    values = np.ones(probe.shape, dtype=complex)
    if config.uses_chi3:
        values = values * _chi3_from_rabi(probe, local.rabi, p)
    if config.uses_phase_matching:
        values = values * _phase_matching(probe, local.delay, local.loss)
    return float(np.abs(values).max())


def _half_width(local: _Local, p: AtomicParams, config: RegimeConfig) -> float:
    # margin: the sampled grid may miss the exact peak
    target = 0.9 * config.edge_tol * _peak(local, p, config)
    lo = local.rabi + 3.0 * p.gamma_e
    if config.uses_phase_matching:
        lo = max(lo, 8.0 / local.delay)
    hi = lo
    while _envelope(hi, local, p, config) > target:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise NumericalError("kernel does not decay; no finite frequency window")
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if _envelope(mid, local, p, config) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-3 * hi:
            break
    return 1.05 * hi


def _support_end(local: _Local, p: AtomicParams, config: RegimeConfig) -> float:
    end = 0.0
    if config.uses_phase_matching:
        box = local.delay
        if local.loss > 0:
            box = min(box, _DECAY_LOGS * local.delay / local.loss)
        end += box
    if config.uses_chi3:
        end += _DECAY_LOGS / p.gamma_e
    return end


def kernel_window(x: float, tau_grid, p: AtomicParams, g: GratingGeometry, config: RegimeConfig,
                  grating: bool = True) -> FrequencyWindow:
    """Frequency window for the node at ``x`` covering delays in ``tau_grid``."""
    if config.window is not None:
        return config.window
    local = _local(x, p, g, grating)
    tau = np.asarray(tau_grid, dtype=float)
    t_lo = min(float(tau.min()), 0.0)
    t_hi = float(tau.max())
    span = t_hi - t_lo
    needed = max(_support_end(local, p, config) - t_lo, span)
    # Nodes whose response outlasts FOLD_SPANS spans (next to a standing-wave
    # node) are folded back; their weight there is ~cos^3.
    period = config.oversample * min(needed, FOLD_SPANS * max(span, 1.0))
    width = _half_width(local, p, config)
    n = int(math.ceil(2.0 * width * period / (2.0 * math.pi))) + 1
    n = max(16, 1 << (n - 1).bit_length())
    if n > _MAX_SAMPLES:
        raise NumericalError(
            f"node x={x:.4g} needs {n} frequency samples (limit {_MAX_SAMPLES}); "
            "loosen edge_tol or shorten the delay grid"
        )
    return FrequencyWindow(width, n)


def slit_kernel(x: float, tau_grid, p: AtomicParams, g: GratingGeometry, config: RegimeConfig,
                grating: bool = True) -> np.ndarray:
    """Frequency integral ``int dw kernel(w; x) exp(-i w tau)`` at one position."""
    window = kernel_window(x, tau_grid, p, g, config, grating)
    values = spectral_kernel(window.grid(), x, p, g, config, grating)
    peak = _peak(_local(x, p, g, grating), p, config)
    return oscillatory_ft(values, window, tau_grid, config.edge_tol, peak=peak)


def slit_kernel_boxcar(x: float, tau_grid, p: AtomicParams, g: GratingGeometry) -> np.ndarray:
    """Closed form of the phase-matching frequency integral at one position.

    Closing the contour around the single pole ``w = -i alpha v_g`` gives an
    attenuated boxcar ``(2 pi v_g/L) exp(-alpha v_g tau)`` on
    ``0 <= tau <= L/v_g``; at the two jumps the integral takes the mean of
    the one-sided limits.
    """
    tau = np.asarray(tau_grid, dtype=float)
    local = _local(x, p, g, True)
    rate = local.loss / local.delay
    out = (2.0 * np.pi / local.delay) * np.exp(-rate * tau)
    inside = (tau > 0) & (tau < local.delay)
    edge = np.isclose(tau, 0.0, atol=1e-12) | np.isclose(tau, local.delay, rtol=1e-12, atol=0)
    return np.where(inside, out, np.where(edge, 0.5 * out, 0.0))


def slit_kernel_resonance(x: float, tau_grid, p: AtomicParams, g: GratingGeometry) -> np.ndarray:
    """Residue form of ``int dw chi3 exp(-i w tau)``: ``-(2 pi/Omega_e) sin(Omega_e tau) exp(-gamma_e tau)``."""
    tau = np.asarray(tau_grid, dtype=float)
    rabi = float(effective_rabi(x, p, g))
    out = -(2.0 * np.pi / rabi) * np.sin(rabi * tau) * np.exp(-p.gamma_e * tau)
    return np.where(tau > 0, out, 0.0)


# ---------------------------------------------------------- x quadrature

def half_period_nodes(g: GratingGeometry, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes on ``(0, d/2)`` with weights doubled to cover the full period."""
    nodes, weights = gauss_legendre(0.0, 0.5 * g.d, spec)
    return nodes, 2.0 * weights


@dataclass(frozen=True)
class SlitKernels:
    """Per-node frequency integrals, reusable across emission angles."""

    nodes: np.ndarray
    weights: np.ndarray    # quadrature weight times cos(pi x/d)
    values: np.ndarray     # (n_nodes, n_tau)
    tau_grid: np.ndarray

    def amplitude(self, theta=0.0, k_as: float = 0.0) -> np.ndarray:
        """Single-slit amplitude; returns shape ``(n_theta, n_tau)`` for array ``theta``."""
        theta = np.asarray(theta, dtype=float)
        phase = np.cos(np.multiply.outer(k_as * np.sin(theta), self.nodes))
        return (phase * self.weights) @ self.values


def slit_kernels(tau_grid, p: AtomicParams, g: GratingGeometry, config: RegimeConfig,
                 grating: bool = True) -> SlitKernels:
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if not grating:
        # uniform control: one position stands for the whole period
        values = slit_kernel(0.0, tau, p, g, config, grating=False)[None, :]
        return SlitKernels(np.zeros(1), np.array([g.d]), values, tau)
    nodes, weights = half_period_nodes(g, config.x_quadrature)
    values = np.empty((nodes.size, tau.size), dtype=complex)
    for i, x in enumerate(nodes):
        values[i] = slit_kernel(x, tau, p, g, config)
    return SlitKernels(nodes, weights * np.cos(np.pi * nodes / g.d), values, tau)


def single_slit_amplitude(tau_grid, theta, p: AtomicParams, g: GratingGeometry, config: RegimeConfig,
                          grating: bool = True) -> np.ndarray:
    """Per-period amplitude at emission angle ``theta``.

    The slit phase ``exp(i k_as x sin theta)`` reduces to its cosine part
    because the kernel is even in ``x``.
    """
    kernels = slit_kernels(tau_grid, p, g, config, grating)
    return kernels.amplitude(float(theta), g.k_as)


def array_factor(theta, g: GratingGeometry):
    """Direct sum ``sum_{n=-M/2}^{M/2} exp(i k_as n d sin theta)`` (``M + 1`` terms)."""
    theta = np.asarray(theta, dtype=float)
    half = g.m_slits // 2
    phase = g.k_as * g.d * np.sin(theta)
    total = np.zeros(theta.shape, dtype=complex)
    for n in range(-half, half + 1):
        total = total + np.exp(1j * n * phase)
    return total[()] if total.ndim == 0 else total


def array_factor_closed_form(theta, g: GratingGeometry):
    """``sin(M u)/sin(u)`` with ``u = k_as d sin(theta)/2``, the ``M``-term geometric series.

    The direct sum runs over ``M + 1`` terms and equals
    ``sin((M+1) u)/sin(u)``; this form is kept for comparison only.
    """
    theta = np.asarray(theta, dtype=float)
    u = 0.5 * g.k_as * g.d * np.sin(theta)
    s = np.sin(u)
    small = np.abs(s) < 1e-12
    safe = np.where(small, 1.0, s)
    m = g.m_slits
    limit = m * np.cos(m * u) / np.where(small, np.cos(u), 1.0)
    out = np.where(small, limit, np.sin(m * u) / safe)
    return out[()] if out.ndim == 0 else out


def two_photon_amplitude(tau_grid, theta, p: AtomicParams, g: GratingGeometry, config: RegimeConfig) -> np.ndarray:
    """Array factor times the single-slit amplitude."""
    return array_factor(float(theta), g) * single_slit_amplitude(tau_grid, theta, p, g, config)


# ------------------------------------------------------------------ spectra

def default_spectrum_window(p: AtomicParams, g: GratingGeometry, n_samples: int = 8192) -> FrequencyWindow:
    return FrequencyWindow(4.0 * float(effective_rabi(0.0, p, g)), n_samples)


def _spectrum_on(omega, nodes, weights, p, g, config):
    out = np.zeros(omega.shape, dtype=complex)
    for start in range(0, nodes.size, 32):
        xs = nodes[start:start + 32]
        ws = weights[start:start + 32] * np.cos(np.pi * xs / g.d)
        out += spectral_kernel(omega[:, None], xs[None, :], p, g, config) @ ws
    return out


_MAX_DOUBLINGS = 5


def joint_spectrum(p: AtomicParams, g: GratingGeometry, config: RegimeConfig, omega_grid=None,
                   grating: bool = True) -> ComplexSpectrum:
    """Joint spectral function on ``omega_grid`` (default: ``config.window`` or four effective Rabi widths).

    The phase ``omega L / v_g`` oscillates without bound towards the
    standing-wave nodes, so the x panels are doubled until two successive
    levels agree to ``x_quadrature.rel_tol`` in relative L2 norm.

    Raises
    ------
    ConvergenceError
        if that has not happened after ``_MAX_DOUBLINGS`` doublings.
    """
    if omega_grid is None:
        window = config.window or default_spectrum_window(p, g)
        omega_grid = window.grid()
    omega = np.asarray(omega_grid, dtype=float)
    if not grating:
        return ComplexSpectrum(omega, g.d * spectral_kernel(omega, 0.0, p, g, config, grating=False))
    spec = config.x_quadrature
    prev = _spectrum_on(omega, *half_period_nodes(g, spec), p, g, config)
    for _ in range(_MAX_DOUBLINGS):
        spec = spec.refined()
        cur = _spectrum_on(omega, *half_period_nodes(g, spec), p, g, config)
        change = np.linalg.norm(cur - prev) / max(np.linalg.norm(cur), 1e-300)
        if change <= spec.rel_tol:
            return ComplexSpectrum(omega, cur)
        prev = cur
    raise ConvergenceError(
        f"joint spectrum x-quadrature: {spec.n_panels} panels still change the result by "
        f"{change:.2e} (rel_tol {spec.rel_tol:.0e})"
    )


# ------------------------------------------------------------ coincidences

def coincidence_resonance(tau_grid, p: AtomicParams, g: GratingGeometry) -> CoincidenceTrace:
    """Closed form ``[H0(|Omega_c| tau) exp(-gamma_e tau)]^2`` normalised to unit peak.

    Uses ``Omega_e ~ |Omega_c| cos(pi x/d)``, under which the x integral of
    ``sin(|Omega_c| tau cos(pi x/d))`` is ``d H0(|Omega_c| tau)``.
    """
    tau = np.asarray(tau_grid, dtype=float)
    causal = np.clip(tau, 0.0, None)
    amp = g.d * struve_h0(p.omega_c * causal) * np.exp(-p.gamma_e * causal)
    return CoincidenceTrace.from_amplitude(tau, np.where(tau > 0, amp, 0.0))


def coincidence_resonance_numeric(tau_grid, p: AtomicParams, g: GratingGeometry,
                                  config: RegimeConfig | None = None) -> CoincidenceTrace:
    """Double quadrature of ``int dx cos(pi x/d) int dw chi3(w; x) exp(-i w tau)`` with exact ``Omega_e(x)``."""
    base = config or RegimeConfig()
    config = RegimeConfig(Regime.RESONANCE, base.x_quadrature, base.window, base.include_chi3,
                          base.edge_tol, base.oversample)
    return CoincidenceTrace.from_amplitude(tau_grid, single_slit_amplitude(tau_grid, 0.0, p, g, config))


def coincidence_phasematch(tau_grid, p: AtomicParams, g: GratingGeometry, config: RegimeConfig | None = None,
                           include_chi3: bool = True, grating: bool = True) -> CoincidenceTrace:
    """Phase-matching dominated trace; ``grating=False`` freezes the medium at its antinode."""
    base = config or RegimeConfig()
    config = RegimeConfig(Regime.PHASE_MATCHING, base.x_quadrature, base.window, include_chi3,
                          base.edge_tol, base.oversample)
    amp = single_slit_amplitude(tau_grid, 0.0, p, g, config, grating=grating)
    return CoincidenceTrace.from_amplitude(tau_grid, amp)


def coincidence(tau_grid, p: AtomicParams, g: GratingGeometry, config: RegimeConfig,
                grating: bool = True) -> CoincidenceTrace:
    """Dispatch on ``config.regime``; the resonance regime takes the numeric path."""
    if config.regime is Regime.RESONANCE:
        if not grating:
            amp = single_slit_amplitude(tau_grid, 0.0, p, g, config, grating=False)
            return CoincidenceTrace.from_amplitude(tau_grid, amp)
        return coincidence_resonance_numeric(tau_grid, p, g, config)
    include = config.include_chi3 or config.regime is Regime.FULL
    return coincidence_phasematch(tau_grid, p, g, config, include_chi3=include, grating=grating)
