"""Far-field angular distribution of the diffracted anti-Stokes field."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .biphoton import RegimeConfig, array_factor, slit_kernels
from .medium import AtomicParams, GratingGeometry


@dataclass(frozen=True)
class AngularPattern:
    theta_grid: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        theta = self.theta_grid
        if np.any(np.abs(theta) >= 0.5 * np.pi):
            raise ValueError("theta_grid must lie inside (-pi/2, pi/2)")
        if theta.size > 1 and np.any(np.diff(theta) <= 0):
            raise ValueError("theta_grid must be strictly increasing")


def default_theta_grid(n: int = 4001, theta_max: float = np.pi / 3) -> np.ndarray:
    return np.linspace(-theta_max, theta_max, n)


def order_angle(m: int, g: GratingGeometry) -> float | None:
    """Emission angle of diffraction order ``m``, or ``None`` when the order is evanescent."""
    s = m * g.lambda_as / g.d
    if abs(s) > 1.0:
        return None
    return math.asin(s)


def propagating_orders(g: GratingGeometry) -> list[int]:
    top = int(math.floor(g.d / g.lambda_as))
    return list(range(-top, top + 1))


def angular_pattern(tau_fixed: float, theta_grid, p: AtomicParams, g: GratingGeometry,
                    config: RegimeConfig) -> AngularPattern:
    """``|array_factor(theta) B(tau; theta)|^2`` at one delay, normalised to unit peak."""
    if tau_fixed < 0:
        raise ValueError(f"tau_fixed must be >= 0, got {tau_fixed}")
    theta = np.asarray(theta_grid, dtype=float)
    kernels = slit_kernels([tau_fixed], p, g, config)
    slit = kernels.amplitude(theta, g.k_as)[:, 0]
    intensity = np.abs(array_factor(theta, g) * slit) ** 2
    peak = intensity.max()
    if peak > 0:
        intensity = intensity / peak
    return AngularPattern(theta, intensity)


def lobe_powers(pattern: AngularPattern, g: GratingGeometry) -> dict[int, float]:
    """Integrated intensity of each propagating order.

    Order ``m`` owns the angles whose ``sin(theta)`` lies within half an
    order spacing of ``m lambda_as / d``.
    """
    theta = pattern.theta_grid
    s = np.sin(theta) * g.d / g.lambda_as
    owner = np.rint(s).astype(int)
    powers = {}
    for m in propagating_orders(g):
        mask = owner == m
        if mask.sum() >= 2:
            powers[m] = float(np.trapezoid(pattern.intensity[mask], theta[mask]))
        else:
            powers[m] = 0.0
    return powers


def zeroth_order_fraction(tau_fixed: float, p: AtomicParams, g: GratingGeometry, config: RegimeConfig,
                          n_theta: int = 8001) -> float:
    """Share of the emitted power inside the zeroth-order lobe.

    The lobe is ``|theta|`` below half the first-order angle; the total is
    taken over all propagating angles ``(-pi/2, pi/2)``.
    """
    edge = 0.5 * np.pi * (1.0 - 1e-9)
    theta = np.linspace(-edge, edge, n_theta)
    pattern = angular_pattern(tau_fixed, theta, p, g, config)
    first = order_angle(1, g)
    half = 0.5 * (first if first is not None else 0.5 * np.pi)
    total = np.trapezoid(pattern.intensity, theta)
    inner = np.abs(theta) <= half
    return float(np.trapezoid(pattern.intensity[inner], theta[inner]) / total)
