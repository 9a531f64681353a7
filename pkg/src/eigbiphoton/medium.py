"""Optical response of the cold double-Lambda medium under a control standing wave.

Units throughout the package: angular frequencies in rad/ns, times in ns,
lengths in micrometres.  All dipole moments, the atomic density and the
physical constants are folded into dimensionless prefactors; the medium is
instead specified by its optical depth and the antinode group delay
``L / v0``.

The control standing wave modulates every response through
``cos^2(pi x / d)``, so each function below is even in ``x`` and periodic
with period ``d``.

Prefactor note: the Stokes susceptibility carries ``1/(4 hbar eps0)`` while
the anti-Stokes one carries ``1/(hbar eps0)``.  Both are kept as printed in
the model, with ``N |mu|^2 / (hbar eps0)`` set to one, so only their ratio
(and the ``|Omega_p|^2 / (Delta_p^2 + gamma41^2)`` suppression) matters.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def mhz_to_rad_per_ns(f_mhz: float) -> float:
    """Convert a frequency ``f`` in MHz to the angular rate ``2 pi f`` in rad/ns."""
    return TWO_PI * f_mhz * 1e-3


@dataclass(frozen=True)
class AtomicParams:
    """Decay rates, fields and density of the four-level medium.

    All rates are angular frequencies in rad/ns; ``v0`` is the antinode
    group velocity in um/ns.
    """

    gamma31: float
    gamma21: float
    gamma41: float
    omega_c: float
    omega_p: float
    delta_p: float
    optical_depth: float
    v0: float

    def __post_init__(self):
        for name in ("gamma31", "gamma21", "gamma41", "v0"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        for name in ("omega_c", "omega_p"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if not math.isfinite(self.delta_p):
            raise ValueError(f"delta_p must be finite, got {self.delta_p}")
        if not self.optical_depth >= 0:
            raise ValueError(f"optical_depth must be >= 0, got {self.optical_depth}")
        if not abs(self.omega_p) < 0.1 * abs(self.delta_p):
            raise ValueError(
                "weak-probe condition violated: need |omega_p| < 0.1 |delta_p|, "
                f"got omega_p={self.omega_p}, delta_p={self.delta_p}"
            )

    @property
    def gamma_e(self) -> float:
        """Effective dephasing ``(gamma31 + gamma21) / 2``."""
        return 0.5 * (self.gamma31 + self.gamma21)

    @classmethod
    def from_lab_units(
        cls,
        gamma31_mhz: float = 3.0,
        gamma21_ratio: float = 0.6,
        gamma41_mhz: float = 3.0,
        omega_c_over_gamma31: float = 5.0,
        omega_p_over_gamma31: float = 0.2,
        delta_p_over_gamma31: float = 20.0,
        od: float = 5.0,
        l_over_v0_ns: float = 800.0,
        length_um: float = 1500.0,
    ) -> "AtomicParams":
        g31 = mhz_to_rad_per_ns(gamma31_mhz)
        return cls(
            gamma31=g31,
            gamma21=gamma21_ratio * g31,
            gamma41=mhz_to_rad_per_ns(gamma41_mhz),
            omega_c=omega_c_over_gamma31 * g31,
            omega_p=omega_p_over_gamma31 * g31,
            delta_p=delta_p_over_gamma31 * g31,
            optical_depth=od,
            v0=length_um / l_over_v0_ns,
        )


@dataclass(frozen=True)
class GratingGeometry:
    """Standing-wave period ``d``, illuminated slit count, medium length, anti-Stokes wavelength (um)."""

    d: float = 2.0
    m_slits: int = 20
    length: float = 1500.0
    lambda_as: float = 0.795

    def __post_init__(self):
        for name in ("d", "length", "lambda_as"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if int(self.m_slits) != self.m_slits or self.m_slits < 1 or self.m_slits % 2:
            raise ValueError(f"m_slits must be a positive even integer, got {self.m_slits}")

    @property
    def k_as(self) -> float:
        return TWO_PI / self.lambda_as

@dataclass(frozen=True)
class MediumResponse:
    """Grouped constant in front of the third-order susceptibility."""

    chi3_scale: complex = 1.0


def standing_wave(x, g: GratingGeometry):
    """``cos^2(pi x / d)``: control intensity relative to the antinode."""
    return np.cos(np.pi * np.asarray(x, dtype=float) / g.d) ** 2


def effective_rabi(x, p: AtomicParams, g: GratingGeometry):
    """``sqrt(|Omega_c|^2 cos^2(pi x/d) + gamma31 gamma21)``, the exact form."""
    return np.sqrt(p.omega_c**2 * standing_wave(x, g) + p.gamma31 * p.gamma21)


def chi3_as(omega, x, p: AtomicParams, g: GratingGeometry, response: MediumResponse = MediumResponse()):
    """Third-order susceptibility of the anti-Stokes field.

    Two poles at ``omega = +/- Omega_e - i gamma_e`` (lower half plane).
    """
    omega = np.asarray(omega, dtype=float)
    oe = effective_rabi(x, p, g)
    ge = p.gamma_e
    return response.chi3_scale / ((omega - oe + 1j * ge) * (omega + oe + 1j * ge))


def chi_linear_as(omega, x, p: AtomicParams, g: GratingGeometry):
    omega = np.asarray(omega, dtype=float)
    num = omega + 1j * p.gamma21
    den = p.omega_c**2 * standing_wave(x, g) - (omega + 1j * p.gamma31) * (omega + 1j * p.gamma21)
    return num / den


def chi_linear_s(omega, x, p: AtomicParams, g: GratingGeometry):
    """Stokes susceptibility; the sign convention ``omega - i gamma`` is kept as written."""
    omega = np.asarray(omega, dtype=float)
    suppression = p.omega_p**2 / (p.delta_p**2 + p.gamma41**2)
    num = 0.25 * (omega - 1j * p.gamma31)
    den = p.omega_c**2 * standing_wave(x, g) - (omega - 1j * p.gamma31) * (omega - 1j * p.gamma21)
    return num / den * suppression


def group_velocity(x, p: AtomicParams, g: GratingGeometry):
    """``v0 cos^2(pi x / d)`` in um/ns; exactly zero at the nodes."""
    return p.v0 * standing_wave(x, g)


def group_delay(x, p: AtomicParams, g: GratingGeometry):
    """``L / v_g`` in ns (``inf`` at the nodes)."""
    vg = group_velocity(x, p, g)
    with np.errstate(divide="ignore"):
        return g.length / vg


def absorption(x, p: AtomicParams, g: GratingGeometry):
    """Field loss as the dimensionless product ``alpha L``.

    ``OD gamma21 gamma31 / 2 (|Omega_c|^2 cos^2 + gamma21 gamma31)``,
    equal to ``OD / 2`` at the nodes.
    """
    gg = p.gamma21 * p.gamma31
    return p.optical_depth * gg / (2.0 * (p.omega_c**2 * standing_wave(x, g) + gg))


def transmission_profile(x_grid, p: AtomicParams, g: GratingGeometry):
    """Intensity transmission ``exp(-2 alpha L)`` of the anti-Stokes field.

    ``alpha`` is a field-amplitude coefficient (it enters the phase
    mismatch as ``i alpha``), hence the factor two; the node floor is
    ``exp(-OD)``.
    """
    x = np.asarray(x_grid, dtype=float)
    if x.ndim == 1 and x.size > 1 and np.any(np.diff(x) < 0):
        raise ValueError("x_grid must be sorted")
    return np.exp(-2.0 * absorption(x, p, g))
