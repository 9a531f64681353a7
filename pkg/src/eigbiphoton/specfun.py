"""Special functions and quadrature kernels.

Struve ``H0`` and the Bessel pair ``J0``/``Y0`` are implemented from their
series and asymptotic forms; the quadrature side provides composite
Gauss-Legendre panels, trapezoid weights and a windowed Fourier integral
evaluated with Bluestein's chirp-z algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import fft as sfft

__all__ = [
    "ConvergenceError",
    "FrequencyWindow",
    "NumericalError",
    "QuadratureSpec",
    "WindowTooNarrowError",
    "bessel_j0",
    "bessel_y0",
    "csinc",
    "gauss_legendre",
    "integrate_gl",
    "oscillatory_ft",
    "struve_h0",
    "trapezoid_weights",
]

EULER_GAMMA = 0.5772156649015329

# H0 power series is used up to here; above it H0 = Y0 + Laplace tail.
STRUVE_SWITCH = 8.0
# J0/Y0 power series below, Hankel expansion above.
BESSEL_SWITCH = 13.0

_LAGUERRE_NODES, _LAGUERRE_WEIGHTS = np.polynomial.laguerre.laggauss(40)
_TWO_PI_LONG = 2 * np.longdouble("3.14159265358979323846264338327950288")


class NumericalError(RuntimeError):
    """Base class for quadrature / transform failures."""


class WindowTooNarrowError(NumericalError):
    """The sampled spectrum has not decayed at the window edges."""


class ConvergenceError(NumericalError):
    """Refining a quadrature moved the result by more than its tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Composite Gauss-Legendre rule: ``n_panels`` equal panels of ``n_points`` nodes."""

    n_points: int = 16
    rel_tol: float = 1e-4
    n_panels: int = 32

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError(f"n_points must be >= 2, got {self.n_points}")
        if self.n_panels < 1:
            raise ValueError(f"n_panels must be >= 1, got {self.n_panels}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return QuadratureSpec(self.n_points, self.rel_tol, self.n_panels * factor)


@dataclass(frozen=True)
class FrequencyWindow:
    """Uniform grid of ``n_samples`` points covering ``[-half_width, half_width]``."""

    half_width: float
    n_samples: int = 2**14

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError(f"half_width must be > 0, got {self.half_width}")
        n = self.n_samples
        if n < 16 or n & (n - 1):
            raise ValueError(f"n_samples must be a power of two >= 16, got {n}")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.n_samples - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n_samples)


# ---------------------------------------------------------------- quadrature

def gauss_legendre(a: float, b: float, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule on ``[a, b]``.

    The rule is open: no node ever sits on ``a`` or ``b``.
    """
    x, w = np.polynomial.legendre.leggauss(spec.n_points)
    edges = np.linspace(a, b, spec.n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def integrate_gl(f, a: float, b: float, spec: QuadratureSpec | None = None):
    """Integrate a vectorised callable over ``[a, b]``."""
    spec = spec or QuadratureSpec()
    nodes, weights = gauss_legendre(a, b, spec)
    return np.dot(weights, f(nodes))


def trapezoid_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = 0.5 * step
    return w


# ---------------------------------------------------------- special functions

def _as_float_array(z, name: str) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if np.any(z < 0) or np.any(np.isnan(z)):
        raise ValueError(f"{name} is defined here only for real z >= 0")
    return z


def _bessel_series(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    q = 0.25 * z * z
    term = np.ones_like(z)
    j0 = np.ones_like(z)
    harmonic_sum = np.zeros_like(z)
    harmonic = 0.0
    for k in range(1, 80):
        term = -term * q / (k * k)
        harmonic += 1.0 / k
        j0 += term
        harmonic_sum -= harmonic * term
        if np.all(np.abs(term) < 1e-18 * np.maximum(1.0, np.abs(j0))):
            break
    with np.errstate(divide="ignore"):
        y0 = (2.0 / np.pi) * ((np.log(0.5 * z) + EULER_GAMMA) * j0 + harmonic_sum)
    return j0, y0


def _hankel_pq(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Order-zero Hankel expansion, each element truncated at its smallest term.
    p = np.ones_like(z)
    q = np.zeros_like(z)
    term = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    last = np.full(z.shape, np.inf)
    for k in range(1, 200):
        term = term * (-((2 * k - 1) ** 2)) / (k * 8.0 * z)
        size = np.abs(term)
        active &= size < last
        if not active.any():
            break
        last = np.where(active, size, last)
        # odd k feed Q with alternating sign, even k feed P
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        contribution = np.where(active, sign * term, 0.0)
        if k % 2:
            q += contribution
        else:
            p += contribution
        active &= size > 1e-18
    return p, q


def _bessel_pair(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    j0 = np.empty_like(z)
    y0 = np.empty_like(z)
    small = z <= BESSEL_SWITCH
    if small.any():
        j0[small], y0[small] = _bessel_series(z[small])
    big = ~small
    if big.any():
        zb = z[big]
        p, q = _hankel_pq(zb)
        chi = zb - 0.25 * np.pi
        amp = np.sqrt(2.0 / (np.pi * zb))
        j0[big] = amp * (p * np.cos(chi) - q * np.sin(chi))
        y0[big] = amp * (p * np.sin(chi) + q * np.cos(chi))
    return j0, y0


def bessel_j0(z):
    """Bessel function of the first kind, order zero, for real ``z >= 0``."""
    z = _as_float_array(z, "bessel_j0")
    return _bessel_pair(np.atleast_1d(z))[0].reshape(z.shape)[()]


def bessel_y0(z):
    """Bessel function of the second kind, order zero, for real ``z > 0``.

    ``Y0(0)`` is returned as ``-inf``.
    """
    z = _as_float_array(z, "bessel_y0")
    return _bessel_pair(np.atleast_1d(z))[1].reshape(z.shape)[()]


def _struve_series(z: np.ndarray) -> np.ndarray:
    half = 0.5 * z
    term = half / math.gamma(1.5) ** 2
    total = term.copy()
    for k in range(1, 80):
        term = -term * half * half / (k + 0.5) ** 2
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _struve_minus_y0(z: np.ndarray) -> np.ndarray:
    """``H0(z) - Y0(z) = (2/pi) int_0^inf exp(-z t) / sqrt(1 + t^2) dt``.

    Term-by-term this integral is the usual asymptotic series
    ``2/(pi z) (1 - 1/z^2 + 9/z^4 - ...)``; Gauss-Laguerre quadrature of the
    integral itself keeps full precision down to ``z ~ 6``.
    """
    s = _LAGUERRE_NODES[None, :] / z[:, None]
    integral = (_LAGUERRE_WEIGHTS[None, :] / np.sqrt(1.0 + s * s)).sum(axis=1) / z
    return (2.0 / np.pi) * integral


def struve_h0(z):
    """Struve function of order zero for real ``z >= 0``.

    Power series for ``z <= STRUVE_SWITCH``; above that,
    ``Y0(z)`` plus the Laplace-integral form of the large-``z`` tail.

    Raises
    ------
    ValueError
        for negative ``z``.
    """
    z = _as_float_array(z, "struve_h0")
    flat = np.atleast_1d(z).ravel()
    out = np.empty_like(flat)
    small = flat <= STRUVE_SWITCH
    if small.any():
        out[small] = _struve_series(flat[small])
    big = ~small
    if big.any():
        zb = flat[big]
        out[big] = _bessel_pair(zb)[1] + _struve_minus_y0(zb)
    return out.reshape(z.shape)[()]


def csinc(z):
    """``sin(z)/z`` for complex ``z``; the removable point uses a short series."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-4
    zs = z[small]
    z2 = zs * zs
    out[small] = 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    zb = z[~small]
    out[~small] = np.sin(zb) / zb
    return out[()] if out.ndim == 0 else out


# ------------------------------------------------------------ Fourier integral

def _is_uniform(tau: np.ndarray) -> bool:
    if tau.size < 3:
        return True
    d = np.diff(tau)
    return d[0] > 0 and np.allclose(d, d[0], rtol=1e-9, atol=0.0)


def oscillatory_ft(values, window: FrequencyWindow, tau_grid, edge_tol: float = 1e-6,
                   peak: float | None = None) -> np.ndarray:
    """Trapezoid approximation of ``int dw f(w) exp(-i w tau)`` over the window.

    ``values`` are samples of ``f`` on ``window.grid()``.  For a uniform
    ``tau_grid`` the sums come from one chirp-z (Bluestein) convolution; the window
    offset ``-half_width`` enters as the phase ``exp(i W tau)``.

    ``peak`` is the true maximum of ``|f|`` when the samples may straddle a
    peak narrower than the grid step; by default the sampled maximum is used.

    Raises
    ------
    WindowTooNarrowError
        if ``|f|`` near either edge exceeds ``edge_tol`` times its peak.
    """
    f = np.asarray(values, dtype=complex)
    n = window.n_samples
    if f.shape != (n,):
        raise ValueError(f"expected {n} samples, got shape {f.shape}")
    mag = np.abs(f)
    peak = max(mag.max(), peak or 0.0)
    rim = max(1, n // 256)
    edge = max(mag[:rim].max(), mag[-rim:].max())
    if peak > 0 and edge > edge_tol * peak:
        raise WindowTooNarrowError(
            f"spectrum at the window edge is {edge / peak:.2e} of its peak "
            f"(limit {edge_tol:.0e}); enlarge half_width beyond {window.half_width:.6g}"
        )
    tau = np.atleast_1d(np.asarray(tau_grid, dtype=float))
    if tau.size == 0:
        return np.zeros(0, dtype=complex)
    dw = window.step
    fw = f * trapezoid_weights(n, dw)
    if tau.size == 1 or not _is_uniform(tau):
        out = np.empty(tau.size, dtype=complex)
        omega = window.grid()
        for start in range(0, tau.size, 64):
            block = tau[start:start + 64]
            out[start:start + 64] = np.exp(-1j * np.outer(block, omega)) @ fw
        return out
    return _chirp_sums(fw, window.step, tau[0], tau[1] - tau[0], tau.size) * np.exp(
        1j * window.half_width * tau
    )


def _phase(scale: float, k: np.ndarray) -> np.ndarray:
    # scale * k reduced mod 2 pi in extended precision; the raw products reach 1e10 rad
    prod = np.longdouble(scale) * k.astype(np.longdouble)
    return np.fmod(prod, _TWO_PI_LONG).astype(float)


def _chirp_sums(y: np.ndarray, dw: float, tau0: float, dtau: float, m: int) -> np.ndarray:
    """``sum_n y_n exp(-i n dw (tau0 + k dtau))`` for ``k < m`` (Bluestein's algorithm)."""
    n = y.size
    theta = dw * dtau
    idx = np.arange(max(n, m), dtype=np.int64)
    sq = idx * idx
    size = sfft.next_fast_len(n + m - 1)
    a = np.zeros(size, dtype=complex)
    a[:n] = y * np.exp(-1j * (_phase(dw * tau0, idx[:n]) + _phase(0.5 * theta, sq[:n])))
    chirp = np.exp(1j * _phase(0.5 * theta, sq))
    b = np.zeros(size, dtype=complex)
    b[:m] = chirp[:m]
    b[size - n + 1:] = chirp[1:n][::-1]
    conv = sfft.ifft(sfft.fft(a) * sfft.fft(b))[:m]
    return conv * np.exp(-1j * _phase(0.5 * theta, sq[:m]))
