"""Shape measures on sampled traces and spectra."""
from __future__ import annotations

import numpy as np
from scipy.signal import argrelmax, peak_prominences

# Tail maxima smaller than this (relative to the peak) are treated as
# quadrature noise; the traces converge to ~1e-5.
BUMP_PROMINENCE = 1e-4


def _normalized(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    peak = v.max()
    return v / peak if peak > 0 else v


def _crossing(x, y, i, level):
    """Linear interpolation of ``y = level`` between samples ``i`` and ``i + 1``."""
    y0, y1 = y[i], y[i + 1]
    if y1 == y0:
        return float(x[i])
    return float(x[i] + (level - y0) * (x[i + 1] - x[i]) / (y1 - y0))


def fwhm(grid, values) -> float:
    """Full width at half maximum around the global peak, with interpolated crossings."""
    x = np.asarray(grid, dtype=float)
    y = _normalized(values)
    k = int(np.argmax(y))
    left = np.nonzero(y[:k] < 0.5)[0]
    right = np.nonzero(y[k:] < 0.5)[0]
    if left.size == 0 or right.size == 0:
        raise ValueError("half maximum not reached on both sides of the peak")
    i = left[-1]
    j = k + right[0] - 1
    return _crossing(x, y, j, 0.5) - _crossing(x, y, i, 0.5)


def trailing_edge(tau, rate, level: float = 0.05) -> float:
    """First delay after the global peak where the rate falls below ``level`` of the peak."""
    t = np.asarray(tau, dtype=float)
    y = _normalized(rate)
    k = int(np.argmax(y))
    below = np.nonzero(y[k:] < level)[0]
    if below.size == 0:
        return float("inf")
    j = k + below[0] - 1
    return _crossing(t, y, j, level)


def last_above(tau, rate, level: float = 0.01) -> float:
    """Largest delay where the rate is still at least ``level`` of the peak."""
    t = np.asarray(tau, dtype=float)
    y = _normalized(rate)
    idx = np.nonzero(y >= level)[0]
    return float(t[idx[-1]]) if idx.size else float("nan")


def tail_maxima(tau, rate, start: float, prominence: float = BUMP_PROMINENCE) -> np.ndarray:
    """Delays of strict local maxima beyond ``start`` with relative prominence above ``prominence``."""
    t = np.asarray(tau, dtype=float)
    y = _normalized(rate)
    idx = argrelmax(y)[0]
    idx = idx[t[idx] > start]
    if idx.size == 0:
        return idx.astype(float)
    prom = peak_prominences(y, idx)[0]
    return t[idx[prom >= prominence]]


def precursor(tau, rate, transit: float, lead: float = 0.1, ratio: float = 1.5) -> bool:
    """Sharp leading-edge spike: the global peak sits in the first ``lead`` of the
    transit time and stands ``ratio`` above the median of the mid-transit plateau."""
    t = np.asarray(tau, dtype=float)
    y = _normalized(rate)
    k = int(np.argmax(y))
    plateau = y[(t >= 0.25 * transit) & (t <= 0.75 * transit)]
    if plateau.size == 0:
        return False
    return bool(t[k] < lead * transit and 1.0 / np.median(plateau) >= ratio)


def sign_changes(tau, values) -> np.ndarray:
    """Interpolated zeros of a real sampled function (amplitude, not rate)."""
    t = np.asarray(tau, dtype=float)
    y = np.asarray(values, dtype=float)
    i = np.nonzero(np.signbit(y[:-1]) != np.signbit(y[1:]))[0]
    i = i[(y[i] != 0) | (y[i + 1] != 0)]
    return np.array([_crossing(t, y, k, 0.0) for k in i])


def local_minima(tau, rate, floor: float = 1e-3) -> np.ndarray:
    """Delays of local minima of the normalised rate that drop below ``floor``."""
    t = np.asarray(tau, dtype=float)
    y = _normalized(rate)
    inner = np.nonzero((y[1:-1] <= y[:-2]) & (y[1:-1] <= y[2:]) & (y[1:-1] < floor))[0] + 1
    return t[inner]


def has_observable_oscillation(tau, rate, threshold: float = 1e-3) -> bool:
    """True when some maximum after the global peak exceeds ``threshold`` of the peak."""
    y = _normalized(rate)
    k = int(np.argmax(y))
    idx = argrelmax(y)[0]
    idx = idx[idx > k]
    return bool(np.any(y[idx] > threshold))
