"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment, blank lines are ignored.
Every key has a default, so an empty file is a valid configuration.
Frequencies are given in MHz or in units of gamma31, lengths in um and
times in ns; the loader converts them to rad/ns.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .biphoton import Regime, RegimeConfig
from .medium import AtomicParams, GratingGeometry
from .specfun import QuadratureSpec


class ConfigError(ValueError):
    """Bad configuration text or values; ``key`` and ``line`` locate the culprit when known."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.key = key
        self.line = line


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _int(text: str) -> int:
    value = float(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


# key -> (parser, default, description)
SCHEMA = {
    "gamma31_mhz": (float, 3.0, "gamma31 / 2pi in MHz"),
    "gamma21_ratio": (float, 0.6, "gamma21 / gamma31"),
    "gamma41_mhz": (float, 3.0, "gamma41 / 2pi in MHz"),
    "omega_c_over_gamma31": (float, 5.0, "control Rabi frequency at the antinode"),
    "omega_p_over_gamma31": (float, 0.2, "probe Rabi frequency"),
    "delta_p_over_gamma31": (float, 20.0, "probe detuning"),
    "od": (float, 5.0, "optical depth"),
    "l_over_v0_ns": (float, 800.0, "group delay at the antinode"),
    "length_um": (float, 1500.0, "medium length"),
    "d_um": (float, 2.0, "standing-wave period"),
    "m_slits": (_int, 20, "illuminated periods (even)"),
    "lambda_as_um": (float, 0.795, "anti-Stokes wavelength"),
    "regime": (str, "full", "resonance | phase_matching | full"),
    "include_chi3": (_bool, True, "keep chi3 in the phase-matching regime"),
    "x_nodes": (_int, 16, "Gauss-Legendre nodes per panel"),
    "x_panels": (_int, 32, "panels on the half period"),
    "rel_tol": (float, 1e-4, "x-quadrature convergence tolerance"),
    "edge_tol": (float, 1e-6, "kernel magnitude allowed at the frequency window edge"),
    "oversample": (float, 1.25, "frequency-sampling headroom"),
    "tau_points": (_int, 2000, "delay samples"),
    "tau_max_ns": (float, 0.0, "largest delay; 0 means five times max(1/gamma_e, L/v0)"),
    "x_points": (_int, 1001, "transmission samples"),
    "x_periods": (float, 2.0, "transmission span in periods"),
    "theta_points": (_int, 4001, "angle samples"),
    "theta_max_rad": (float, math.pi / 3, "largest angle"),
    "tau_fixed_ns": (float, 50.0, "delay of the angular pattern"),
    "spectrum_points": (_int, 8192, "frequency samples (power of two)"),
    "spectrum_half_width": (float, 0.0, "rad/ns; 0 means four antinode effective Rabi frequencies"),
    "orders_max": (_int, 3, "largest |m| listed by the orders command"),
    "output": (str, "", "output path; empty means <command>.<format>"),
    "format": (str, "csv", "csv | json"),
    "emit_plot_script": (_bool, False, "also write a matplotlib script"),
}

# constructor field -> config key, for error messages
_FIELD_KEYS = {
    "gamma31": "gamma31_mhz",
    "gamma21": "gamma21_ratio",
    "gamma41": "gamma41_mhz",
    "omega_c": "omega_c_over_gamma31",
    "omega_p": "omega_p_over_gamma31",
    "delta_p": "delta_p_over_gamma31",
    "optical_depth": "od",
    "v0": "l_over_v0_ns",
    "weak-probe": "omega_p_over_gamma31",
    "d": "d_um",
    "length": "length_um",
    "lambda_as": "lambda_as_um",
    "m_slits": "m_slits",
    "n_points": "x_nodes",
    "n_panels": "x_panels",
    "rel_tol": "rel_tol",
    "edge_tol": "edge_tol",
    "oversample": "oversample",
}


def _key_for(exc: ValueError) -> str | None:
    msg = str(exc)
    for field_name, key in _FIELD_KEYS.items():
        if msg.startswith(field_name + " ") or msg.startswith(field_name + ":"):
            return key
    return None


@dataclass(frozen=True)
class GridSpec:
    tau_points: int
    tau_max_ns: float
    x_points: int
    x_periods: float
    theta_points: int
    theta_max_rad: float
    tau_fixed_ns: float
    spectrum_points: int
    spectrum_half_width: float
    orders_max: int


@dataclass(frozen=True)
class RunConfig:
    atomic: AtomicParams
    grating: GratingGeometry
    regime: RegimeConfig
    grids: GridSpec
    output: str
    format: str
    emit_plot_script: bool
    settings: tuple  # resolved (key, value) pairs in schema order

    def echo(self) -> str:
        """Config text that parses back to this exact configuration."""
        return "".join(f"{key} = {_format(value)}\n" for key, value in self.settings)

    def as_dict(self) -> dict:
        return dict(self.settings)

    def with_overrides(self, **overrides) -> "RunConfig":
        values = dict(self.settings)
        for key, value in overrides.items():
            if key not in SCHEMA:
                raise ConfigError("unknown key", key=key)
            values[key] = value
        return build_config(values)


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(text: str) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in SCHEMA:
            raise ConfigError("unknown key", key=key, line=lineno)
        if key in values:
            raise ConfigError("duplicate key", key=key, line=lineno)
        parser = SCHEMA[key][0]
        try:
            values[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(str(exc), key=key, line=lineno) from None
    return build_config(values)


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def build_config(values: dict) -> RunConfig:
    """Resolve defaults and validate; ``values`` maps schema keys to parsed values."""
    for key in values:
        if key not in SCHEMA:
            raise ConfigError("unknown key", key=key)
    v = {}
    for key, (parser, default, _) in SCHEMA.items():
        try:
            v[key] = parser(values[key]) if key in values else default
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc), key=key) from None
    for key in ("gamma31_mhz", "gamma21_ratio", "gamma41_mhz", "l_over_v0_ns", "length_um", "d_um",
                "lambda_as_um"):
        if not v[key] > 0:
            raise ConfigError(f"must be > 0, got {v[key]}", key=key)
    for key in ("tau_points", "x_points", "theta_points"):
        if v[key] < 2:
            raise ConfigError(f"must be >= 2, got {v[key]}", key=key)
    for key in ("tau_max_ns", "spectrum_half_width"):
        if not v[key] >= 0:
            raise ConfigError(f"must be >= 0, got {v[key]}", key=key)
    if not v["x_periods"] > 0:
        raise ConfigError(f"must be > 0, got {v['x_periods']}", key="x_periods")
    if not 0 < v["theta_max_rad"] < math.pi / 2:
        raise ConfigError(f"must lie in (0, pi/2), got {v['theta_max_rad']}", key="theta_max_rad")
    if not v["tau_fixed_ns"] >= 0:
        raise ConfigError(f"must be >= 0, got {v['tau_fixed_ns']}", key="tau_fixed_ns")
    n = v["spectrum_points"]
    if n < 16 or n & (n - 1):
        raise ConfigError(f"must be a power of two >= 16, got {n}", key="spectrum_points")
    if v["orders_max"] < 0:
        raise ConfigError(f"must be >= 0, got {v['orders_max']}", key="orders_max")
    if v["format"] not in ("csv", "json"):
        raise ConfigError(f"must be csv or json, got {v['format']!r}", key="format")
    try:
        regime = Regime(v["regime"])
    except ValueError:
        raise ConfigError(f"must be one of {[r.value for r in Regime]}, got {v['regime']!r}",
                          key="regime") from None
    try:
        atomic = AtomicParams.from_lab_units(
            gamma31_mhz=v["gamma31_mhz"],
            gamma21_ratio=v["gamma21_ratio"],
            gamma41_mhz=v["gamma41_mhz"],
            omega_c_over_gamma31=v["omega_c_over_gamma31"],
            omega_p_over_gamma31=v["omega_p_over_gamma31"],
            delta_p_over_gamma31=v["delta_p_over_gamma31"],
            od=v["od"],
            l_over_v0_ns=v["l_over_v0_ns"],
            length_um=v["length_um"],
        )
        grating = GratingGeometry(d=v["d_um"], m_slits=v["m_slits"], length=v["length_um"],
                                  lambda_as=v["lambda_as_um"])
        regime_cfg = RegimeConfig(
            regime=regime,
            x_quadrature=QuadratureSpec(v["x_nodes"], v["rel_tol"], v["x_panels"]),
            include_chi3=v["include_chi3"],
            edge_tol=v["edge_tol"],
            oversample=v["oversample"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc), key=_key_for(exc)) from None
    v["regime"] = regime.value
    grids = GridSpec(v["tau_points"], v["tau_max_ns"], v["x_points"], v["x_periods"], v["theta_points"],
                     v["theta_max_rad"], v["tau_fixed_ns"], v["spectrum_points"], v["spectrum_half_width"],
                     v["orders_max"])
    return RunConfig(atomic, grating, regime_cfg, grids, v["output"], v["format"], v["emit_plot_script"],
                     tuple(v.items()))
