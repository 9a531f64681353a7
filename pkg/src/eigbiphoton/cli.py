"""Command-line front end: one subcommand per data product.

Exit status: 0 on success, 2 for configuration or usage errors, 3 when a
quadrature or frequency window fails to converge.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .biphoton import (
    Regime,
    array_factor,
    coincidence,
    coincidence_resonance,
    coincidence_resonance_numeric,
    default_spectrum_window,
    joint_spectrum,
)
from .config import ConfigError, RunConfig, build_config, load_config
from .diffraction import angular_pattern, order_angle
from .export import Table, write_manifest, write_table
from .medium import absorption, group_delay, group_velocity, transmission_profile
from .specfun import FrequencyWindow, NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

COMMANDS = ("transmission", "coincidence", "diffraction", "spectrum", "orders")


def _normalize(values):
    peak = np.max(values)
    return values / peak if peak > 0 else values


def tau_grid(cfg: RunConfig) -> np.ndarray:
    p, g = cfg.atomic, cfg.grating
    span = cfg.grids.tau_max_ns or 5.0 * max(1.0 / p.gamma_e, float(group_delay(0.0, p, g)))
    return np.linspace(0.0, span, cfg.grids.tau_points)


def run_transmission(cfg: RunConfig) -> Table:
    p, g = cfg.atomic, cfg.grating
    half = 0.5 * cfg.grids.x_periods * g.d
    x = np.linspace(-half, half, cfg.grids.x_points)
    return Table(
        "anti-Stokes transmission across the standing wave",
        "x_um",
        x,
        {
            "transmission": transmission_profile(x, p, g),
            "alpha_L": absorption(x, p, g),
            "group_velocity": group_velocity(x, p, g),
        },
        {"x_um": "um", "transmission": "1", "alpha_L": "1", "group_velocity": "um/ns"},
    )


def run_coincidence(cfg: RunConfig) -> Table:
    """Resonance regime: closed form next to the exact double quadrature.
    Otherwise: the trace with the grating next to the uniform medium."""
    p, g, rc = cfg.atomic, cfg.grating, cfg.regime
    tau = tau_grid(cfg)
    if rc.regime is Regime.RESONANCE:
        columns = {
            "analytic": coincidence_resonance(tau, p, g).rate,
            "numeric": coincidence_resonance_numeric(tau, p, g, rc).rate,
        }
        title = "coincidence rate, resonance regime"
    else:
        columns = {
            "grating": coincidence(tau, p, g, rc, grating=True).rate,
            "no_grating": coincidence(tau, p, g, rc, grating=False).rate,
        }
        title = f"coincidence rate, {rc.regime.value} regime"
    units = {"tau_ns": "ns", **{name: "peak-normalised" for name in columns}}
    return Table(title, "tau_ns", tau, columns, units)


def run_diffraction(cfg: RunConfig) -> Table:
    p, g = cfg.atomic, cfg.grating
    theta = np.linspace(-cfg.grids.theta_max_rad, cfg.grids.theta_max_rad, cfg.grids.theta_points)
    pattern = angular_pattern(cfg.grids.tau_fixed_ns, theta, p, g, cfg.regime)
    af = np.abs(array_factor(theta, g)) ** 2 / (g.m_slits + 1) ** 2
    return Table(
        f"far-field anti-Stokes intensity at tau = {cfg.grids.tau_fixed_ns:g} ns",
        "theta_rad",
        theta,
        {"intensity": pattern.intensity, "array_factor_sq": af},
        {"theta_rad": "rad", "intensity": "peak-normalised", "array_factor_sq": "peak-normalised"},
    )


def run_spectrum(cfg: RunConfig) -> Table:
    p, g, rc = cfg.atomic, cfg.grating, cfg.regime
    n = cfg.grids.spectrum_points
    if cfg.grids.spectrum_half_width > 0:
        window = FrequencyWindow(cfg.grids.spectrum_half_width, n)
    else:
        window = default_spectrum_window(p, g, n)
    omega = window.grid()
    with_grating = joint_spectrum(p, g, rc, omega, grating=True)
    without = joint_spectrum(p, g, rc, omega, grating=False)
    return Table(
        f"joint spectral intensity, {rc.regime.value} regime",
        "omega_rad_per_ns",
        omega,
        {"grating": _normalize(with_grating.intensity), "no_grating": _normalize(without.intensity)},
        {"omega_rad_per_ns": "rad/ns", "grating": "peak-normalised", "no_grating": "peak-normalised"},
    )


def run_orders(cfg: RunConfig) -> Table:
    g = cfg.grating
    top = cfg.grids.orders_max
    m = np.arange(-top, top + 1)
    angles = [order_angle(int(k), g) for k in m]
    return Table(
        "diffraction orders",
        "m",
        m,
        {
            "sin_theta": m * g.lambda_as / g.d,
            "theta_rad": [np.nan if a is None else a for a in angles],
            "propagating": [0.0 if a is None else 1.0 for a in angles],
        },
        {"m": "1", "sin_theta": "1", "theta_rad": "rad", "propagating": "1"},
    )


RUNNERS = {
    "transmission": run_transmission,
    "coincidence": run_coincidence,
    "diffraction": run_diffraction,
    "spectrum": run_spectrum,
    "orders": run_orders,
}


HELP = {
    "transmission": "transmission, loss and group velocity across the standing wave",
    "coincidence": "two-photon coincidence rate against relative delay",
    "diffraction": "far-field angular pattern at a fixed delay",
    "spectrum": "joint spectral intensity with and without the grating",
    "orders": "diffraction order angles",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigbiphoton",
        description="Biphoton wave packets shaped by an electromagnetically induced grating.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name, help=HELP[name])
        cmd.add_argument("--config", type=Path, help="key = value config file (defaults if omitted)")
        cmd.add_argument("--regime", choices=[r.value for r in Regime], help="override the config regime")
        cmd.add_argument("--out", type=Path, help="data file path (default <command>.<format>)")
        cmd.add_argument("--format", choices=("csv", "json"), help="override the config format")
        cmd.add_argument("--emit-plot-script", action="store_true",
                         help="also write a standalone matplotlib script next to the data")
        cmd.add_argument("--plot", action="store_true", help="also render a PNG (needs matplotlib)")
    return parser


def resolve(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else build_config({})
    overrides = {}
    if args.regime:
        overrides["regime"] = args.regime
    if args.format:
        overrides["format"] = args.format
    if args.out:
        overrides["output"] = str(args.out)
    if args.emit_plot_script:
        overrides["emit_plot_script"] = True
    return cfg.with_overrides(**overrides) if overrides else cfg


def output_path(cfg: RunConfig, command: str) -> Path:
    out = Path(cfg.output) if cfg.output else Path(f"{command}.{cfg.format}")
    parent = out.parent if str(out.parent) else Path(".")
    if not parent.is_dir():
        raise ConfigError(f"output directory does not exist: {parent}", key="output")
    if not os.access(parent, os.W_OK):
        raise ConfigError(f"output directory is not writable: {parent}", key="output")
    return out


def execute(command: str, cfg: RunConfig, plot: bool = False) -> list[Path]:
    """Run one subcommand and write its files; returns the paths written."""
    out = output_path(cfg, command)
    table = RUNNERS[command](cfg)
    echo = cfg.echo()
    files = [write_table(table, out, cfg.format, echo)]
    if cfg.emit_plot_script or plot:
        from . import plotting

        if cfg.emit_plot_script:
            files.append(plotting.write_plot_script(table, out, out.with_suffix(".plot.py")))
        if plot:
            files.append(plotting.render_png(table, out.with_suffix(".png")))
    manifest = write_manifest(out.with_suffix(".manifest.json"), command, cfg.as_dict(), table, files)
    return [*files, manifest]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        files = execute(args.command, cfg, plot=args.plot)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for path in files:
        print(path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
