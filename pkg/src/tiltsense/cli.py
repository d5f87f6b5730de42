"""Command-line front end: Fisher tables, figure data, Monte Carlo runs.

Subcommands: fisher, sweep, figure3, figure4, montecarlo, validate-config.
Exit codes: 0 success, 2 configuration error, 3 numerical-convergence
failure, 4 statistical-check failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from ._integrate import ConvergenceError
from .beam import BeamParams, intensity_profile
from .config import ConfigError, ScenarioConfig, load_config
from .estimate import default_search_interval, run_saturation
from .fisher import (
    analytic_fisher,
    cramer_rao_bound,
    fisher_conditioned,
    qfi_for_model,
)
from .oracle import OracleError, numeric_fisher_oracle
from .output import write_csv, write_json, write_sidecar
from .polarization import PolarizationState
from .schemes import (
    PolarizationModel,
    PositionModel,
    PositionPolarizationModel,
    QuadrantModel,
    small_angle_flags,
)
from .svgplot import LineChart

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_STATS = 4

FISHER_HEADER = (
    "run", "index", "scheme", "theta_rad", "z_m",
    "analytic_fisher", "oracle_fisher", "qfi", "ratio_to_qfi",
    "cr_delta_theta_rad", "warnings",
)

MC_HEADER = (
    "index", "scheme", "theta_true_rad", "z_m", "nu", "trials", "used_trials",
    "non_interior", "empirical_variance_rad2", "cr_variance_rad2", "ratio",
    "analytic_fisher",
)


class StatisticalCheckError(RuntimeError):
    pass


def _require_diagonal(pol: PolarizationState, context: str) -> None:
    if abs(pol.sigma_z_mean) > 1e-12 or abs(math.sin(pol.coherence_phase)) > 1e-12:
        raise ConfigError(
            f"{context}: the joint scheme's closed-form analysis needs the "
            "diagonal input polarization"
        )


def build_model(scheme: str, config: ScenarioConfig, z: float | None, split):
    beam, pol = config.beam, config.polarization
    if scheme == "position":
        return PositionModel(beam, z)
    if scheme == "quadrant":
        return QuadrantModel(beam, z, split)
    if scheme == "polarization":
        return PolarizationModel(beam, pol)
    if scheme == "joint":
        _require_diagonal(pol, "run block")
        return PositionPolarizationModel(beam, pol, z)
    raise ConfigError(f"unknown scheme {scheme!r}")


# ---------------------------------------------------------------------------
# fisher / sweep
# ---------------------------------------------------------------------------


def _fisher_point(run_index, point_index, scheme, config, theta, z, split, nu):
    model = build_model(scheme, config, z, split)
    analytic = analytic_fisher(model, theta)
    oracle = numeric_fisher_oracle(model, theta)
    qfi = qfi_for_model(model)
    warnings = list(small_angle_flags(config.beam, theta))
    if scheme in ("polarization", "joint") and theta == 0.0:
        warnings.append(
            "theta=0 stationary point: finite differences see only the even part"
        )
    return (
        run_index,
        point_index,
        scheme,
        theta,
        z if z is not None else "",
        analytic,
        oracle,
        qfi,
        analytic / qfi if qfi > 0.0 else math.nan,
        cramer_rao_bound(analytic, nu),
        "; ".join(warnings),
    )


def _run_block_rows(config, run_index, block, nu, threads):
    zs = block.z if block.z is not None else [None]
    points = [
        (point_index, theta, z)
        for point_index, (theta, z) in enumerate(
            (t, z) for t in block.theta for z in zs
        )
    ]

    def job(point):
        point_index, theta, z = point
        return _fisher_point(
            run_index, point_index, block.scheme, config, float(theta),
            None if z is None else float(z), block.split, nu,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(job, points))
    else:
        rows = [job(p) for p in points]
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def _emit_table(args, name, header, rows, config_text, seed=None):
    out = Path(args.out)
    suffix = "json" if args.format == "json" else "csv"
    table = out / f"{name}.{suffix}"
    if args.format == "json":
        write_json(table, header, rows)
    else:
        write_csv(table, header, rows)
    write_sidecar(
        out / f"{name}.meta.json",
        command=name,
        argv=args.raw_argv,
        version=__version__,
        seed=seed,
        config_text=config_text,
        outputs=[table.name],
    )
    return table


def cmd_fisher(args) -> int:
    config = load_config(args.config)
    if not config.runs:
        raise ConfigError("config has no run blocks")
    if args.run >= len(config.runs):
        raise ConfigError(f"--run {args.run} but config has {len(config.runs)} run block(s)")
    nu = config.montecarlo.nu if config.montecarlo else 1
    block = config.runs[args.run]
    rows = _run_block_rows(config, args.run, block, nu, args.threads)
    table = _emit_table(args, "fisher", FISHER_HEADER, rows, config.raw_text)
    print(f"wrote {table} ({len(rows)} rows)")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config = load_config(args.config)
    if not config.runs:
        raise ConfigError("config has no run blocks")
    nu = config.montecarlo.nu if config.montecarlo else 1
    rows = []
    for run_index, block in enumerate(config.runs):
        rows.extend(_run_block_rows(config, run_index, block, nu, args.threads))
    table = _emit_table(args, "sweep", FISHER_HEADER, rows, config.raw_text)
    print(f"wrote {table} ({len(rows)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# montecarlo
# ---------------------------------------------------------------------------


def cmd_montecarlo(args) -> int:
    config = load_config(args.config)
    if config.montecarlo is None:
        raise ConfigError("config has no montecarlo block")
    if not config.runs:
        raise ConfigError("config has no run blocks")
    mc = config.montecarlo
    seed = args.seed if args.seed is not None else mc.seed

    rows = []
    failures = []
    for index, block in enumerate(config.runs):
        z = None
        if block.z is not None:
            if block.z.size != 1:
                raise ConfigError(
                    f"run[{index}]: montecarlo needs a scalar z, got a grid of {block.z.size}"
                )
            z = float(block.z[0])
        model = build_model(block.scheme, config, z, block.split)
        try:
            interval = mc.interval or default_search_interval(model, mc.theta, mc.nu)
        except ValueError as exc:
            raise ConfigError(f"run[{index}]: {exc}")
        report = run_saturation(
            model, mc.theta, mc.nu, mc.trials, seed,
            search_interval=interval, scheme=block.scheme,
        )
        rows.append(
            (
                index,
                block.scheme,
                mc.theta,
                z if z is not None else "",
                mc.nu,
                report.trials,
                report.used_trials,
                report.non_interior,
                report.empirical_variance,
                report.cr_variance,
                report.ratio,
                analytic_fisher(model, mc.theta),
            )
        )
        if report.non_interior > 0.05 * report.trials:
            failures.append(
                f"run[{index}] ({block.scheme}): {report.non_interior}/{report.trials} "
                "estimates on the search-interval boundary"
            )

    table = _emit_table(args, "montecarlo", MC_HEADER, rows, config.raw_text, seed=seed)
    print(f"wrote {table} ({len(rows)} rows)")
    if failures:
        raise StatisticalCheckError("; ".join(failures))
    return EXIT_OK


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

FIGURE_WAVELENGTH = 633e-9
FIGURE_RAYLEIGH = 1.0  # m


def _figure_beam(config: ScenarioConfig | None, xi: float) -> BeamParams:
    if config is not None:
        base = config.beam
        return BeamParams(k=base.k, w0=base.w0, xi=xi)
    return BeamParams.from_rayleigh_range(FIGURE_RAYLEIGH, FIGURE_WAVELENGTH, xi)


def cmd_figure3(args) -> int:
    config = load_config(args.config) if args.config else None
    out = Path(args.out)
    zr = _figure_beam(config, 0.0).rayleigh_range

    # panel (a): information per detected photon vs x at z = 5 z_R
    x = np.linspace(-3e-3, 3e-3, 601)
    z_a = 5.0 * zr
    columns_a = []
    for xi in (0.0, 1e-3):
        beam = _figure_beam(config, xi)
        columns_a.append(fisher_conditioned(beam, z_a, x, 0.0) / beam.k ** 2)
    header_a = ("x_m", "cond_fisher_over_k2_xi_0mm", "cond_fisher_over_k2_xi_1mm")
    rows_a = list(zip(x, *columns_a))
    write_csv(out / "figure3a.csv", header_a, rows_a)

    chart_a = LineChart(
        "Information per detected photon vs position (z = 5 z_R)",
        "x [m]", "conditional Fisher / k^2 [m^2]",
    )
    chart_a.add(x, columns_a[0], label="xi = 0")
    chart_a.add(x, columns_a[1], label="xi = 1 mm")
    chart_a.write(out / "figure3a.svg")

    # panel (b): same quantity vs z at fixed detection points, xi = 1 mm
    beam_b = _figure_beam(config, 1e-3)
    z = np.linspace(0.0, 10.0 * zr, 501)
    columns_b = [
        np.array([fisher_conditioned(beam_b, zz, xx, 0.0) for zz in z]) / beam_b.k ** 2
        for xx in (0.0, 1e-3, 1.5e-3)
    ]
    header_b = ("z_m", "cond_fisher_over_k2_x_0mm", "cond_fisher_over_k2_x_1mm", "cond_fisher_over_k2_x_1p5mm")
    rows_b = list(zip(z, *columns_b))
    write_csv(out / "figure3b.csv", header_b, rows_b)

    chart_b = LineChart(
        "Information per detected photon vs detector plane (xi = 1 mm)",
        "z [m]", "conditional Fisher / k^2 [m^2]",
    )
    chart_b.add(z, columns_b[0], label="x = 0")
    chart_b.add(z, columns_b[1], label="x = 1 mm")
    chart_b.add(z, columns_b[2], label="x = 1.5 mm")
    chart_b.write(out / "figure3b.svg")

    write_sidecar(
        out / "figure3.meta.json",
        command="figure3",
        argv=args.raw_argv,
        version=__version__,
        config_text=config.raw_text if config else None,
        outputs=["figure3a.csv", "figure3a.svg", "figure3b.csv", "figure3b.svg"],
    )
    print(f"wrote {out}/figure3a.csv, figure3a.svg, figure3b.csv, figure3b.svg")
    return EXIT_OK


def cmd_figure4(args) -> int:
    config = load_config(args.config) if args.config else None
    out = Path(args.out)
    zr = _figure_beam(config, 0.0).rayleigh_range
    z_values = (0.0, 5.0 * zr)
    panels = (
        ("figure4a", 0.0, "scaled"),
        ("figure4b", 0.0, "density"),
        ("figure4c", 1e-3, "scaled"),
        ("figure4d", 1e-3, "density"),
    )
    outputs = []
    for name, xi, kind in panels:
        beam = _figure_beam(config, xi)
        w_far = beam.width(z_values[-1])
        x = np.linspace(xi - 5.0 * w_far, xi + 5.0 * w_far, 2001)
        columns = []
        for z in z_values:
            density = intensity_profile(beam, 0.0, z, x)
            if kind == "scaled":
                columns.append(density * fisher_conditioned(beam, z, x, 0.0) / beam.k ** 2)
            else:
                columns.append(density)
        if kind == "scaled":
            header = ("x_m", "p_cond_fisher_over_k2_z_0", "p_cond_fisher_over_k2_z_5zR")
            ylabel = "P(x) x conditional Fisher / k^2 [m]"
            title = f"Scaled information per detection (xi = {xi * 1e3:g} mm)"
        else:
            header = ("x_m", "p_density_z_0", "p_density_z_5zR")
            ylabel = "P(x) [1/m]"
            title = f"Detection probability density (xi = {xi * 1e3:g} mm)"
        write_csv(out / f"{name}.csv", header, list(zip(x, *columns)))
        chart = LineChart(title, "x [m]", ylabel)
        chart.add(x, columns[0], label="z = 0")
        chart.add(x, columns[1], label="z = 5 z_R")
        chart.write(out / f"{name}.svg")
        outputs.extend([f"{name}.csv", f"{name}.svg"])

    write_sidecar(
        out / "figure4.meta.json",
        command="figure4",
        argv=args.raw_argv,
        version=__version__,
        config_text=config.raw_text if config else None,
        outputs=outputs,
    )
    print(f"wrote {out}/figure4[a-d].csv and .svg")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate-config
# ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    config = load_config(args.config)
    beam = config.beam
    print(f"beam: k={beam.k:.6e} rad/m, w0={beam.w0:.6e} m, xi={beam.xi:.6e} m")
    print(f"      z_R={beam.rayleigh_range:.6e} m, wavelength={beam.wavelength:.6e} m")
    pol = config.polarization
    print(
        f"polarization: <sz>={pol.sigma_z_mean:+.3f}, "
        f"d={pol.coherence_magnitude:.3f}, phi={pol.coherence_phase:+.3f} rad"
    )
    for i, block in enumerate(config.runs):
        z_text = f", z points={block.z.size}" if block.z is not None else ""
        print(f"run[{i}]: scheme={block.scheme}, theta points={block.theta.size}{z_text}")
    if config.montecarlo:
        mc = config.montecarlo
        print(
            f"montecarlo: theta={mc.theta:.3e} rad, nu={mc.nu}, "
            f"trials={mc.trials}, seed={mc.seed}"
        )
    print("config ok")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tiltsense",
        description="Fisher-information analysis of optical tilt-sensing schemes",
    )
    parser.add_argument("--version", action="version", version=f"tiltsense {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument(
            "--config", required=config_required, default=None, help="scenario YAML file"
        )
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override the RNG seed")
        p.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p_fisher = sub.add_parser("fisher", help="Fisher table for one run block")
    common(p_fisher)
    p_fisher.add_argument("--run", type=int, default=0, help="run block index")
    p_fisher.set_defaults(func=cmd_fisher)

    p_sweep = sub.add_parser("sweep", help="Fisher table for every run block")
    common(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_f3 = sub.add_parser("figure3", help="information-per-photon curves (CSV + SVG)")
    common(p_f3, config_required=False)
    p_f3.set_defaults(func=cmd_figure3)

    p_f4 = sub.add_parser("figure4", help="probability-scaled information curves (CSV + SVG)")
    common(p_f4, config_required=False)
    p_f4.set_defaults(func=cmd_figure4)

    p_mc = sub.add_parser("montecarlo", help="Cramer-Rao saturation runs")
    common(p_mc)
    p_mc.set_defaults(func=cmd_montecarlo)

    p_val = sub.add_parser("validate-config", help="parse and validate a config file")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.raw_argv = list(sys.argv[1:] if argv is None else argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OracleError, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except StatisticalCheckError as exc:
        print(f"statistical check failed: {exc}", file=sys.stderr)
        return EXIT_STATS


if __name__ == "__main__":
    sys.exit(main())
