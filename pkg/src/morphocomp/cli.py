"""Command-line front end.

Commands:
  measure       intrinsic measures of a recorded t,s,a series
  binary-sweep  exact measure surfaces of the parameterised binary loop
  rotator run   one pendulum episode (transients + symbol series)
  rotator sweep averaged measures over a noise/deadband grid

Every invocation that writes files also writes a manifest.json capturing the
resolved configuration, seed and tool version, sufficient to regenerate the
outputs bit-identically.  Exit codes: 0 success, 2 usage or parse error,
3 numerical or consistency error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

from . import __version__, binary, rotator
from .estimation import Binner, DataError, estimate, read_symbol_series
from .measures import (
    INTRINSIC_MEASURES,
    ConsistencyError,
    MeasureReport,
    intrinsic_measures,
)
from .prob import (
    DegenerateAlphabetError,
    DimensionError,
    InvalidDistributionError,
    SupportError,
)
from .rotator import NumericalError, RotatorConfig

BINARY_SWEEP_COLUMNS = ("phi", "psi", "mu", "mc_a", "mc_w", "asoc_a", "asoc_w", "c_a", "c_w")
ROTATOR_SWEEP_COLUMNS = ("eta", "beta", "asoc_a", "c_a", "asoc_w", "c_w", "runs")

# documented parameter ranges; exceeding them warns but still runs
ETA_RANGE = (0.0, 0.5)
BETA_RANGE = (0.0, 2.0)


class UsageError(ValueError):
    """Bad flag combination detected after argparse."""


@dataclasses.dataclass(frozen=True)
class RunManifest:
    """Everything needed to regenerate a command's outputs bit-identically."""

    command: str
    config: dict
    tool_version: str
    master_seed: int | None
    outputs: list[str]

    def write(self, out_dir: Path) -> None:
        with (out_dir / "manifest.json").open("w") as handle:
            json.dump(dataclasses.asdict(self), handle, indent=2, sort_keys=True)
            handle.write("\n")


def _parse_binner(text: str) -> Binner:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"binner spec {text!r} must be LOW:HIGH:BINS")
    try:
        return Binner(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise UsageError(f"bad binner spec {text!r}: {exc}") from None


def _write_manifest(out_dir: Path, command: str, config: dict, seed, outputs: list[str]) -> None:
    RunManifest(command, config, __version__, seed, outputs).write(out_dir)


def _write_csv(path: Path, columns, rows) -> None:
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(columns)
        writer.writerows(rows)


def _report_rows(reports: list[MeasureReport], columns) -> list[list]:
    rows = []
    for report in reports:
        merged = {**report.metadata, **report.values}
        rows.append([merged[c] for c in columns])
    return rows


def _ensure_out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_measure(args) -> int:
    sensor_binner = _parse_binner(args.sensor_bins) if args.sensor_bins else None
    action_binner = _parse_binner(args.action_bins) if args.action_bins else None
    series, s_alph, a_alph = read_symbol_series(
        args.input,
        sensor_binner=sensor_binner,
        action_binner=action_binner,
        sensor_size=args.sensor_size,
        action_size=args.action_size,
    )
    names = tuple(args.measures.split(",")) if args.measures else INTRINSIC_MEASURES
    for name in names:
        if name not in INTRINSIC_MEASURES:
            raise UsageError(
                f"unknown measure {name!r}; choose from {', '.join(INTRINSIC_MEASURES)}"
            )
    model = estimate(series, s_alph, a_alph)
    report = MeasureReport(
        intrinsic_measures(model, names),
        metadata={
            "input": str(args.input),
            "transitions": len(series),
            "sensor_alphabet": s_alph.size,
            "action_alphabet": a_alph.size,
        },
    )
    document = {"values": report.values, "metadata": report.metadata}
    if args.format == "json":
        print(json.dumps(document, indent=2, sort_keys=True))
    else:
        for name in names:
            print(f"{name:<8s} {report[name]:.6f}")
    if args.out:
        out = _ensure_out(args)
        report_path = out / "report.json"
        with report_path.open("w") as handle:
            json.dump(document, handle, indent=2, sort_keys=True)
            handle.write("\n")
        _write_manifest(
            out,
            "measure",
            {
                "input": str(args.input),
                "sensor_bins": args.sensor_bins,
                "action_bins": args.action_bins,
                "sensor_size": args.sensor_size,
                "action_size": args.action_size,
                "measures": list(names),
            },
            None,
            [report_path.name],
        )
    return 0


def cmd_binary_sweep(args) -> int:
    phi = args.phi if args.phi is not None else list(binary.DEFAULT_GRID)
    psi = args.psi if args.psi is not None else list(binary.DEFAULT_GRID)
    mu = args.mu if args.mu is not None else list(binary.DEFAULT_MU_VALUES)
    reports = binary.sweep(phi, psi, mu, zeta=args.zeta, tau=args.tau)
    rows = _report_rows(reports, BINARY_SWEEP_COLUMNS)
    out = _ensure_out(args)
    if args.format == "json":
        table_path = out / "binary_sweep.json"
        with table_path.open("w") as handle:
            json.dump(
                [dict(zip(BINARY_SWEEP_COLUMNS, row)) for row in rows],
                handle,
                indent=2,
            )
            handle.write("\n")
    else:
        table_path = out / "binary_sweep.csv"
        _write_csv(table_path, BINARY_SWEEP_COLUMNS, rows)
    _write_manifest(
        out,
        "binary-sweep",
        {
            "phi": [float(v) for v in phi],
            "psi": [float(v) for v in psi],
            "mu": [float(v) for v in mu],
            "zeta": args.zeta,
            "tau": args.tau,
            "format": args.format,
        },
        None,
        [table_path.name],
    )
    print(f"{len(rows)} grid points -> {table_path}")
    return 0


def _warn_soft_range(name: str, value: float, low: float, high: float) -> None:
    if not low <= value <= high:
        print(
            f"warning: {name} = {value:g} is outside the documented range "
            f"[{low:g}, {high:g}]; running anyway",
            file=sys.stderr,
        )


def _rotator_config(args, scalar_cell: bool) -> RotatorConfig:
    """Config-file values first (if given), explicit flags override."""
    cfg = rotator.load_config(args.config) if args.config else RotatorConfig()
    overrides = {}
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.seed is not None:
        overrides["seed"] = args.seed
    if scalar_cell:
        if args.eta is not None:
            overrides["eta"] = args.eta
        if args.beta is not None:
            overrides["beta"] = args.beta
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def cmd_rotator_run(args) -> int:
    cfg = _rotator_config(args, scalar_cell=True)
    _warn_soft_range("eta", cfg.eta, *ETA_RANGE)
    _warn_soft_range("beta", cfg.beta, *BETA_RANGE)
    episode = rotator.run_episode(cfg)
    out = _ensure_out(args)

    transients_path = out / "transients.csv"
    _write_csv(
        transients_path,
        ("t", "s", "g_clamped", "f"),
        zip(
            episode.times,
            episode.sensor_values[:-1],
            episode.g_clamped,
            episode.forces,
        ),
    )
    series_path = out / "series.csv"
    normalized = episode.forces / cfg.f_max
    with series_path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(("t", "s", "a"))
        for t, s, a in zip(episode.times, episode.velocities[:-1], normalized):
            writer.writerow((t, s, a))
        # final observation has no action yet
        writer.writerow((cfg.steps * cfg.control_dt, episode.velocities[-1], ""))

    values = rotator.episode_measures(episode.series)
    for name, value in values.items():
        print(f"{name:<8s} {value:.6f}")
    _write_manifest(
        out,
        "rotator-run",
        {**dataclasses.asdict(cfg), "config_file": args.config},
        cfg.seed,
        [transients_path.name, series_path.name],
    )
    return 0


def cmd_rotator_sweep(args) -> int:
    eta_values = args.eta if args.eta is not None else [round(0.025 * i, 3) for i in range(21)]
    beta_values = args.beta if args.beta is not None else [round(0.01 * i, 2) for i in range(201)]
    for eta in eta_values:
        _warn_soft_range("eta", eta, *ETA_RANGE)
    for beta in beta_values:
        _warn_soft_range("beta", beta, *BETA_RANGE)
    cfg = _rotator_config(args, scalar_cell=False)
    reports = rotator.sweep(eta_values, beta_values, args.runs, cfg)
    rows = _report_rows(reports, ROTATOR_SWEEP_COLUMNS)
    out = _ensure_out(args)
    if args.format == "json":
        table_path = out / "rotator_sweep.json"
        with table_path.open("w") as handle:
            json.dump(
                [dict(zip(ROTATOR_SWEEP_COLUMNS, row)) for row in rows],
                handle,
                indent=2,
            )
            handle.write("\n")
    else:
        table_path = out / "rotator_sweep.csv"
        _write_csv(table_path, ROTATOR_SWEEP_COLUMNS, rows)
    _write_manifest(
        out,
        "rotator-sweep",
        {
            **dataclasses.asdict(cfg),
            "eta_grid": [float(v) for v in eta_values],
            "beta_grid": [float(v) for v in beta_values],
            "runs": args.runs,
            "config_file": args.config,
            "format": args.format,
        },
        cfg.seed,
        [table_path.name],
    )
    print(f"{len(rows)} cells x {args.runs} runs -> {table_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="morphocomp",
        description="Morphological-computation measures for discrete sensorimotor data",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_measure = sub.add_parser("measure", help="measures of a recorded t,s,a CSV")
    p_measure.add_argument("--input", required=True, help="CSV with header t,s,a")
    p_measure.add_argument("--sensor-bins", metavar="LOW:HIGH:BINS", help="bin real sensor values")
    p_measure.add_argument(
        "--action-bins",
        metavar="LOW:HIGH:BINS",
        help="bin real action values (use --action-bins=-1:1:30 for negative bounds)",
    )
    p_measure.add_argument("--sensor-size", type=int, help="alphabet size for integer sensor symbols")
    p_measure.add_argument("--action-size", type=int, help="alphabet size for integer action symbols")
    p_measure.add_argument("--measures", help=f"comma list from {','.join(INTRINSIC_MEASURES)}")
    p_measure.add_argument("--out", help="directory for report.json + manifest")
    p_measure.add_argument("--format", choices=("table", "json"), default="table")
    p_measure.set_defaults(func=cmd_measure)

    p_binary = sub.add_parser("binary-sweep", help="exact binary-loop measure surfaces")
    p_binary.add_argument("--phi", type=float, nargs="+", help="world self-coupling grid")
    p_binary.add_argument("--psi", type=float, nargs="+", help="action coupling grid")
    p_binary.add_argument("--mu", type=float, nargs="+", help="policy sharpness grid")
    p_binary.add_argument("--zeta", type=float, default=binary.STRICT, help="sensor sharpness")
    p_binary.add_argument("--tau", type=float, default=0.0, help="world prior bias")
    p_binary.add_argument("--out", required=True, help="output directory")
    p_binary.add_argument("--format", choices=("csv", "json"), default="csv")
    p_binary.set_defaults(func=cmd_binary_sweep)

    p_rot = sub.add_parser("rotator", help="pendulum experiment")
    rot_sub = p_rot.add_subparsers(dest="rotator_command", required=True)

    p_run = rot_sub.add_parser("run", help="single episode")
    p_run.add_argument("--config", help="key = value config file; flags override")
    p_run.add_argument("--eta", type=float, help="sensor noise fraction")
    p_run.add_argument("--beta", type=float, help="controller deadband")
    p_run.add_argument("--steps", type=int, help="control updates (default 5000)")
    p_run.add_argument("--seed", type=int, help="master seed (default 0)")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(func=cmd_rotator_run)

    p_sweep = rot_sub.add_parser("sweep", help="grid of averaged measures")
    p_sweep.add_argument("--config", help="key = value config file; flags override")
    p_sweep.add_argument("--eta", type=float, nargs="+", help="noise grid")
    p_sweep.add_argument("--beta", type=float, nargs="+", help="deadband grid")
    p_sweep.add_argument("--runs", type=int, default=10, help="episodes per cell")
    p_sweep.add_argument("--steps", type=int, help="control updates (default 5000)")
    p_sweep.add_argument("--seed", type=int, help="master seed (default 0)")
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.set_defaults(func=cmd_rotator_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, UsageError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        ConsistencyError,
        NumericalError,
        SupportError,
        DimensionError,
        InvalidDistributionError,
        DegenerateAlphabetError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
