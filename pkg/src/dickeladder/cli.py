"""Command-line front end.

Subcommands map one-to-one to the library studies:

* ``spectrum``  eigenvalue curves along a detuning grid (CSV)
* ``evolve``    square or swept-pulse time evolution (CSV)
* ``optimize``  square-pulse detuning optimization (JSON + scan CSV)
* ``scaling``   per-ion-number optimization plus power-law fits (CSV + JSON)
* ``validate``  oracle cross-check report (JSON, exit 4 on failure)

Frequencies are entered as ordinary frequencies in kHz and converted to
angular rad/ms internally (a 1 kHz entry means 2*pi rad/ms); times are in
ms.  Each run may load a JSON config file, with command-line flags taking
precedence; the fully resolved config lands in a sidecar ``.meta.json``
next to the data so identical invocations rewrite identical bytes.

Exit codes: 0 success, 2 config error, 3 numerical failure,
4 validation failure.  Messages go to stderr, data only to files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import PropagationError, PulseSchedule, initial_state, propagate
from .ladder import EffectiveParams, EigensolverError, spectrum_scan
from .optimize import optimize_detuning, scaling_study
from .oracle import validation_report
from .output import write_json, write_scaling_csv, write_sidecar, write_spectrum_csv, write_trace_csv

KHZ = 2.0 * math.pi  # rad/ms per kHz

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


class ConfigError(Exception):
    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"config error: key={key} reason={reason}")


# field name -> (type, default); None default means optional
SCHEMAS: dict[str, dict] = {
    "spectrum": {
        "ions": (int, 16),
        "chi_khz": (float, 3.0),
        "delta_min_khz": (float, -28.0),
        "delta_max_khz": (float, 28.0),
        "points": (int, 561),
    },
    "evolve": {
        "kind": (str, "square"),
        "ions": (int, 16),
        "duration_ms": (float, 2.0),
        "chi_khz": (float, 3.0),
        "delta_khz": (float, 0.0),
        "optimize_delta": (bool, False),
        "delta_start_khz": (float, -28.0),
        "delta_end_khz": (float, 28.0),
        "chi_peak_khz": (float, 3.0),
        "envelope_width_ms": (float, 1.3),
        "steps": (int, 1024),
    },
    "optimize": {
        "ions": (int, 16),
        "chi_khz": (float, 3.0),
        "horizon_ms": (float, None),
    },
    "scaling": {
        "ion_counts": (list, None),
        "max_ions": (int, 64),
        "full": (bool, False),
        "chi_khz": (float, 3.0),
    },
    "validate": {
        "max_ions": (int, 8),
    },
}

PRESETS: dict[str, tuple[str, dict]] = {
    "fig2a": ("spectrum", {"ions": 16, "chi_khz": 3.0, "delta_min_khz": -28.0,
                           "delta_max_khz": 28.0, "points": 561}),
    "fig2b": ("evolve", {"kind": "rap", "ions": 16, "duration_ms": 2.0,
                         "delta_start_khz": -28.0, "delta_end_khz": 28.0,
                         "chi_peak_khz": 3.0, "envelope_width_ms": 1.3}),
    "fig3a": ("evolve", {"kind": "square", "ions": 2, "chi_khz": 3.0,
                         "delta_khz": 0.0, "duration_ms": 2.0}),
    "fig3b": ("evolve", {"kind": "square", "ions": 6, "chi_khz": 3.0,
                         "delta_khz": 0.0, "duration_ms": 2.0}),
    "fig3c": ("evolve", {"kind": "square", "ions": 20, "chi_khz": 3.0,
                         "delta_khz": 0.0, "duration_ms": 2.0}),
    "fig3d": ("evolve", {"kind": "square", "ions": 2, "chi_khz": 3.0,
                         "optimize_delta": True, "duration_ms": 2.0}),
    "fig3e": ("evolve", {"kind": "square", "ions": 6, "chi_khz": 3.0,
                         "optimize_delta": True, "duration_ms": 2.0}),
    "fig3f": ("evolve", {"kind": "square", "ions": 20, "chi_khz": 3.0,
                         "optimize_delta": True, "duration_ms": 2.0}),
    "fig4": ("scaling", {"max_ions": 64, "chi_khz": 3.0}),
}


def resolve_config(command: str, file_values: dict, flag_values: dict) -> dict:
    """Merge defaults, config-file values and flags; validate against the schema."""
    schema = SCHEMAS[command]
    config = {key: default for key, (_, default) in schema.items()}
    for source in (file_values, flag_values):
        for key, value in source.items():
            if key not in schema:
                raise ConfigError(key, f"unknown key for command {command!r}")
            if value is None:
                continue
            expected, _ = schema[key]
            try:
                if expected is bool and not isinstance(value, bool):
                    raise ConfigError(key, f"expected boolean, got {value!r}")
                if expected is list:
                    value = [int(v) for v in value]
                else:
                    value = expected(value)
            except (TypeError, ValueError) as exc:
                if isinstance(exc, ConfigError):
                    raise
                raise ConfigError(key, f"expected {expected.__name__}, got {value!r}") from None
            config[key] = value
    _validate_values(command, config)
    return config


def _validate_values(command: str, config: dict) -> None:
    def require(cond: bool, key: str, reason: str) -> None:
        if not cond:
            raise ConfigError(key, reason)

    if "ions" in config:
        require(config["ions"] >= 2 and config["ions"] % 2 == 0, "ions",
                f"must be an even integer >= 2, got {config['ions']}")
    if "chi_khz" in config and config["chi_khz"] is not None:
        require(config["chi_khz"] > 0, "chi_khz", "must be positive")
    if command == "spectrum":
        require(config["points"] >= 2, "points", "need at least two grid points")
        require(config["delta_min_khz"] < config["delta_max_khz"], "delta_min_khz",
                "must be below delta_max_khz")
    if command == "evolve":
        require(config["kind"] in ("square", "rap"), "kind", "must be 'square' or 'rap'")
        require(config["duration_ms"] > 0, "duration_ms", "must be positive")
        require(config["steps"] >= 1, "steps", "must be >= 1")
        if config["kind"] == "rap":
            require(config["envelope_width_ms"] > 0, "envelope_width_ms", "must be positive")
            require(not config["optimize_delta"], "optimize_delta",
                    "only square pulses support detuning optimization")
    if command == "optimize" and config.get("horizon_ms") is not None:
        require(config["horizon_ms"] > 0, "horizon_ms", "must be positive")
    if command == "scaling":
        require(config["max_ions"] >= 2, "max_ions", "must be >= 2")
        if config["ion_counts"] is not None:
            require(len(config["ion_counts"]) > 0, "ion_counts", "must be non-empty")
            require(all(c >= 2 and c % 2 == 0 for c in config["ion_counts"]),
                    "ion_counts", "entries must be even integers >= 2")
    if command == "validate":
        require(config["max_ions"] >= 2 and config["max_ions"] % 2 == 0, "max_ions",
                "must be an even integer >= 2")


def _scaling_counts(config: dict) -> list[int]:
    if config["ion_counts"] is not None:
        return list(config["ion_counts"])
    limit = max(config["max_ions"], 128) if config["full"] else config["max_ions"]
    counts = []
    n = 2
    while n <= limit:
        counts.append(n)
        n *= 2
    if config["full"]:
        counts.append(300)
    return counts


# --------------------------------------------------------------------------
# command implementations
# --------------------------------------------------------------------------


def _run_spectrum(config: dict, out_dir: Path) -> int:
    params = EffectiveParams.from_chi(config["ions"] // 2, config["chi_khz"] * KHZ)
    grid = np.linspace(config["delta_min_khz"] * KHZ, config["delta_max_khz"] * KHZ,
                       config["points"])
    spectrum = spectrum_scan(params, grid)
    write_spectrum_csv(spectrum, out_dir / "spectrum.csv")
    write_sidecar(out_dir / "spectrum.meta.json", __version__, config)
    print(f"wrote {out_dir / 'spectrum.csv'}", file=sys.stderr)
    return EXIT_OK


def _run_evolve(config: dict, out_dir: Path) -> int:
    n_pairs = config["ions"] // 2
    chi = config["chi_khz"] * KHZ
    if config["kind"] == "square":
        delta = config["delta_khz"] * KHZ
        if config["optimize_delta"]:
            delta = optimize_detuning(n_pairs, chi).delta_opt
        schedule = PulseSchedule.square(config["duration_ms"], delta=delta, chi=chi)
    else:
        schedule = PulseSchedule.rap(
            config["duration_ms"],
            delta_start=config["delta_start_khz"] * KHZ,
            delta_end=config["delta_end_khz"] * KHZ,
            chi_peak=config["chi_peak_khz"] * KHZ,
            envelope_width=config["envelope_width_ms"],
        )
    params = EffectiveParams.from_chi(n_pairs, chi)
    trace = propagate(initial_state(n_pairs), schedule, params, steps=config["steps"])
    write_trace_csv(trace, out_dir / "trace.csv")
    write_sidecar(out_dir / "trace.meta.json", __version__, config)
    print(f"wrote {out_dir / 'trace.csv'} (final fidelity {trace.fidelity[-1]:.6f})",
          file=sys.stderr)
    return EXIT_OK


def _run_optimize(config: dict, out_dir: Path) -> int:
    horizon = None if config["horizon_ms"] is None else config["horizon_ms"]
    result = optimize_detuning(config["ions"] // 2, config["chi_khz"] * KHZ, horizon=horizon)
    payload = {
        "n_ions": result.n_ions,
        "delta_opt_rad_per_ms": result.delta_opt,
        "delta_opt_khz": result.delta_opt / KHZ,
        "best_fidelity": result.best_fidelity,
        "time_of_peak_ms": result.time_of_peak,
        "horizon_ms": result.horizon,
        "flags": list(result.flags),
    }
    write_json(payload, out_dir / "optimize.json")
    header = "delta_rad_per_ms,peak_fidelity\n"
    with open(out_dir / "optimize_scan.csv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header)
        for delta, fid in result.scan_trace:
            fh.write(f"{delta:.16e},{fid:.16e}\n")
    write_sidecar(out_dir / "optimize.meta.json", __version__, config)
    print(f"wrote {out_dir / 'optimize.json'}", file=sys.stderr)
    return EXIT_OK


def _run_scaling(config: dict, out_dir: Path) -> int:
    counts = _scaling_counts(config)
    study = scaling_study(counts, config["chi_khz"] * KHZ)
    write_scaling_csv(study, out_dir / "scaling.csv")
    fits = {
        "fidelity_fit": {
            "coefficient": study.fidelity_fit.coefficient,
            "exponent": study.fidelity_fit.exponent,
            "rms_log_residual": study.fidelity_fit.rms_log_residual,
            "n_points": study.fidelity_fit.n_points,
        },
        "delta_opt_fit": {
            "coefficient": study.delta_opt_fit.coefficient,
            "exponent": study.delta_opt_fit.exponent,
            "rms_log_residual": study.delta_opt_fit.rms_log_residual,
            "n_points": study.delta_opt_fit.n_points,
        },
        "complete": study.complete,
        "failures": study.failures,
    }
    write_json(fits, out_dir / "scaling_fit.json")
    write_sidecar(out_dir / "scaling.meta.json", __version__, config)
    print(f"wrote {out_dir / 'scaling.csv'}", file=sys.stderr)
    return EXIT_OK


def _run_validate(config: dict, out_dir: Path) -> int:
    report = validation_report(max_ions=config["max_ions"])
    write_json(report, out_dir / "validation.json")
    write_sidecar(out_dir / "validation.meta.json", __version__, config)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    if failed:
        print(f"validation failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_VALIDATION
    print(f"wrote {out_dir / 'validation.json'} (all checks passed)", file=sys.stderr)
    return EXIT_OK


RUNNERS = {
    "spectrum": _run_spectrum,
    "evolve": _run_evolve,
    "optimize": _run_optimize,
    "scaling": _run_scaling,
    "validate": _run_validate,
}


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dickeladder",
        description="Dicke-ladder spin-squeezing model: spectra, dynamics, optimization",
    )
    parser.add_argument("--version", action="version", version=f"dickeladder {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, help="JSON config file; flags override it")
        p.add_argument("--preset", choices=sorted(PRESETS), help="named parameter preset")
        p.add_argument("--out-dir", type=Path, default=Path("."), help="output directory")

    p = sub.add_parser("spectrum", help="eigenvalue curves along a detuning grid")
    add_common(p)
    p.add_argument("--ions", type=int)
    p.add_argument("--chi-khz", type=float)
    p.add_argument("--delta-min-khz", type=float)
    p.add_argument("--delta-max-khz", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("evolve", help="time evolution under a pulse schedule")
    add_common(p)
    p.add_argument("--kind", choices=["square", "rap"])
    p.add_argument("--ions", type=int)
    p.add_argument("--duration-ms", type=float)
    p.add_argument("--chi-khz", type=float)
    p.add_argument("--delta-khz", type=float)
    p.add_argument("--optimize-delta", action="store_true", default=None)
    p.add_argument("--delta-start-khz", type=float)
    p.add_argument("--delta-end-khz", type=float)
    p.add_argument("--chi-peak-khz", type=float)
    p.add_argument("--envelope-width-ms", type=float)
    p.add_argument("--steps", type=int)

    p = sub.add_parser("optimize", help="square-pulse detuning optimization")
    add_common(p)
    p.add_argument("--ions", type=int)
    p.add_argument("--chi-khz", type=float)
    p.add_argument("--horizon-ms", type=float)

    p = sub.add_parser("scaling", help="fidelity scaling study over ion numbers")
    add_common(p)
    p.add_argument("--ion-counts", type=str,
                   help="comma-separated even ion counts, overrides --max-ions")
    p.add_argument("--max-ions", type=int)
    p.add_argument("--full", action="store_true", default=None,
                   help="extend the count ladder to 128 and include 300 ions")
    p.add_argument("--chi-khz", type=float)

    p = sub.add_parser("validate", help="oracle cross-check report")
    add_common(p)
    p.add_argument("--max-ions", type=int)

    return parser


def _flag_values(command: str, args: argparse.Namespace) -> dict:
    values = {}
    for key in SCHEMAS[command]:
        attr = key if hasattr(args, key) else None
        if attr is None:
            continue
        value = getattr(args, key)
        if value is None:
            continue
        if key == "ion_counts" and isinstance(value, str):
            try:
                value = [int(v) for v in value.split(",") if v.strip()]
            except ValueError:
                raise ConfigError("ion_counts", f"could not parse {value!r}") from None
        values[key] = value
    return values


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    command = args.command

    try:
        file_values = {}
        if args.preset:
            preset_command, preset_values = PRESETS[args.preset]
            if preset_command != command:
                raise ConfigError("preset", f"{args.preset!r} belongs to command {preset_command!r}")
            file_values.update(preset_values)
        if args.config:
            try:
                loaded = json.loads(Path(args.config).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError("config", str(exc)) from None
            if not isinstance(loaded, dict):
                raise ConfigError("config", "top-level JSON value must be an object")
            file_values.update(loaded)
        config = resolve_config(command, file_values, _flag_values(command, args))
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_CONFIG

    out_dir = args.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        return RUNNERS[command](config, out_dir)
    except (PropagationError, EigensolverError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"config error: key=- reason={exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
