"""Deterministic CSV and JSON emission for spectra, traces and studies.

CSV files are UTF-8, comma-separated, with a `.` decimal point and
scientific notation carrying 17 significant digits (enough to round-trip
a double exactly).  Nothing time- or host-dependent is written, so
identical inputs produce bit-identical files.
"""

from __future__ import annotations

import json

import numpy as np

__all__ = [
    "format_value",
    "write_spectrum_csv",
    "write_trace_csv",
    "write_scaling_csv",
    "write_json",
    "write_sidecar",
]


def format_value(x: float) -> str:
    return f"{x:.16e}"


def _write_rows(path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_spectrum_csv(spectrum, path) -> None:
    """Rows of detuning plus tracked eigenvalue curves E_0..E_N."""
    header = ["delta_rad_per_ms"] + [f"E_{k}" for k in range(spectrum.n_curves)]
    tracked = spectrum.tracked
    rows = (
        [spectrum.delta_grid[i]] + list(tracked[i]) for i in range(spectrum.delta_grid.size)
    )
    _write_rows(path, header, rows)


def write_trace_csv(trace, path) -> None:
    """Rows of time, per-pair-index populations, fidelity and norm error."""
    n_levels = trace.populations.shape[1]
    header = (
        ["t_ms"] + [f"pop_{k}" for k in range(n_levels)] + ["fidelity", "norm_error"]
    )
    rows = (
        [trace.times[i], *trace.populations[i], trace.fidelity[i], trace.norm_error[i]]
        for i in range(trace.times.size)
    )
    _write_rows(path, header, rows)


def write_scaling_csv(study, path) -> None:
    header = ["n_ions", "delta_opt_rad_per_ms", "best_fidelity", "time_of_peak_ms"]
    rows = (
        [float(r.n_ions), r.delta_opt, r.best_fidelity, r.time_of_peak]
        for r in study.results
    )
    _write_rows(path, header, rows)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def write_json(payload: dict, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_sidecar(path, tool_version: str, config: dict) -> None:
    """Metadata sidecar: tool version plus the fully resolved run config."""
    write_json({"tool": "dickeladder", "version": tool_version, "config": config}, path)
