"""Command-line sweep runner: config handling, CSV/JSON output, presets.

Exit codes: 0 success, 1 simulation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys

from .decoder import (
    BenchmarkRecord,
    GATE_FAMILIES,
    GATE_PARAMS,
    P_INIT_PRESETS,
    SweepSpec,
    run_benchmark,
)

SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "schema_version",
    "gate",
    "scenario",
    "param1_name",
    "param1",
    "param2_name",
    "param2",
    "p_init",
    "infidelity",
    "p_code",
    "p_code_stderr",
    "backend",
    "n_samples",
    "seed",
]

# one preset per published sweep; fig11 runs both L-DiV variants side by side
PRESETS = {
    "fig5": {"gate": "v1", "scenario": "I", "backend": "exact"},
    "fig6": {"gate": "v2", "scenario": "I", "backend": "exact"},
    "fig7": {"gate": "ldiv", "scenario": "I", "backend": "exact"},
    "fig8": {"gate": "v1", "scenario": "II", "backend": "trajectory"},
    "fig9": {"gate": "v2", "scenario": "II", "backend": "trajectory"},
    "fig10": {"gate": "ldiv", "scenario": "II", "backend": "trajectory"},
    "fig11": {"gate": "ldiv,ldiv_no_k2", "scenario": "I", "backend": "exact"},
}

THREADS_ENV = "S17BENCH_THREADS"

DEFAULT_TRAJECTORY_SAMPLES = 200_000


class ConfigError(Exception):
    """A configuration problem; reported with a field/line diagnostic."""


def _fmt(x: float) -> str:
    return "%.17g" % x


def read_config_file(path: str) -> dict[str, str]:
    """Parse a flat ``key=value`` file with ``#`` comments."""
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not key:
            raise ConfigError(f"{path}:{lineno}: empty key")
        values[key] = value.strip()
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="s17bench",
        description="Sweep approximate-CNOT parameter grids through the "
        "17-qubit surface code benchmark and record p_code vs gate infidelity.",
    )
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--preset", choices=sorted(PRESETS), help="named sweep preset")
    p.add_argument("--gate", help="gate family, or comma list (v1,v2,ldiv,ldiv_no_k2,ideal)")
    p.add_argument("--scenario", choices=["I", "II"])
    p.add_argument("--p-init", dest="p_init", help="comma list of p_init values")
    p.add_argument("--grid", help="parameter grid resolution, e.g. 16x16")
    p.add_argument("--backend", help="exact (alias exact_dm) or trajectory")
    p.add_argument("--n-samples", dest="n_samples", help="trajectories per run")
    p.add_argument("--seed", help="64-bit master seed")
    p.add_argument("--serialization", choices=["serialized", "concurrent"])
    p.add_argument("--param1-bounds", dest="param1_bounds", help="lo,hi override")
    p.add_argument("--param2-bounds", dest="param2_bounds", help="lo,hi override")
    p.add_argument(
        "--force-bounds",
        action="store_true",
        help="allow parameter bounds outside the documented sweep domains",
    )
    p.add_argument("--threads", help=f"worker threads (default ${THREADS_ENV} or 1)")
    p.add_argument("--output", "-o", help="CSV output path (default stdout)")
    p.add_argument("--json", dest="json_path", help="also write records as JSON")
    return p


def _merged_settings(args: argparse.Namespace) -> dict[str, str]:
    settings: dict[str, str] = {}
    if args.preset:
        settings.update(PRESETS[args.preset])
    if args.config:
        file_values = read_config_file(args.config)
        if "preset" in file_values:
            name = file_values.pop("preset")
            if name not in PRESETS:
                raise ConfigError(f"unknown preset {name!r} in config file")
            settings.update(PRESETS[name])
        settings.update(file_values)
    for key in (
        "gate",
        "scenario",
        "p_init",
        "grid",
        "backend",
        "n_samples",
        "seed",
        "serialization",
        "param1_bounds",
        "param2_bounds",
        "threads",
        "output",
    ):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if args.json_path is not None:
        settings["json"] = args.json_path
    if args.force_bounds:
        settings["force_bounds"] = "true"
    return settings


def _parse_floats(text: str, field: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError as exc:
        raise ConfigError(f"field {field}: expected comma-separated numbers, got {text!r}") from exc


def _parse_bounds(text: str, field: str) -> tuple[float, float]:
    values = _parse_floats(text, field)
    if len(values) != 2 or not values[0] < values[1]:
        raise ConfigError(f"field {field}: expected lo,hi with lo < hi, got {text!r}")
    return values[0], values[1]


def _check_bounds(gate: str, which: int, bounds: tuple[float, float], force: bool) -> None:
    name, lo, hi = GATE_PARAMS[gate][which - 1]
    if (bounds[0] < lo or bounds[1] > hi) and not force:
        raise ConfigError(
            f"field param{which}_bounds: {bounds} exceeds the documented "
            f"{name} domain ({lo}, {hi}) for gate {gate}; pass --force-bounds to override"
        )


def build_sweeps(settings: dict[str, str]) -> list[SweepSpec]:
    """Translate merged settings into one SweepSpec per requested gate."""
    if "gate" not in settings:
        raise ConfigError("field gate: required (or use --preset)")
    gates = [g.strip() for g in settings["gate"].split(",") if g.strip()]
    for gate in gates:
        if gate not in GATE_FAMILIES:
            raise ConfigError(f"field gate: unknown family {gate!r} (choices: {', '.join(GATE_FAMILIES)})")
    scenario = settings.get("scenario", "I")
    if scenario not in ("I", "II"):
        raise ConfigError(f"field scenario: must be I or II, got {scenario!r}")

    backend = settings.get("backend", "exact")
    backend = {"exact": "exact_dm"}.get(backend, backend)
    if backend not in ("exact_dm", "trajectory"):
        raise ConfigError(f"field backend: must be exact or trajectory, got {settings.get('backend')!r}")

    grid_text = settings.get("grid", "16x16")
    try:
        n1, _, n2 = grid_text.lower().partition("x")
        grid_shape = (int(n1), int(n2))
        if grid_shape[0] < 1 or grid_shape[1] < 1:
            raise ValueError
    except ValueError as exc:
        raise ConfigError(f"field grid: expected NxM, got {grid_text!r}") from exc

    p_inits = _parse_floats(settings["p_init"], "p_init") if "p_init" in settings else ()
    for p in p_inits:
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"field p_init: value {p} outside [0, 1]")

    try:
        seed = int(settings.get("seed", "0"))
    except ValueError as exc:
        raise ConfigError(f"field seed: expected an integer, got {settings['seed']!r}") from exc

    if "n_samples" in settings:
        try:
            n_samples = int(settings["n_samples"])
        except ValueError as exc:
            raise ConfigError(
                f"field n_samples: expected an integer, got {settings['n_samples']!r}"
            ) from exc
    else:
        n_samples = DEFAULT_TRAJECTORY_SAMPLES if backend == "trajectory" else 0

    threads_text = settings.get("threads", os.environ.get(THREADS_ENV, "1"))
    try:
        threads = int(threads_text)
        if threads < 1:
            raise ValueError
    except ValueError as exc:
        raise ConfigError(f"field threads: expected a positive integer, got {threads_text!r}") from exc

    force = settings.get("force_bounds", "").lower() in ("true", "1", "yes")
    sweeps = []
    for gate in gates:
        kwargs = {}
        for which in (1, 2):
            key = f"param{which}_bounds"
            if key in settings:
                bounds = _parse_bounds(settings[key], key)
                _check_bounds(gate, which, bounds, force)
                kwargs[key] = bounds
        sweeps.append(
            SweepSpec(
                gate=gate,
                scenario=scenario,
                grid_shape=grid_shape,
                p_init_values=p_inits,
                backend=backend,
                n_samples=n_samples,
                seed=seed,
                serialization=settings.get("serialization", "serialized"),
                threads=threads,
                **kwargs,
            )
        )
    return sweeps


def record_row(record: BenchmarkRecord) -> list[str]:
    return [
        str(SCHEMA_VERSION),
        record.gate,
        record.scenario,
        record.param1_name,
        _fmt(record.param1),
        record.param2_name,
        _fmt(record.param2),
        _fmt(record.p_init),
        _fmt(record.infidelity),
        _fmt(record.p_code),
        _fmt(record.p_code_stderr),
        record.backend,
        str(record.n_samples),
        str(record.seed),
    ]


def write_csv(records: list[BenchmarkRecord], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record_row(record))


def write_json(records: list[BenchmarkRecord], path: str) -> None:
    rows = [dict(zip(CSV_COLUMNS, record_row(r))) for r in records]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(rows, fh, indent=1)
        fh.write("\n")


def summary_lines(records: list[BenchmarkRecord]) -> list[str]:
    """One line per (gate, p_init): p_code and infidelity ranges."""
    groups: dict[tuple[str, float], list[BenchmarkRecord]] = {}
    for r in records:
        groups.setdefault((r.gate, r.p_init), []).append(r)
    lines = []
    for (gate, p_init), recs in groups.items():
        pcs = [r.p_code for r in recs]
        infs = [r.infidelity for r in recs]
        lines.append(
            f"{gate} p_init={p_init:g}: n={len(recs)} "
            f"p_code min/median/max = {min(pcs):.3e}/{statistics.median(pcs):.3e}/{max(pcs):.3e} "
            f"infidelity min/max = {min(infs):.3e}/{max(infs):.3e}"
        )
    return lines


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = _merged_settings(args)
        sweeps = build_sweeps(settings)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    records: list[BenchmarkRecord] = []
    try:
        for sweep in sweeps:
            records.extend(run_benchmark(sweep))
    except Exception as exc:  # simulation failure: report and signal exit 1
        print(f"simulation error: {exc}", file=sys.stderr)
        return 1

    output = settings.get("output")
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    if "json" in settings:
        write_json(records, settings["json"])
    for line in summary_lines(records):
        print(line, file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
