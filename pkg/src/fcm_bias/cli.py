"""Command-line front door: build the weight matrix, run simulations and
phi sweeps, inspect the dominant eigenpair, and serve the HTTP API.

Every command is deterministic given its flags and seed; data files are
byte-identical across reruns, with timestamps confined to the manifest.
Exit codes: 0 success, 2 input error, 3 dimension error, 4 no run
converged, 5 asymmetric matrix.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__, io
from .correlation import build_weight_matrix
from .errors import DimensionMismatch, FcmBiasError
from .ingest import build_dataset
from .reasoning import ReasoningConfig, run
from .scenario import ScenarioSpec, make_scenarios, phi_sweep, run_batch
from .schema import FeatureSchema
from .spectral import dominant_eigenvector

EXIT_INPUT = 2
EXIT_DIMENSION = 3
EXIT_NO_CONVERGENCE = 4
EXIT_ASYMMETRY = 5

CONFIG_ENV = "FCM_BIAS_CONFIG"


def _env_defaults() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_INPUT, f"{CONFIG_ENV} points at unreadable config {path}: {exc}")


def _default(value, key, fallback):
    if value is not None:
        return value
    return _env_defaults().get(key, fallback)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _write_outputs(out_dir: Path, files: dict[str, bytes], manifest: dict):
    out_dir.mkdir(parents=True, exist_ok=True)
    hashes = {}
    for name, payload in files.items():
        (out_dir / name).write_bytes(payload)
        hashes[name] = hashlib.sha256(payload).hexdigest()
    manifest["outputs"] = hashes
    (out_dir / io.MANIFEST_NAME).write_bytes(io.canonical_json_bytes(manifest))


def _manifest(inputs: dict, config: dict, seed=None) -> dict:
    return {
        "tool": "fcm-bias",
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "seed": seed,
        "inputs": inputs,
        "config": config,
    }


def _load_matrix(path: str):
    try:
        return io.load_weight_matrix(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        _fail(EXIT_INPUT, f"weight file {path}: {exc}")


@click.group()
@click.version_option(version=__version__, prog_name="fcm-bias")
def main():
    """Implicit-bias simulation over correlation-weighted concept networks."""


@main.command()
@click.option("--data", required=True, type=click.Path(), help="CSV dataset.")
@click.option("--schema", "schema_path", required=True, type=click.Path(),
              help="JSON feature schema.")
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.option("--diagonal", type=click.Choice(["zero", "one"]), default="zero",
              show_default=True)
@click.option("--delimiter", default=",", show_default=True)
@click.option("--missing-policy", type=click.Choice(["drop", "strict"]), default="drop",
              show_default=True)
def build(data, schema_path, out, diagonal, delimiter, missing_policy):
    """Build the absolute-correlation weight matrix from a dataset."""
    try:
        schema = FeatureSchema.from_json_file(schema_path)
    except OSError as exc:
        _fail(EXIT_INPUT, f"schema file {schema_path}: {exc}")
    except FcmBiasError as exc:
        _fail(EXIT_INPUT, str(exc))
    try:
        dataset = build_dataset(data, schema, delimiter=delimiter,
                                missing_policy=missing_policy)
        matrix = build_weight_matrix(dataset, diagonal=diagonal)
    except OSError as exc:
        _fail(EXIT_INPUT, f"data file {data}: {exc}")
    except FcmBiasError as exc:
        _fail(EXIT_INPUT, str(exc))
    for warning in matrix.warnings:
        click.echo(f"warning: {warning}", err=True)
    files = {
        "weights.json": io.canonical_json_bytes(io.weight_matrix_to_dict(matrix)),
        "correlations.csv": io.correlation_table_csv(matrix).encode(),
        "edges.csv": io.edges_csv(matrix).encode(),
    }
    manifest = _manifest({"data": str(data), "schema": str(schema_path)},
                         {"diagonal": diagonal, "delimiter": delimiter,
                          "missingPolicy": missing_policy})
    _write_outputs(Path(out), files, manifest)
    click.echo(f"built {matrix.size}x{matrix.size} weight matrix "
               f"({len(matrix.warnings)} warnings) -> {out}")


def _print_protected(matrix, state):
    for name in matrix.protected:
        click.echo(f"{name} {state[matrix.index(name)]:.6f}")


@main.command()
@click.option("--weights", "weights_path", required=True, type=click.Path())
@click.option("--initial", "initial_path", type=click.Path(),
              help="JSON {concept: value} map; missing concepts start at 0.")
@click.option("--scenario", "scenario_path", type=click.Path(),
              help="JSON scenario spec (batch mode).")
@click.option("--phi", type=float, default=None)
@click.option("--iters", type=int, default=None)
@click.option("--transfer", type=click.Choice(["rescaled", "sigmoid", "tanh"]), default=None)
@click.option("--slope", type=float, default=None, help="Sigmoid steepness.")
@click.option("--epsilon", type=float, default=None)
@click.option("--seed", type=int, default=None, help="Overrides the scenario seed.")
@click.option("--out", type=click.Path(), default=None)
def simulate(weights_path, initial_path, scenario_path, phi, iters, transfer,
             slope, epsilon, seed, out):
    """Run one simulation trace or a scenario batch."""
    if (initial_path is None) == (scenario_path is None):
        _fail(EXIT_INPUT, "exactly one of --initial / --scenario is required")
    matrix = _load_matrix(weights_path)
    config = _build_config(phi, iters, transfer, slope, epsilon)

    if initial_path is not None:
        try:
            with open(initial_path, encoding="utf-8") as f:
                initial_map = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            _fail(EXIT_INPUT, f"initial file {initial_path}: {exc}")
        a0 = np.zeros(matrix.size)
        for name, value in initial_map.items():
            if name not in matrix.concept_names:
                _fail(EXIT_DIMENSION, f"unknown concept {name!r} in initial vector")
            a0[matrix.index(name)] = float(value)
        try:
            trace = run(a0, matrix, config)
        except DimensionMismatch as exc:
            _fail(EXIT_DIMENSION, str(exc))
        _print_protected(matrix, trace.terminal_state)
        click.echo(f"terminal: {io.terminal_to_dict(trace.terminal)}")
        if out:
            files = {
                "trace.json": io.canonical_json_bytes(
                    io.trace_to_dict(trace, config, manifest=io.MANIFEST_NAME)),
                "trace.csv": io.trace_csv(trace, matrix.concept_names).encode(),
            }
            manifest = _manifest({"weights": str(weights_path), "initial": str(initial_path)},
                                 io.config_to_dict(config))
            _write_outputs(Path(out), files, manifest)
        if io.terminal_to_dict(trace.terminal)["kind"] == "inconclusive":
            sys.exit(EXIT_NO_CONVERGENCE)
        return

    spec, effective_seed = _load_scenario(scenario_path, seed)
    try:
        batch = make_scenarios(spec, matrix)
        report = run_batch(batch, matrix, config)
    except DimensionMismatch as exc:
        _fail(EXIT_DIMENSION, str(exc))
    except FcmBiasError as exc:
        _fail(EXIT_INPUT, str(exc))
    for name in report.protected_names:
        s = report.stats.get(name)
        click.echo(f"{name} {s.mean:.6f}" if s else f"{name} n/a")
    if out:
        files = {
            "report.json": io.canonical_json_bytes(
                io.report_to_dict(report, manifest=io.MANIFEST_NAME)),
            "report.csv": io.report_csv_rows([report]).encode(),
        }
        manifest = _manifest({"weights": str(weights_path), "scenario": str(scenario_path)},
                             io.config_to_dict(config), seed=effective_seed)
        _write_outputs(Path(out), files, manifest)
    if report.inconclusive_count == len(batch):
        sys.exit(EXIT_NO_CONVERGENCE)


def _build_config(phi, iters, transfer, slope, epsilon) -> ReasoningConfig:
    try:
        return ReasoningConfig(
            phi=float(_default(phi, "phi", 1.0)),
            max_iterations=int(_default(iters, "iters", 20)),
            transfer=str(_default(transfer, "transfer", "rescaled")),
            slope=float(_default(slope, "slope", 1.0)),
            epsilon=float(_default(epsilon, "epsilon", 1e-8)),
        )
    except ValueError as exc:
        _fail(EXIT_INPUT, str(exc))


def _load_scenario(path, seed_override):
    try:
        spec = ScenarioSpec.from_json_file(path)
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        _fail(EXIT_INPUT, f"scenario file {path}: {exc}")
    seed = seed_override if seed_override is not None else _env_defaults().get("seed")
    if seed is not None:
        spec = ScenarioSpec(activate=spec.activate, values=spec.values,
                            count=spec.count, seed=int(seed),
                            subset_size=spec.subset_size)
    return spec, spec.seed


@main.command()
@click.option("--weights", "weights_path", required=True, type=click.Path())
@click.option("--tol", type=float, default=None)
@click.option("--max-iter", type=int, default=None)
@click.option("--seed", type=int, default=None, help="Seed for the cross-check start vector.")
def eigen(weights_path, tol, max_iter, seed):
    """Dominant eigenpair via power iteration, cross-checked against a
    closed-system run from a random positive start."""
    matrix = _load_matrix(weights_path)
    tol = float(_default(tol, "tol", 1e-10))
    max_iter = int(_default(max_iter, "max_iter", 1000))
    seed = int(_default(seed, "seed", 0))
    asym = float(np.max(np.abs(matrix.weights - matrix.weights.T)))
    if asym > 1e-12:
        _fail(EXIT_ASYMMETRY, f"weight matrix asymmetric (max |w - w^T| = {asym:.3e})")
    result = dominant_eigenvector(matrix, tol=tol, max_iter=max_iter)
    click.echo(f"lambda {result.value:.12g}")
    click.echo("eigenvector " + " ".join(f"{x:.12g}" for x in result.vector))
    click.echo(f"converged {str(result.converged).lower()} ({result.iterations} iterations)")
    rng = np.random.default_rng(seed)
    a0 = rng.random(matrix.size) * 0.9 + 0.1
    trace = run(a0, matrix, ReasoningConfig(phi=1.0, max_iterations=max(200, max_iter),
                                            epsilon=min(tol, 1e-10)))
    dist = float(np.max(np.abs(trace.terminal_state - result.vector)))
    click.echo(f"closed-system cross-check distance {dist:.3e}")


@main.command()
@click.option("--weights", "weights_path", required=True, type=click.Path())
@click.option("--scenario", "scenario_path", required=True, type=click.Path())
@click.option("--phis", required=True, help="Comma-separated phi grid, e.g. 0.6,0.8,1.0.")
@click.option("--iters", type=int, default=None)
@click.option("--transfer", type=click.Choice(["rescaled", "sigmoid", "tanh"]), default=None)
@click.option("--epsilon", type=float, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--out", required=True, type=click.Path())
def sweep(weights_path, scenario_path, phis, iters, transfer, epsilon, seed, out):
    """Run the same scenario batch across a phi grid."""
    matrix = _load_matrix(weights_path)
    try:
        grid = [float(p) for p in phis.split(",") if p.strip() != ""]
    except ValueError:
        _fail(EXIT_INPUT, f"cannot parse --phis {phis!r}")
    spec, effective_seed = _load_scenario(scenario_path, seed)
    config = _build_config(None, iters, transfer, None, epsilon)
    try:
        reports = phi_sweep(spec, matrix, config, grid)
    except DimensionMismatch as exc:
        _fail(EXIT_DIMENSION, str(exc))
    except (FcmBiasError, ValueError) as exc:
        _fail(EXIT_INPUT, str(exc))
    files = {
        "sweep.json": io.canonical_json_bytes(io.sweep_to_dict(reports, seed=effective_seed)),
        "sweep.csv": io.report_csv_rows(reports).encode(),
    }
    manifest = _manifest({"weights": str(weights_path), "scenario": str(scenario_path)},
                         {**io.config_to_dict(config), "phis": grid}, seed=effective_seed)
    _write_outputs(Path(out), files, manifest)
    for report in reports:
        parts = ", ".join(f"{n}={report.stats[n].mean:.4f}" for n in report.protected_names
                          if n in report.stats)
        click.echo(f"phi={report.phi:g}: {parts} "
                   f"(dispersion={report.dispersion if report.dispersion is not None else 'n/a'})")
    total = sum(r.fixed_point_count + r.limit_cycle_count + r.inconclusive_count
                for r in reports)
    if total and total == sum(r.inconclusive_count for r in reports):
        sys.exit(EXIT_NO_CONVERGENCE)


@main.command()
@click.option("--listen", default="127.0.0.1:8080", show_default=True)
@click.option("--cors-origin", default=None, help="Allowed origin for the explorer UI.")
@click.option("--persist-dir", type=click.Path(), default=None,
              help="Directory for one-JSON-per-model persistence.")
def serve(listen, cors_origin, persist_dir):
    """Serve the HTTP JSON API for the what-if explorer."""
    import uvicorn

    from .service import create_app

    host, _, port = listen.partition(":")
    app = create_app(cors_origin=cors_origin, persist_dir=persist_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8080))


if __name__ == "__main__":
    main()
