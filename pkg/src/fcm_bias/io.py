"""Wire formats shared by the CLI and the HTTP service.

Everything here is deterministic: identical inputs serialize to identical
bytes, which is what makes CLI outputs and service responses comparable.
Floats round-trip exactly (repr-based JSON, %.17g in CSV).
"""

from __future__ import annotations

import csv
import io as _io
import json

import numpy as np

from .correlation import WeightMatrix
from .reasoning import FixedPoint, LimitCycle, ReasoningConfig, SimulationTrace
from .scenario import BiasReport

MANIFEST_NAME = "manifest.json"


def canonical_json_bytes(doc) -> bytes:
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


# --- weight matrix ----------------------------------------------------------

def weight_matrix_to_dict(matrix: WeightMatrix, manifest: str | None = MANIFEST_NAME) -> dict:
    doc = {
        "conceptNames": list(matrix.concept_names),
        "weights": [float(x) for x in matrix.weights.reshape(-1)],
        "significance": [bool(x) for x in matrix.significance.reshape(-1)],
        "protected": list(matrix.protected),
    }
    if manifest:
        doc["manifest"] = manifest
    return doc


def weight_matrix_from_dict(doc: dict) -> WeightMatrix:
    names = tuple(doc["conceptNames"])
    m = len(names)
    weights = np.array(doc["weights"], dtype=np.float64).reshape(m, m)
    significance = np.array(doc["significance"], dtype=bool).reshape(m, m)
    return WeightMatrix(concept_names=names, weights=weights,
                        significance=significance,
                        protected=tuple(doc.get("protected", ())))


def load_weight_matrix(path) -> WeightMatrix:
    with open(path, encoding="utf-8") as f:
        return weight_matrix_from_dict(json.load(f))


def weight_matrix_to_csv(matrix: WeightMatrix) -> str:
    """Square CSV, header = concept names, cells at 17 significant digits."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["concept", *matrix.concept_names])
    for i, name in enumerate(matrix.concept_names):
        writer.writerow([name] + [f"{x:.17g}" for x in matrix.weights[i]])
    return buf.getvalue()


def weight_matrix_from_csv(text: str, protected=()) -> WeightMatrix:
    rows = list(csv.reader(_io.StringIO(text)))
    names = tuple(rows[0][1:])
    m = len(names)
    weights = np.array([[float(c) for c in row[1:]] for row in rows[1:m + 1]])
    return WeightMatrix(concept_names=names, weights=weights,
                        significance=np.zeros((m, m), dtype=bool),
                        protected=tuple(protected))


def edges_csv(matrix: WeightMatrix) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight", "significant"])
    for source, target, weight, significant in matrix.edges():
        writer.writerow([source, target, f"{weight:.17g}", str(significant).lower()])
    return buf.getvalue()


def edges_to_list(matrix: WeightMatrix) -> list[dict]:
    return [
        {"source": s, "target": t, "weight": w, "significant": sig}
        for s, t, w, sig in matrix.edges()
    ]


def correlation_table_csv(matrix: WeightMatrix) -> str:
    """Per-protected-feature columns with significance stars, 2 decimals."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["feature", *matrix.protected])
    for i, name in enumerate(matrix.concept_names):
        row = [name]
        for p in matrix.protected:
            j = matrix.index(p)
            star = "*" if matrix.significance[i, j] else ""
            row.append(f"{matrix.weights[i, j]:.2f}{star}")
        writer.writerow(row)
    return buf.getvalue()


# --- traces -----------------------------------------------------------------

def config_to_dict(config: ReasoningConfig) -> dict:
    return {
        "phi": config.phi,
        "maxIterations": config.max_iterations,
        "transfer": config.transfer,
        "slope": config.slope,
        "epsilon": config.epsilon,
        "cyclePeriodMax": config.effective_cycle_period_max,
    }


def terminal_to_dict(terminal) -> dict:
    if isinstance(terminal, FixedPoint):
        return {"kind": "fixed_point", "atIteration": terminal.at_iteration}
    if isinstance(terminal, LimitCycle):
        return {"kind": "limit_cycle", "period": terminal.period,
                "fromIteration": terminal.from_iteration}
    return {"kind": "inconclusive"}


def trace_to_dict(trace: SimulationTrace, config: ReasoningConfig,
                  manifest: str | None = None) -> dict:
    doc = {
        "config": config_to_dict(config),
        "states": [[float(x) for x in state] for state in trace.states],
        "terminal": terminal_to_dict(trace.terminal),
    }
    if manifest:
        doc["manifest"] = manifest
    return doc


def trace_csv(trace: SimulationTrace, concept_names) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["iteration", "concept", "value"])
    for t, state in enumerate(trace.states):
        for name, value in zip(concept_names, state):
            writer.writerow([t, name, f"{value:.17g}"])
    return buf.getvalue()


# --- bias reports -----------------------------------------------------------

def report_to_dict(report: BiasReport, manifest: str | None = None) -> dict:
    doc = report.to_dict()
    if manifest:
        doc["manifest"] = manifest
    return doc


def sweep_to_dict(reports: list[BiasReport], seed: int,
                  manifest: str | None = MANIFEST_NAME) -> dict:
    doc = {
        "phis": [r.phi for r in reports],
        "seed": seed,
        "reports": [report_to_dict(r) for r in reports],
    }
    if manifest:
        doc["manifest"] = manifest
    return doc


def report_csv_rows(reports: list[BiasReport]) -> str:
    """One row per (phi, protected concept), ready for bar-panel plotting."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["phi", "concept", "mean", "min", "max", "stddev",
                     "dispersion", "converged_count"])
    for report in reports:
        for name in report.protected_names:
            s = report.stats.get(name)
            cells = [f"{report.phi:.17g}", name]
            if s is None:
                cells += ["", "", "", ""]
            else:
                cells += [f"{s.mean:.17g}", f"{s.minimum:.17g}",
                          f"{s.maximum:.17g}", f"{s.stddev:.17g}"]
            cells.append("" if report.dispersion is None else f"{report.dispersion:.17g}")
            cells.append(str(report.fixed_point_count))
            writer.writerow(cells)
    return buf.getvalue()
