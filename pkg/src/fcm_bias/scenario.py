"""What-if scenario generation, batch execution, phi sweeps, and bias reports.

A scenario activates selected unprotected concepts (uniform draws on (0, 1]
or fixed values) and leaves everything else at zero. The bias report
aggregates the terminal activations of protected concepts over the batch;
only runs that reached a fixed point enter the statistics, and the maximal
pairwise distance among terminal states (dispersion) operationalizes the
"unique fixed point regardless of initial conditions" check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .correlation import WeightMatrix
from .errors import ProtectedActivation, UnknownConcept
from .reasoning import FixedPoint, Inconclusive, LimitCycle, ReasoningConfig, run
from .schema import FeatureSchema

SAMPLING_UNIFORM = "uniform"
SAMPLING_FIXED = "fixed"


@dataclass(frozen=True)
class ScenarioSpec:
    """Which concepts to activate and how to draw their initial values.

    activate: concept names for uniform sampling, or a {name: value} map for
    fixed values. subset_size draws that many concepts per vector from the
    activate list (or from all unprotected concepts when the list is empty).
    """

    activate: tuple[str, ...] = ()
    values: dict[str, float] | None = None
    count: int = 20
    seed: int = 0
    subset_size: int | None = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.values is not None and self.subset_size is not None:
            raise ValueError("subset sampling applies to uniform scenarios only")
        if self.subset_size is not None and self.subset_size < 1:
            raise ValueError("subset_size must be positive")

    @property
    def sampling(self) -> str:
        return SAMPLING_FIXED if self.values is not None else SAMPLING_UNIFORM

    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioSpec":
        activate = doc.get("activate", [])
        values = None
        if isinstance(activate, dict):
            values = {str(k): float(v) for k, v in activate.items()}
            activate = tuple(values)
        else:
            activate = tuple(str(a) for a in activate)
        return cls(activate=activate, values=values,
                   count=int(doc.get("count", 20)), seed=int(doc.get("seed", 0)),
                   subset_size=(int(doc["subset_size"]) if doc.get("subset_size") else None))

    @classmethod
    def from_json_file(cls, path) -> "ScenarioSpec":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def to_dict(self) -> dict:
        doc: dict = {"activate": (self.values if self.values is not None else list(self.activate)),
                     "count": self.count, "seed": self.seed}
        if self.subset_size is not None:
            doc["subset_size"] = self.subset_size
        return doc


def _concept_space(model) -> tuple[tuple[str, ...], frozenset[str]]:
    """Concept names plus protected set, from a schema or a weight matrix."""
    if isinstance(model, FeatureSchema):
        return model.concept_names, frozenset(model.protected_names)
    if isinstance(model, WeightMatrix):
        return model.concept_names, frozenset(model.protected)
    names, protected = model
    return tuple(names), frozenset(protected)


def make_scenarios(spec: ScenarioSpec, model) -> list[np.ndarray]:
    """Build the batch of initial activation vectors; deterministic per seed.

    Activated components are i.i.d. uniform on (0, 1] (or the fixed values);
    all other components are zero. Draws happen in concept order so the
    batch is reproducible regardless of how the spec lists the names.
    """
    names, protected = _concept_space(model)
    index = {n: i for i, n in enumerate(names)}
    for name in spec.activate:
        if name not in index:
            raise UnknownConcept(f"scenario activates unknown concept {name!r}")
        if name in protected:
            raise ProtectedActivation(f"scenario activates protected concept {name!r}")
    if spec.values is not None:
        for name, value in spec.values.items():
            if not 0.0 < value <= 1.0:
                raise ValueError(f"fixed value for {name!r} must be in (0, 1], got {value}")
        vec = np.zeros(len(names))
        for name, value in spec.values.items():
            vec[index[name]] = value
        return [vec.copy() for _ in range(spec.count)]

    pool = list(spec.activate)
    if not pool:
        if spec.subset_size is None:
            raise ValueError("uniform scenario needs activate names or subset_size")
        pool = [n for n in names if n not in protected]
    pool.sort(key=index.__getitem__)
    if spec.subset_size is not None and spec.subset_size > len(pool):
        raise ValueError(f"subset_size {spec.subset_size} exceeds pool of {len(pool)}")

    rng = np.random.default_rng(spec.seed)
    batch = []
    for _ in range(spec.count):
        if spec.subset_size is not None:
            chosen = sorted(rng.choice(len(pool), size=spec.subset_size, replace=False))
            active = [pool[i] for i in chosen]
        else:
            active = pool
        vec = np.zeros(len(names))
        for name in active:
            vec[index[name]] = 1.0 - rng.random()  # uniform on (0, 1]
        batch.append(vec)
    return batch


@dataclass(frozen=True)
class ConceptStats:
    mean: float
    minimum: float
    maximum: float
    stddev: float


@dataclass(frozen=True)
class BiasReport:
    """Terminal-activation statistics for protected concepts over one batch."""

    phi: float
    protected_names: tuple[str, ...]
    stats: dict[str, ConceptStats]
    per_run: tuple[tuple[float, ...], ...]
    fixed_point_count: int
    limit_cycle_count: int
    inconclusive_count: int
    dispersion: float | None
    run_errors: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "phi": self.phi,
            "protected": list(self.protected_names),
            "stats": {
                name: {"mean": s.mean, "min": s.minimum, "max": s.maximum,
                       "stddev": s.stddev}
                for name, s in self.stats.items()
            },
            "per_run": [list(row) for row in self.per_run],
            "converged_count": self.fixed_point_count,
            "limit_cycle_count": self.limit_cycle_count,
            "inconclusive_count": self.inconclusive_count,
            "dispersion": self.dispersion,
        }


def run_batch(scenarios, w: WeightMatrix, config: ReasoningConfig,
              protected_concepts=None) -> BiasReport:
    """Run every scenario independently and aggregate protected activations.

    Per-run failures are recorded without aborting the batch. Statistics
    cover fixed-point runs only; limit cycles and inconclusive runs are
    counted separately.
    """
    protected = tuple(protected_concepts) if protected_concepts is not None else tuple(w.protected)
    unknown = [p for p in protected if p not in w.concept_names]
    if unknown:
        raise UnknownConcept(f"protected concepts {unknown} not in the model")
    idx = [w.index(p) for p in protected]

    terminals = []
    fixed = cycles = inconclusive = 0
    errors: list[str] = []
    for k, a0 in enumerate(scenarios):
        try:
            trace = run(a0, w, config)
        except Exception as exc:  # noqa: BLE001 - per-run isolation
            errors.append(f"run {k}: {exc}")
            continue
        if isinstance(trace.terminal, FixedPoint):
            fixed += 1
            terminals.append(trace.terminal_state)
        elif isinstance(trace.terminal, LimitCycle):
            cycles += 1
        else:
            inconclusive += 1

    per_run = tuple(tuple(float(t[i]) for i in idx) for t in terminals)
    stats: dict[str, ConceptStats] = {}
    if terminals:
        block = np.array(terminals)[:, idx]
        for col, name in enumerate(protected):
            vals = block[:, col]
            stats[name] = ConceptStats(mean=float(vals.mean()),
                                       minimum=float(vals.min()),
                                       maximum=float(vals.max()),
                                       stddev=float(vals.std()))
    dispersion: float | None = None
    if terminals:
        dispersion = 0.0
        for i in range(len(terminals)):
            for j in range(i + 1, len(terminals)):
                d = float(np.max(np.abs(terminals[i] - terminals[j])))
                dispersion = max(dispersion, d)
    return BiasReport(phi=config.phi, protected_names=protected, stats=stats,
                      per_run=per_run, fixed_point_count=fixed,
                      limit_cycle_count=cycles, inconclusive_count=inconclusive,
                      dispersion=dispersion, run_errors=tuple(errors))


def phi_sweep(spec: ScenarioSpec, w: WeightMatrix, base_config: ReasoningConfig,
              phi_grid, protected_concepts=None) -> list[BiasReport]:
    """One report per phi value, all over the identical scenario batch."""
    phis = list(phi_grid)
    if not phis:
        raise ValueError("phi grid must be non-empty")
    for phi in phis:
        if not 0.0 <= phi <= 1.0:
            raise ValueError(f"phi values must lie in [0, 1], got {phi}")
    batch = make_scenarios(spec, w)
    return [run_batch(batch, w, base_config.with_phi(phi), protected_concepts)
            for phi in phis]


def group_report(w: WeightMatrix, spec: ScenarioSpec,
                 config: ReasoningConfig | None = None) -> BiasReport:
    """Bias report over group indicator concepts; phi = 1 by default so the
    batch lands on the unique fixed-point attractor."""
    if config is None:
        config = ReasoningConfig(phi=1.0)
    batch = make_scenarios(spec, w)
    return run_batch(batch, w, config)
