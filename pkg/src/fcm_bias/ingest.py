"""CSV loading, min-max normalization, and protected-group expansion.

All operations are pure: each returns a new Dataset and never mutates its
input. Column arrays are marked read-only so datasets can be shared across
threads.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyDataset,
    MissingColumn,
    NonExhaustivePredicate,
    OverlappingPredicate,
    SchemaError,
    TypeMismatch,
)
from .schema import KIND_NOMINAL, KIND_NUMERIC, Feature, FeatureSchema

# Tokens treated as missing cells; anything else unparseable in a numeric
# column is a TypeMismatch regardless of policy.
MISSING_TOKENS = frozenset({"", "na", "n/a", "nan", "?"})

POLICY_DROP = "drop"
POLICY_STRICT = "strict"


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """Typed columns for one schema: numeric as float64, nominal as codes."""

    schema: FeatureSchema
    columns: dict[str, np.ndarray]
    categories: dict[str, tuple[str, ...]]
    row_count: int
    normalized: bool = field(default=False)

    def column(self, name: str) -> np.ndarray:
        return self.columns[name]

    def decode(self, name: str) -> list[str]:
        """Nominal codes back to their category labels (round-trip identity)."""
        cats = self.categories[name]
        return [cats[c] for c in self.columns[name]]


def _is_missing(token: str) -> bool:
    return token.strip().lower() in MISSING_TOKENS


def load_csv(path, schema: FeatureSchema, delimiter: str = ",",
             missing_policy: str = POLICY_DROP) -> Dataset:
    """Parse a headered CSV into a Dataset typed per the schema.

    The header must contain every schema feature (order-insensitive); extra
    columns are ignored. Rows with missing cells are dropped under the
    ``drop`` policy and rejected under ``strict``.
    """
    if missing_policy not in (POLICY_DROP, POLICY_STRICT):
        raise ValueError(f"unknown missing-value policy {missing_policy!r}")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f, delimiter=delimiter)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataset(f"{path}: file has no header row") from None
        header = [h.strip() for h in header]
        col_index = {}
        for i, name in enumerate(header):
            col_index.setdefault(name, i)
        missing = [f.name for f in schema.features if f.name not in col_index]
        if missing:
            raise MissingColumn(f"{path}: columns {missing} not found in header")

        raw_rows: list[list[str]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < len(header):
                if missing_policy == POLICY_STRICT:
                    raise TypeMismatch(f"{path}:{line_no}: row has {len(row)} fields, "
                                       f"expected {len(header)}")
                continue
            cells = [row[col_index[f.name]] for f in schema.features]
            holes = [f.name for f, c in zip(schema.features, cells) if _is_missing(c)]
            if holes:
                if missing_policy == POLICY_STRICT:
                    raise TypeMismatch(f"{path}:{line_no}: missing value in column "
                                       f"{holes[0]!r}")
                continue
            for feat, cell in zip(schema.features, cells):
                if feat.kind == KIND_NUMERIC:
                    try:
                        float(cell)
                    except ValueError:
                        raise TypeMismatch(
                            f"{path}:{line_no}: column {feat.name!r} expects a number, "
                            f"got {cell!r}") from None
            raw_rows.append(cells)

    if not raw_rows:
        raise EmptyDataset(f"{path}: no data rows after applying the "
                           f"{missing_policy!r} policy")

    columns: dict[str, np.ndarray] = {}
    categories: dict[str, tuple[str, ...]] = {}
    for j, feat in enumerate(schema.features):
        cells = [r[j] for r in raw_rows]
        if feat.kind == KIND_NUMERIC:
            columns[feat.name] = _readonly(np.array([float(c) for c in cells], dtype=np.float64))
        else:
            cats: list[str] = []
            index: dict[str, int] = {}
            codes = np.empty(len(cells), dtype=np.int64)
            for i, c in enumerate(cells):
                if c not in index:
                    index[c] = len(cats)
                    cats.append(c)
                codes[i] = index[c]
            columns[feat.name] = _readonly(codes)
            categories[feat.name] = tuple(cats)
    return Dataset(schema=schema, columns=columns, categories=categories,
                   row_count=len(raw_rows))


def normalize(dataset: Dataset) -> Dataset:
    """Min-max scale every numeric column into [0, 1].

    Constant columns map to all-zeros: they carry no correlation signal and
    dividing by a zero range is avoided. Nominal columns pass through.
    """
    columns = dict(dataset.columns)
    for feat in dataset.schema.features:
        if feat.kind != KIND_NUMERIC:
            continue
        col = dataset.columns[feat.name]
        lo, hi = col.min(), col.max()
        if hi == lo:
            scaled = np.zeros_like(col)
        else:
            scaled = (col - lo) / (hi - lo)
        columns[feat.name] = _readonly(scaled)
    return Dataset(schema=dataset.schema, columns=columns,
                   categories=dataset.categories, row_count=dataset.row_count,
                   normalized=True)


def expand_groups(dataset: Dataset, expansions=None) -> Dataset:
    """Replace expanded protected features by one binary indicator per group.

    Predicates apply to raw values, so expansion must run before
    normalization. Each observed value must match exactly one group.
    Indicators are nominal, protected, and ordered as declared; all other
    columns pass through untouched.
    """
    schema = dataset.schema
    if expansions is None:
        expansions = schema.group_expansions
    if not expansions:
        return dataset
    if dataset.normalized and any(
            schema.feature(exp.feature).kind == KIND_NUMERIC for exp in expansions):
        raise SchemaError("group expansion predicates address raw values; "
                          "expand before normalize")
    by_feature = {exp.feature: exp for exp in expansions}
    for name in by_feature:
        if not schema.feature(name).protected:
            raise SchemaError(f"expansion targets unprotected feature {name!r}")

    new_features: list[Feature] = []
    columns: dict[str, np.ndarray] = {}
    categories: dict[str, tuple[str, ...]] = {}
    for feat in schema.features:
        exp = by_feature.get(feat.name)
        if exp is None:
            new_features.append(feat)
            columns[feat.name] = dataset.columns[feat.name]
            if feat.kind == KIND_NOMINAL:
                categories[feat.name] = dataset.categories[feat.name]
            continue
        if feat.kind == KIND_NUMERIC:
            raw_values = list(dataset.columns[feat.name])
        else:
            raw_values = dataset.decode(feat.name)
        indicator = {g.label: np.zeros(dataset.row_count, dtype=np.int64) for g in exp.groups}
        for i, raw in enumerate(raw_values):
            hits = [g for g in exp.groups if g.matches(raw)]
            if not hits:
                raise NonExhaustivePredicate(
                    f"feature {feat.name!r}: value {raw!r} matches no group")
            if len(hits) > 1:
                raise OverlappingPredicate(
                    f"feature {feat.name!r}: value {raw!r} matches groups "
                    f"{[g.label for g in hits]}")
            indicator[hits[0].label][i] = 1
        for g in exp.groups:
            new_features.append(Feature(name=g.label, kind=KIND_NOMINAL, protected=True))
            columns[g.label] = _readonly(indicator[g.label])
            categories[g.label] = ("0", "1")

    new_schema = FeatureSchema(features=tuple(new_features))
    return Dataset(schema=new_schema, columns=columns, categories=categories,
                   row_count=dataset.row_count, normalized=dataset.normalized)


def build_dataset(path, schema: FeatureSchema, delimiter: str = ",",
                  missing_policy: str = POLICY_DROP) -> Dataset:
    """Canonical pipeline: load, expand declared groups, then normalize."""
    ds = load_csv(path, schema, delimiter=delimiter, missing_policy=missing_policy)
    ds = expand_groups(ds)
    return normalize(ds)
