"""Feature schemas: concept ordering, protected flags, and group expansions.

A schema declares the tabular features that become neural concepts, which of
them are protected, and (optionally) how protected features split into group
indicator concepts. The feature order defines the concept order everywhere
downstream (weight matrix, activation vectors, reports).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SchemaError

KIND_NUMERIC = "numeric"
KIND_NOMINAL = "nominal"
_KINDS = (KIND_NUMERIC, KIND_NOMINAL)
_OPS = ("lt", "le", "gt", "ge", "in")


@dataclass(frozen=True)
class Feature:
    name: str
    kind: str
    protected: bool = False


@dataclass(frozen=True)
class Group:
    """One group of an expansion: a predicate over raw feature values."""

    label: str
    op: str
    value: object

    def matches(self, raw) -> bool:
        if self.op == "in":
            values = self.value if isinstance(self.value, (list, tuple)) else [self.value]
            return any(raw == v for v in values)
        bound = self.value
        if self.op == "lt":
            return raw < bound
        if self.op == "le":
            return raw <= bound
        if self.op == "gt":
            return raw > bound
        if self.op == "ge":
            return raw >= bound
        raise SchemaError(f"unknown group op {self.op!r}")


@dataclass(frozen=True)
class GroupExpansion:
    feature: str
    groups: tuple[Group, ...]


@dataclass(frozen=True)
class FeatureSchema:
    features: tuple[Feature, ...]
    group_expansions: tuple[GroupExpansion, ...] = field(default=())

    def __post_init__(self):
        names = [f.name for f in self.features]
        if not names:
            raise SchemaError("schema declares no features")
        if any(not n for n in names):
            raise SchemaError("feature names must be non-empty")
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise SchemaError(f"duplicate feature names: {dupes}")
        for f in self.features:
            if f.kind not in _KINDS:
                raise SchemaError(f"feature {f.name!r}: unknown kind {f.kind!r}")
        if not any(f.protected for f in self.features):
            raise SchemaError("schema needs at least one protected feature")
        if all(f.protected for f in self.features):
            raise SchemaError("schema needs at least one unprotected feature")
        by_name = {f.name: f for f in self.features}
        seen_labels = set(names)
        for exp in self.group_expansions:
            target = by_name.get(exp.feature)
            if target is None:
                raise SchemaError(f"expansion references unknown feature {exp.feature!r}")
            if not target.protected:
                raise SchemaError(f"expansion targets unprotected feature {exp.feature!r}")
            if not exp.groups:
                raise SchemaError(f"expansion of {exp.feature!r} declares no groups")
            for g in exp.groups:
                if g.op not in _OPS:
                    raise SchemaError(f"group {g.label!r}: unknown op {g.op!r}")
                if g.label in seen_labels:
                    raise SchemaError(f"duplicate group label {g.label!r}")
                seen_labels.add(g.label)

    @property
    def concept_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def protected_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features if f.protected)

    @property
    def unprotected_names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features if not f.protected)

    def feature(self, name: str) -> Feature:
        for f in self.features:
            if f.name == name:
                return f
        raise SchemaError(f"no feature named {name!r}")

    def expansion_for(self, name: str) -> GroupExpansion | None:
        for exp in self.group_expansions:
            if exp.feature == name:
                return exp
        return None

    # --- JSON wire format --------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "FeatureSchema":
        try:
            features = tuple(
                Feature(name=f["name"], kind=f["kind"], protected=bool(f.get("protected", False)))
                for f in doc["features"]
            )
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed schema: missing or invalid field {exc}") from exc
        expansions = []
        for exp in doc.get("group_expansions", []):
            try:
                groups = tuple(
                    Group(label=g["label"], op=g["op"], value=g["value"]) for g in exp["groups"]
                )
                expansions.append(GroupExpansion(feature=exp["feature"], groups=groups))
            except (KeyError, TypeError) as exc:
                raise SchemaError(f"malformed group expansion: {exc}") from exc
        return cls(features=features, group_expansions=tuple(expansions))

    @classmethod
    def from_json_file(cls, path) -> "FeatureSchema":
        with open(path, encoding="utf-8") as f:
            try:
                doc = json.load(f)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"schema file {path}: invalid JSON ({exc})") from exc
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = {
            "features": [
                {"name": f.name, "kind": f.kind, "protected": f.protected} for f in self.features
            ]
        }
        if self.group_expansions:
            doc["group_expansions"] = [
                {
                    "feature": exp.feature,
                    "groups": [{"label": g.label, "op": g.op, "value": g.value} for g in exp.groups],
                }
                for exp in self.group_expansions
            ]
        return doc
