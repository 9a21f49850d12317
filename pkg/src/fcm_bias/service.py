"""HTTP JSON API for the what-if explorer and scripted clients.

A thin wrapper over the library: every response body is produced by the
same serializers as the CLI, so identical inputs yield byte-identical
payloads. Models are immutable after registration (lock-free reads);
registration is idempotent per content hash.
"""

from __future__ import annotations

import hashlib
import json
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, File, Form, Request, Response, UploadFile
from fastapi.middleware.cors import CORSMiddleware

from . import io
from .correlation import WeightMatrix, build_weight_matrix
from .errors import FcmBiasError
from .ingest import build_dataset
from .reasoning import ReasoningConfig, run
from .scenario import ScenarioSpec, phi_sweep
from .schema import FeatureSchema


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, detail: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail

    def body(self) -> dict:
        doc = {"code": self.code, "message": self.message}
        if self.detail is not None:
            doc["detail"] = self.detail
        return doc


@dataclass(frozen=True)
class ModelEntry:
    model_id: str
    schema: FeatureSchema
    matrix: WeightMatrix
    weights_bytes: bytes


class ModelRegistry:
    """In-memory model store; registration serialized, reads lock-free."""

    def __init__(self, persist_dir=None):
        self._entries: dict[str, ModelEntry] = {}
        self._lock = threading.Lock()
        self._persist_dir = Path(persist_dir) if persist_dir else None
        if self._persist_dir and self._persist_dir.is_dir():
            for path in sorted(self._persist_dir.glob("*.json")):
                entry = _entry_from_dict(json.loads(path.read_text(encoding="utf-8")))
                self._entries[entry.model_id] = entry

    def get(self, model_id: str) -> ModelEntry | None:
        return self._entries.get(model_id)

    def register(self, entry: ModelEntry) -> bool:
        """Idempotent insert; returns True when the entry is new."""
        with self._lock:
            if entry.model_id in self._entries:
                return False
            self._entries[entry.model_id] = entry
            if self._persist_dir:
                self._persist_dir.mkdir(parents=True, exist_ok=True)
                path = self._persist_dir / f"{entry.model_id}.json"
                path.write_bytes(io.canonical_json_bytes(_entry_to_dict(entry)))
            return True


def _entry_to_dict(entry: ModelEntry) -> dict:
    return {
        "modelId": entry.model_id,
        "schema": entry.schema.to_dict(),
        "weights": json.loads(entry.weights_bytes.decode("utf-8")),
    }


def _entry_from_dict(doc: dict) -> ModelEntry:
    matrix = io.weight_matrix_from_dict(doc["weights"])
    return ModelEntry(
        model_id=doc["modelId"],
        schema=FeatureSchema.from_dict(doc["schema"]),
        matrix=matrix,
        weights_bytes=io.canonical_json_bytes(doc["weights"]),
    )


def _json_response(payload: bytes, status: int = 200) -> Response:
    return Response(content=payload, status_code=status, media_type="application/json")


def create_app(registry: ModelRegistry | None = None, cors_origin: str | None = None,
               persist_dir=None) -> FastAPI:
    app = FastAPI(title="fcm-bias service")
    reg = registry or ModelRegistry(persist_dir=persist_dir)
    app.state.registry = reg

    if cors_origin:
        app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return _json_response(io.canonical_json_bytes(exc.body()), status=exc.status)

    def _entry_or_404(model_id: str) -> ModelEntry:
        entry = reg.get(model_id)
        if entry is None:
            raise ApiError(404, "unknown_model", f"no model with id {model_id!r}")
        return entry

    @app.post("/models")
    async def create_model(data: UploadFile = File(...),
                           schema_file: UploadFile = File(..., alias="schema"),
                           options: str = Form("{}")):
        data_bytes = await data.read()
        schema_bytes = await schema_file.read()
        try:
            opts = json.loads(options) if options else {}
        except json.JSONDecodeError as exc:
            raise ApiError(400, "bad_options", "options field is not valid JSON",
                           detail=str(exc)) from exc
        digest = hashlib.sha256()
        digest.update(data_bytes)
        digest.update(schema_bytes)
        digest.update(json.dumps(opts, sort_keys=True).encode())
        model_id = digest.hexdigest()[:16]

        existing = reg.get(model_id)
        if existing is not None:
            return _json_response(_created_body(existing), status=200)

        try:
            feature_schema = FeatureSchema.from_dict(json.loads(schema_bytes.decode("utf-8")))
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ApiError(400, "bad_schema", "schema file is not valid JSON",
                           detail=str(exc)) from exc
        except FcmBiasError as exc:
            raise ApiError(400, "schema_error", str(exc)) from exc
        try:
            with tempfile.NamedTemporaryFile(suffix=".csv", delete=False) as tmp:
                tmp.write(data_bytes)
                tmp_path = tmp.name
            dataset = build_dataset(tmp_path, feature_schema,
                                    delimiter=opts.get("delimiter", ","),
                                    missing_policy=opts.get("missingPolicy", "drop"))
            matrix = build_weight_matrix(dataset, diagonal=opts.get("diagonal", "zero"))
        except FcmBiasError as exc:
            raise ApiError(400, "ingest_error", str(exc)) from exc
        except ValueError as exc:
            raise ApiError(400, "bad_options", str(exc)) from exc
        finally:
            Path(tmp_path).unlink(missing_ok=True)

        entry = ModelEntry(model_id=model_id, schema=feature_schema, matrix=matrix,
                           weights_bytes=io.canonical_json_bytes(io.weight_matrix_to_dict(matrix)))
        reg.register(entry)
        return _json_response(_created_body(entry), status=201)

    def _created_body(entry: ModelEntry) -> bytes:
        return io.canonical_json_bytes({
            "modelId": entry.model_id,
            "conceptNames": list(entry.matrix.concept_names),
            "warnings": list(entry.matrix.warnings),
        })

    @app.get("/models/{model_id}/weights")
    async def get_weights(model_id: str, format: str | None = None):
        entry = _entry_or_404(model_id)
        if format == "edges":
            return _json_response(io.canonical_json_bytes(
                {"edges": io.edges_to_list(entry.matrix)}))
        return _json_response(entry.weights_bytes)

    @app.post("/models/{model_id}/simulate")
    async def simulate(model_id: str, request: Request):
        entry = _entry_or_404(model_id)
        body = await _json_body(request)
        initial = body.get("initial", {})
        if not isinstance(initial, dict):
            raise ApiError(422, "bad_initial", "initial must be a {concept: value} map")
        matrix = entry.matrix
        protected = set(matrix.protected)
        a0 = np.zeros(matrix.size)
        for name, value in initial.items():
            if name not in matrix.concept_names:
                raise ApiError(422, "unknown_concept", f"unknown concept {name!r}")
            if name in protected:
                raise ApiError(422, "protected_concept",
                               f"concept {name!r} is protected and cannot be activated")
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise ApiError(422, "value_out_of_range",
                               f"initial value for {name!r} must be in [0, 1], got {value}")
            a0[matrix.index(name)] = value
        config = _config_from_body(body)
        trace = run(a0, matrix, config)
        payload = io.canonical_json_bytes({
            "trace": io.trace_to_dict(trace, config),
            "terminal": io.terminal_to_dict(trace.terminal),
            "protectedActivations": {
                name: float(trace.terminal_state[matrix.index(name)])
                for name in matrix.protected
            },
            "conceptNames": list(matrix.concept_names),
        })
        return _json_response(payload)

    @app.post("/models/{model_id}/sweep")
    async def sweep(model_id: str, request: Request):
        entry = _entry_or_404(model_id)
        body = await _json_body(request)
        phis = body.get("phis")
        if not isinstance(phis, list) or not phis:
            raise ApiError(422, "bad_phis", "phis must be a non-empty list")
        try:
            spec = ScenarioSpec.from_dict(body.get("scenario", {}))
            if "seed" in body:
                spec = ScenarioSpec(activate=spec.activate, values=spec.values,
                                    count=spec.count, seed=int(body["seed"]),
                                    subset_size=spec.subset_size)
            config = _config_from_body(body)
            reports = phi_sweep(spec, entry.matrix, config, [float(p) for p in phis])
        except FcmBiasError as exc:
            raise ApiError(422, "scenario_error", str(exc)) from exc
        except ValueError as exc:
            raise ApiError(422, "bad_request", str(exc)) from exc
        return _json_response(io.canonical_json_bytes(
            io.sweep_to_dict(reports, seed=spec.seed, manifest=None)))

    async def _json_body(request: Request) -> dict:
        try:
            return await request.json()
        except json.JSONDecodeError as exc:
            raise ApiError(422, "bad_json", "request body is not valid JSON",
                           detail=str(exc)) from exc

    def _config_from_body(body: dict) -> ReasoningConfig:
        try:
            return ReasoningConfig(
                phi=float(body.get("phi", 1.0)),
                max_iterations=int(body.get("iters", 20)),
                transfer=str(body.get("transfer", "rescaled")),
                slope=float(body.get("slope", 1.0)),
                epsilon=float(body.get("epsilon", 1e-8)),
            )
        except ValueError as exc:
            raise ApiError(422, "bad_config", str(exc)) from exc

    return app
