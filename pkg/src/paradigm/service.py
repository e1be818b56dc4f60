"""HTTP facade: model registry, substitution endpoint, neighbors, history.

All endpoints live under /api/v1. Startup is fail-fast: every configured
store, lexicon and provider is loaded and validated before the listener
binds; a broken config never serves traffic.
"""

from __future__ import annotations

import logging
import os
import sys
import threading
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from . import lexicon as lx
from . import typestore
from .errors import (
    ConfigError,
    EmptySentence,
    LayerModeMismatch,
    MultipleDefaultModels,
    NoDefaultModel,
    ProviderUnavailable,
    TooManyTokens,
)
from .history import QueryHistory
from .lexicon import FrequencyLexicon
from .provider import (
    EmbeddingRequest,
    HttpBridgeProvider,
    LayerMode,
    ReferenceEmbedder,
    StdioBridgeProvider,
)
from .substitute import QuerySpec, analyze, to_payload

log = logging.getLogger(__name__)

DEFAULT_BIND = "127.0.0.1:8642"
MAX_INFLIGHT_PER_MODEL = 4

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass
class ModelConfig:
    model_id: str
    display_name: str
    language: str
    provider_kind: str  # reference | bridge-stdio | bridge-http
    provider_dim: int
    provider_address: str = ""
    stores: dict[LayerMode, str] = field(default_factory=dict)
    lexicon_path: Optional[str] = None
    high_max_rank: int = lx.DEFAULT_HIGH_MAX_RANK
    mid_max_rank: int = lx.DEFAULT_MID_MAX_RANK
    default_n: int = 5
    is_default: bool = False


def load_config(path: str) -> list[ModelConfig]:
    """Parse and validate the TOML service configuration."""
    try:
        with open(path, "rb") as f:
            doc = tomllib.load(f)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config parse error in {path}: {e}") from e

    models = doc.get("model")
    if not models:
        raise ConfigError("config declares no [[model]] tables")
    base = os.path.dirname(os.path.abspath(path))

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    configs = []
    seen_ids = set()
    for entry in models:
        try:
            provider = entry["provider"]
            kind = provider["kind"]
            if kind not in ("reference", "bridge-stdio", "bridge-http"):
                raise ConfigError(f"unknown provider kind {kind!r}")
            stores = {
                LayerMode.parse(mode): resolve(p)
                for mode, p in entry["stores"].items()
            }
            if not stores:
                raise ConfigError(f"model {entry['id']!r} declares no stores")
            cfg = ModelConfig(
                model_id=entry["id"],
                display_name=entry.get("display_name", entry["id"]),
                language=entry.get("language", "en"),
                provider_kind=kind,
                provider_dim=int(provider["dim"]),
                provider_address=provider.get("address", provider.get("command", "")),
                stores=stores,
                lexicon_path=resolve(entry["lexicon"]) if "lexicon" in entry else None,
                high_max_rank=int(entry.get("tier_high_max_rank", lx.DEFAULT_HIGH_MAX_RANK)),
                mid_max_rank=int(entry.get("tier_mid_max_rank", lx.DEFAULT_MID_MAX_RANK)),
                default_n=int(entry.get("default_n", 5)),
                is_default=bool(entry.get("default", False)),
            )
        except (KeyError, ValueError) as e:
            raise ConfigError(f"bad model entry: {e}") from e
        if cfg.model_id in seen_ids:
            raise ConfigError(f"duplicate model id {cfg.model_id!r}")
        seen_ids.add(cfg.model_id)
        configs.append(cfg)

    defaults = [c for c in configs if c.is_default]
    if not defaults:
        raise NoDefaultModel("no model is marked default")
    if len(defaults) > 1:
        raise MultipleDefaultModels(
            f"models {[c.model_id for c in defaults]} all claim default")
    return configs


class ModelRuntime:
    """A fully loaded model: stores, lexicon, provider, concurrency gate."""

    def __init__(self, config: ModelConfig):
        self.config = config
        self.stores = {mode: typestore.load(p) for mode, p in config.stores.items()}
        for mode, store in self.stores.items():
            if store.dim != config.provider_dim:
                raise ConfigError(
                    f"model {config.model_id!r}: store dim {store.dim} != "
                    f"provider dim {config.provider_dim} ({mode.value})")
            if store.layer_mode is not mode:
                raise ConfigError(
                    f"model {config.model_id!r}: store for {mode.value} was "
                    f"built in {store.layer_mode.value} mode")
        if config.lexicon_path:
            self.lexicon = lx.load_freq_dict(
                config.lexicon_path, config.high_max_rank, config.mid_max_rank)
        else:
            # no dictionary supplied: tier from store counts
            any_store = next(iter(self.stores.values()))
            self.lexicon = FrequencyLexicon.from_counts(
                dict(zip(any_store.words, any_store.frequencies)),
                config.high_max_rank, config.mid_max_rank)
        if config.provider_kind == "reference":
            self.provider = ReferenceEmbedder(config.provider_dim)
        elif config.provider_kind == "bridge-stdio":
            self.provider = StdioBridgeProvider(config.provider_address,
                                                config.provider_dim)
        else:
            self.provider = HttpBridgeProvider(config.provider_address,
                                               config.provider_dim)
        self.closed_class = lx.load_closed_class(config.language)
        self.gate = threading.Semaphore(MAX_INFLIGHT_PER_MODEL)


class ServiceState:
    def __init__(self, configs: list[ModelConfig],
                 history_capacity: int = 10):
        self.models = {c.model_id: ModelRuntime(c) for c in configs}
        self.default_id = next(c.model_id for c in configs if c.is_default)
        self.history = QueryHistory(history_capacity)


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def _result_payload(result, model_id: str) -> dict:
    payload = to_payload(result)
    payload["model"] = model_id
    payload["timestamp"] = result.timestamp.isoformat()
    return payload


def create_app(state: ServiceState,
               cors_origins: Optional[list[str]] = None) -> FastAPI:
    app = FastAPI(title="paradigm", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.engine = state

    @app.get("/api/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/api/v1/models")
    def models():
        out = []
        for model_id, rt in state.models.items():
            out.append({
                "id": model_id,
                "display_name": rt.config.display_name,
                "language": rt.config.language,
                "layer_modes": sorted(m.value for m in rt.stores),
                "dim": rt.config.provider_dim,
                "default": model_id == state.default_id,
                "default_n": rt.config.default_n,
                "store_metadata": {
                    m.value: rt.stores[m].metadata for m in rt.stores
                },
            })
        return {"models": out}

    @app.post("/api/v1/substitutes")
    async def substitutes(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "body is not valid JSON")
        if not isinstance(body, dict) or not isinstance(body.get("sentence"), str):
            return _error(400, "body must be an object with a 'sentence' string")

        model_id = body.get("model", state.default_id)
        rt = state.models.get(model_id)
        if rt is None:
            return _error(404, f"unknown model {model_id!r}")

        mode_label = body.get("layer_mode", "top")
        try:
            mode = LayerMode.parse(mode_label)
        except ValueError:
            return _error(400, f"unknown layer_mode {mode_label!r}")
        store = rt.stores.get(mode)
        if store is None:
            return _error(422, f"model {model_id!r} has no {mode.value}-mode store")

        n = body.get("n", rt.config.default_n)
        try:
            query = QuerySpec(sentence=body["sentence"], model_id=model_id,
                              layer_mode=mode, n=int(n),
                              exclude_self=bool(body.get("exclude_self", False)))
        except (EmptySentence, ValueError, TypeError) as e:
            return _error(400, str(e))

        def run():
            with rt.gate:
                return analyze(query, store, rt.lexicon, rt.provider,
                               closed_class=rt.closed_class)

        try:
            result = await run_in_threadpool(run)
        except ProviderUnavailable as e:
            return _error(502, str(e))
        except (EmptySentence, TooManyTokens) as e:
            return _error(400, str(e))
        except LayerModeMismatch as e:
            return _error(422, str(e))
        state.history.push(result)
        return _result_payload(result, model_id)

    @app.get("/api/v1/neighbors")
    def neighbors(model: Optional[str] = None, word: str = "", topn: int = 10):
        model_id = model or state.default_id
        rt = state.models.get(model_id)
        if rt is None:
            return _error(404, f"unknown model {model_id!r}")
        if not word.strip():
            return _error(400, "word must be non-empty")
        if topn < 1:
            return _error(400, "topn must be positive")
        mode = LayerMode.TOP if LayerMode.TOP in rt.stores else LayerMode.AVERAGE
        store = rt.stores[mode]
        low = word.strip().lower()
        try:
            with rt.gate:
                response = rt.provider.embed_tokens(
                    EmbeddingRequest((low,), mode))
        except ProviderUnavailable as e:
            return _error(502, str(e))
        hits = typestore.topk(store, response.vectors[0], topn)
        return {
            "model": model_id,
            "word": low,
            "layer_mode": mode.value,
            "tier": lx.tier(rt.lexicon, low).value,
            "frequency": rt.lexicon.frequency(low),
            "neighbors": [
                {"word": nb.word, "similarity": nb.similarity,
                 "tier": lx.tier(rt.lexicon, nb.word).value}
                for nb in hits
            ],
        }

    @app.get("/api/v1/history")
    def history(limit: int = 10):
        if limit < 1:
            return _error(400, "limit must be positive")
        entries = state.history.recent(limit)
        return {"history": [
            _result_payload(r, r.query.model_id) for r in entries
        ]}

    return app


def build_app_from_config(path: str,
                          cors_origins: Optional[list[str]] = None) -> FastAPI:
    configs = load_config(path)
    return create_app(ServiceState(configs), cors_origins)


def serve(config_path: Optional[str] = None, bind: Optional[str] = None):
    """Blocking entry point used by the CLI serve subcommand."""
    import uvicorn

    path = os.environ.get("PARADIGM_CONFIG", config_path)
    if not path:
        raise ConfigError("no config: pass --config or set PARADIGM_CONFIG")
    app = build_app_from_config(path)
    hostport = bind or os.environ.get("PARADIGM_BIND", DEFAULT_BIND)
    host, _, port = hostport.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
