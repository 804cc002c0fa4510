"""FastAPI application implementing the analyzer's remote provider protocol.

Error contract: 400 for malformed request bodies, 422 when an entity has
no occurrence in the supplied context, 503 while no model is loaded.
The service keeps no per-request state.
"""

from __future__ import annotations

from typing import List, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import ServiceConfig
from .model import EntityNotFound, ModelBackend

SERVICE_NAME = "semantic-sidecar"


class SentencePair(BaseModel):
    a: str
    b: str


class NspRequest(BaseModel):
    pairs: List[SentencePair]


class EmbedRequest(BaseModel):
    context: str
    entities: List[str]


def create_app(config: Optional[ServiceConfig] = None,
               backend: Optional[ModelBackend] = None) -> FastAPI:
    """Build the service; a preloaded ``backend`` wins over ``config``."""
    app = FastAPI(title=SERVICE_NAME)
    if backend is None and config is not None:
        backend = ModelBackend(config)
    app.state.backend = backend

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request,
                             exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400,
                            content={"detail": exc.errors()})

    def require_backend() -> ModelBackend:
        if app.state.backend is None:
            raise HTTPException(status_code=503, detail="model not loaded")
        return app.state.backend

    @app.get("/v1/health")
    def health() -> dict:
        be = require_backend()
        return {"name": SERVICE_NAME, "dim": be.dim, "model": be.model_id}

    @app.post("/v1/nsp")
    def nsp(body: NspRequest) -> dict:
        be = require_backend()
        for i, pair in enumerate(body.pairs):
            if not pair.a.strip() or not pair.b.strip():
                raise HTTPException(status_code=400,
                                    detail=f"pair {i} has an empty sentence")
        scores = be.nsp_scores([(p.a, p.b) for p in body.pairs])
        return {"scores": scores}

    @app.post("/v1/embed")
    def embed(body: EmbedRequest) -> dict:
        be = require_backend()
        if not body.context.strip():
            raise HTTPException(status_code=400, detail="empty context")
        try:
            vectors = be.embed(body.context, body.entities)
        except EntityNotFound as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return {"vectors": vectors, "dim": be.dim}

    return app
