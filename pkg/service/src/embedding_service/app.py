"""HTTP surface: POST /embed for token (or pooled sentence) embeddings and
GET /health for model identity, dimension, and readiness.

Floats are serialized with 8 significant digits; identical requests yield
byte-identical payloads because inference runs in eval mode on a fixed
model.
"""

from __future__ import annotations

import argparse
import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from .encoder import Encoder, NoTokensError, OverLengthError, TINY_SEEDED


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)
    pooling: str = "tokens"
    layer: int = -1

    @field_validator("texts")
    @classmethod
    def texts_non_empty(cls, value):
        if any(not text for text in value):
            raise ValueError("every text must be non-empty")
        return value

    @field_validator("pooling")
    @classmethod
    def pooling_known(cls, value):
        if value not in ("tokens", "sentence"):
            raise ValueError("pooling must be 'tokens' or 'sentence'")
        return value


def _round8(value: float) -> float:
    return float(f"{value:.8g}")


def create_app(model_id: str = TINY_SEEDED, defer_load: bool = False) -> FastAPI:
    lock = threading.Lock()

    def load(app: FastAPI) -> None:
        with lock:
            if app.state.encoder is None:
                app.state.encoder = Encoder(model_id)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if not defer_load:
            load(app)
        yield

    app = FastAPI(title="paraeval-embedding-service", lifespan=lifespan)
    app.state.encoder = None
    app.state.model_id = model_id

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": jsonable_encoder(exc.errors())})

    @app.get("/health")
    def health():
        encoder = app.state.encoder
        if encoder is None:
            return JSONResponse(
                status_code=503,
                content={"model_id": app.state.model_id, "dim": None, "status": "loading"},
            )
        return {"model_id": encoder.model_id, "dim": encoder.dim, "status": "ready"}

    @app.post("/embed")
    def embed(request: EmbedRequest):
        encoder = app.state.encoder
        if encoder is None:
            return JSONResponse(status_code=503, content={"detail": "model is loading"})
        try:
            encoder.check_layer(request.layer)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        try:
            encoded = encoder.encode(request.texts, request.pooling, request.layer)
        except OverLengthError as exc:
            return JSONResponse(status_code=413, content={"detail": str(exc)})
        except NoTokensError as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        return {
            "model_id": encoder.model_id,
            "dim": encoder.dim,
            "results": [
                {
                    "tokens": list(item.tokens),
                    "matrix": [[_round8(v) for v in row] for row in item.matrix],
                }
                for item in encoded
            ],
        }

    return app


def main() -> None:
    import uvicorn

    parser = argparse.ArgumentParser(description="token embedding service")
    parser.add_argument("--model", default=TINY_SEEDED,
                        help=f"model path or hub id (default: {TINY_SEEDED!r}, no downloads)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8023)
    args = parser.parse_args()
    uvicorn.run(create_app(args.model), host=args.host, port=args.port)


if __name__ == "__main__":
    main()
