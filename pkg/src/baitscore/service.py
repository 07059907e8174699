"""Warm HTTP scoring service. Model, embeddings, and lexicons load once at
startup and are shared read-only across concurrent requests, which is what
turns the minutes-long cold path into a sub-second warm one."""
from __future__ import annotations

import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .embed import load_embeddings
from .persist import load_model
from .scorer import Scorer, ScoreRequest

logger = logging.getLogger(__name__)


class ScoreRequestBody(BaseModel):
    postText: str = Field(min_length=1, description="the social media post under judgment")
    targetTitle: str = ""
    targetDescription: str = ""
    targetParagraphs: list[str] = []
    targetKeywords: str = ""
    targetCaptions: list[str] = []
    numImages: int | None = Field(default=None, ge=0)
    numParagraphs: int | None = Field(default=None, ge=0)
    includeFeatures: bool = False


class ScoreResponseBody(BaseModel):
    probability: float
    label: str
    modelType: str
    latencyMs: float
    featureEcho: dict[str, float] | None = None


def create_app(model_path, embeddings_path, dimension: int = 50, frontend_dir=None) -> FastAPI:
    bundle = load_model(model_path)
    table = load_embeddings(embeddings_path, dimension)
    scorer = Scorer(bundle, table)
    logger.info(
        "loaded %s model and %d embedding vectors (dim %d)",
        bundle.model_type, len(table), table.dimension,
    )

    app = FastAPI(title="baitscore", version="0.1.0")

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "modelType": bundle.model_type,
            "embeddingDim": table.dimension,
        }

    @app.get("/schema")
    def schema():
        return {
            "featureNames": list(bundle.schema.names),
            "sentinels": bundle.schema.sentinels,
            "pruned": list(bundle.schema.pruned),
            "schemaVersion": bundle.schema.version,
            "model": {
                "type": bundle.model_type,
                "metadata": bundle.metadata,
            },
        }

    @app.post("/score", response_model=ScoreResponseBody, response_model_exclude_none=True)
    def score(body: ScoreRequestBody):
        try:
            result = scorer.score(
                ScoreRequest(
                    post_text=body.postText,
                    target_title=body.targetTitle,
                    target_description=body.targetDescription,
                    target_paragraphs=body.targetParagraphs,
                    target_keywords=body.targetKeywords,
                    target_captions=body.targetCaptions,
                    num_images=body.numImages,
                    num_paragraphs=body.numParagraphs,
                    include_features=body.includeFeatures,
                )
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return result

    @app.exception_handler(Exception)
    def unhandled(request, exc):
        logger.exception("request failed")
        return JSONResponse(status_code=500, content={"error": {"message": str(exc)}})

    if frontend_dir and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
