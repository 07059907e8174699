"""One scoring code path for both the CLI and the HTTP service: request in,
synthetic instance, feature assembly, preprocessing, model probability out."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .corpus import LabeledInstance
from .embed import EmbeddingTable
from .features import FeatureExtractor, SchemaMismatchError, apply_preprocessor
from .persist import ModelBundle


@dataclass
class ScoreRequest:
    post_text: str
    target_title: str = ""
    target_description: str = ""
    target_paragraphs: list[str] = field(default_factory=list)
    target_keywords: str = ""
    target_captions: list[str] = field(default_factory=list)
    num_images: int | None = None
    num_paragraphs: int | None = None
    include_features: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreRequest":
        return cls(
            post_text=str(data.get("postText", "")),
            target_title=str(data.get("targetTitle", "")),
            target_description=str(data.get("targetDescription", "")),
            target_paragraphs=[str(p) for p in data.get("targetParagraphs", [])],
            target_keywords=str(data.get("targetKeywords", "")),
            target_captions=[str(c) for c in data.get("targetCaptions", [])],
            num_images=data.get("numImages"),
            num_paragraphs=data.get("numParagraphs"),
            include_features=bool(data.get("includeFeatures", False)),
        )


class Scorer:
    """Wraps a loaded model bundle and a resident embedding table; stateless
    per request, safe to share across threads."""

    def __init__(self, bundle: ModelBundle, table: EmbeddingTable):
        self.bundle = bundle
        self.table = table
        self.extractor = FeatureExtractor(table, sentinels=bundle.schema.sentinels)
        if self.extractor.schema.version != bundle.schema.version:
            raise SchemaMismatchError(
                "feature code produces schema "
                f"{self.extractor.schema.version}, model was trained against "
                f"{bundle.schema.version}"
            )

    def score(self, req: ScoreRequest) -> dict:
        if not req.post_text.strip():
            raise ValueError("postText must be non-empty")
        started = time.perf_counter()
        inst = LabeledInstance(
            id="request",
            postText=[req.post_text],
            targetTitle=req.target_title,
            targetDescription=req.target_description,
            targetParagraphs=list(req.target_paragraphs),
            targetKeywords=req.target_keywords,
            targetCaptions=list(req.target_captions),
        )
        overrides = {}
        if req.num_images is not None:
            overrides["count_targetCaptions"] = float(req.num_images)
        if req.num_paragraphs is not None:
            overrides["count_targetParagraphs"] = float(req.num_paragraphs)
        fv = self.extractor.assemble(inst, overrides=overrides)
        x = apply_preprocessor(self.bundle.preprocessor, fv.values, schema=fv.schema)
        probability = float(self.bundle.predict(x))
        latency_ms = (time.perf_counter() - started) * 1000.0
        response = {
            "probability": probability,
            "label": "clickbait" if probability >= 0.5 else "no-clickbait",
            "modelType": self.bundle.model_type,
            "latencyMs": latency_ms,
        }
        if req.include_features:
            response["featureEcho"] = {
                name: float(v) for name, v in zip(fv.schema.names, fv.values)
            }
        return response
