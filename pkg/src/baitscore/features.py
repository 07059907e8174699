"""Assembles the full named feature vector per corpus instance and fits the
prune/standardize preprocessing used by the linear model path.

Vector layout, in fixed order: six sentence-vector blocks, nine word-mover
distances, nine sentiment scalars, nine cosines, two Jaccards, five counts,
three flags, and the POS-tag counts. 373 features with 50-d vectors and the
default 36-tag set.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import embed, nlp
from .corpus import LabeledInstance
from .resources import load_pos_lexicon, load_sentiment_lexicon, load_stopwords

logger = logging.getLogger(__name__)

FIELDS = (
    "postText",
    "targetCaptions",
    "targetDescription",
    "targetKeywords",
    "targetParagraphs",
    "targetTitle",
)

WMD_PAIRS = (
    ("postText", "targetTitle"),
    ("postText", "targetDescription"),
    ("postText", "targetParagraphs"),
    ("postText", "targetKeywords"),
    ("postText", "targetCaptions"),
    ("targetTitle", "targetDescription"),
    ("targetTitle", "targetParagraphs"),
    ("targetTitle", "targetKeywords"),
    ("targetTitle", "targetCaptions"),
)

COSINE_PAIRS = (
    ("postText", "targetTitle"),
    ("postText", "targetDescription"),
    ("postText", "targetParagraphs"),
    ("postText", "targetKeywords"),
    ("postText", "targetCaptions"),
    ("targetDescription", "targetTitle"),
    ("targetParagraphs", "targetTitle"),
    ("targetKeywords", "targetTitle"),
    ("targetCaptions", "targetTitle"),
)

POLARITY_FIELDS = ("postText", "targetCaptions", "targetDescription", "targetParagraphs", "targetTitle")
SUBJECTIVITY_FIELDS = ("targetCaptions", "targetDescription", "targetParagraphs", "targetTitle")
JACCARD_PAIRS = (("postText", "targetTitle"), ("postText", "targetDescription"))

COUNT_NAMES = (
    "count_targetCaptions",
    "count_targetParagraphs",
    "count_stopwords_postText",
    "count_unique_punct_postText",
    "count_postMedia",
)

FLAG_NAMES = ("has_digits_postText", "has_wh_word_postText", "has_alluring_phrase_postText")

ZERO_FRACTION_LIMIT = 0.90
CORRELATION_LIMIT = 0.90


class SchemaMismatchError(Exception):
    """Feature vector or model built against a different schema version."""


def build_feature_names(dimension: int, tag_set: Sequence[str] = nlp.PENN_TAGS) -> tuple[str, ...]:
    names: list[str] = []
    for f in FIELDS:
        names.extend(f"embed_{f}_{d}" for d in range(dimension))
    names.extend(f"wmd_{a}_{b}" for a, b in WMD_PAIRS)
    names.extend(f"polarity_{f}" for f in POLARITY_FIELDS)
    names.extend(f"subjectivity_{f}" for f in SUBJECTIVITY_FIELDS)
    names.extend(f"cosine_{a}_{b}" for a, b in COSINE_PAIRS)
    names.extend(f"jaccard_{a}_{b}" for a, b in JACCARD_PAIRS)
    names.extend(COUNT_NAMES)
    names.extend(FLAG_NAMES)
    names.extend(f"pos_{tag}" for tag in tag_set)
    return tuple(names)


@dataclass
class FeatureSchema:
    names: tuple[str, ...]
    sentinels: dict[str, float] = field(default_factory=dict)
    pruned: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("feature names must be unique")

    @property
    def version(self) -> str:
        digest = hashlib.sha256("\n".join(self.names).encode("utf-8")).hexdigest()
        return digest[:16]

    def index_of(self, name: str) -> int:
        return self.names.index(name)

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "sentinels": dict(self.sentinels),
            "pruned": list(self.pruned),
            "version": self.version,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSchema":
        return cls(
            names=tuple(data["names"]),
            sentinels={k: float(v) for k, v in data.get("sentinels", {}).items()},
            pruned=tuple(data.get("pruned", ())),
        )


@dataclass
class FeatureVector:
    schema: FeatureSchema
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != len(self.schema.names):
            raise ValueError("value length does not match schema")


def field_texts(inst: LabeledInstance) -> dict[str, str]:
    """One text per feature field; list fields joined with single spaces."""
    return {
        "postText": " ".join(inst.postText),
        "targetCaptions": " ".join(inst.targetCaptions),
        "targetDescription": inst.targetDescription,
        "targetKeywords": inst.targetKeywords,
        "targetParagraphs": " ".join(inst.targetParagraphs),
        "targetTitle": inst.targetTitle,
    }


class FeatureExtractor:
    """Holds the embedding table, lexicons, and schema; turns instances into
    feature vectors. Immutable resources make it shareable across threads."""

    def __init__(
        self,
        table: embed.EmbeddingTable,
        sentiment_lexicon: Mapping[str, tuple[float, float]] | None = None,
        pos_lexicon: Mapping[str, str] | None = None,
        stopwords: frozenset[str] | None = None,
        tag_set: Sequence[str] = nlp.PENN_TAGS,
        sentinels: Mapping[str, float] | None = None,
        use_prefilter: bool = True,
        max_doc_tokens: int = embed.MAX_DOC_TOKENS,
    ):
        self.table = table
        self.sentiment_lexicon = sentiment_lexicon if sentiment_lexicon is not None else load_sentiment_lexicon()
        self.pos_lexicon = pos_lexicon if pos_lexicon is not None else load_pos_lexicon()
        self.stopwords = stopwords if stopwords is not None else load_stopwords()
        self.tag_set = tuple(tag_set)
        self.use_prefilter = use_prefilter
        self.max_doc_tokens = max_doc_tokens
        self.schema = FeatureSchema(
            names=build_feature_names(table.dimension, self.tag_set),
            sentinels=dict(sentinels) if sentinels else {},
        )
        self._wmd_indices = {
            f"wmd_{a}_{b}": self.schema.names.index(f"wmd_{a}_{b}") for a, b in WMD_PAIRS
        }

    def default_sentinel(self) -> float:
        """Fallback for unfitted empty-document distances: an upper bound on
        any pairwise embedding distance, i.e. maximally distant."""
        return 2.0 * self.table.max_norm()

    def _assemble_raw(self, inst: LabeledInstance) -> np.ndarray:
        """Feature values with empty-document WMD cells left as NaN."""
        texts = field_texts(inst)
        tokens = {f: nlp.tokenize(texts[f]) for f in FIELDS}
        svecs = {f: embed.sentence_vector(tokens[f].tokens, self.table) for f in FIELDS}
        docs = {
            f: embed.nbow(tokens[f].tokens, self.table, max_tokens=self.max_doc_tokens)
            for f in FIELDS
        }

        values: list[float] = []
        for f in FIELDS:
            values.extend(svecs[f])
        for a, b in WMD_PAIRS:
            values.append(
                embed.wmd(docs[a], docs[b], self.table, empty_value=math.nan, prefilter=self.use_prefilter)
            )
        sentiments = {f: nlp.sentiment(tokens[f], self.sentiment_lexicon) for f in FIELDS}
        values.extend(sentiments[f].polarity for f in POLARITY_FIELDS)
        values.extend(sentiments[f].subjectivity for f in SUBJECTIVITY_FIELDS)
        for a, b in COSINE_PAIRS:
            values.append(embed.cosine(svecs[a], svecs[b]))
        for a, b in JACCARD_PAIRS:
            values.append(embed.jaccard(tokens[a].tokens, tokens[b].tokens))

        surface = nlp.surface_features(texts["postText"], tokens["postText"], self.stopwords)
        values.extend(
            [
                float(len(inst.targetCaptions)),
                float(len(inst.targetParagraphs)),
                float(surface.stopword_count),
                float(surface.unique_punctuation_count),
                float(len(inst.postMedia)),
            ]
        )
        values.extend(
            [
                float(surface.has_digits),
                float(surface.has_wh_word),
                float(surface.has_alluring_phrase),
            ]
        )
        pos = nlp.pos_counts(tokens["postText"], self.pos_lexicon, self.tag_set)
        values.extend(float(pos[tag]) for tag in self.tag_set)
        return np.array(values, dtype=np.float64)

    def assemble(
        self, inst: LabeledInstance, overrides: Mapping[str, float] | None = None
    ) -> FeatureVector:
        """Full feature vector for one instance; empty-document WMD cells get
        the schema sentinel (fitted maximum, or the table-wide fallback).

        overrides maps feature names to replacement values; the score form
        uses it for its explicit caption/paragraph counts.
        """
        values = self._assemble_raw(inst)
        for name, idx in self._wmd_indices.items():
            if math.isnan(values[idx]):
                values[idx] = self.schema.sentinels.get(name, self.default_sentinel())
        if overrides:
            for name, value in overrides.items():
                if name not in self.schema.names:
                    raise KeyError(f"unknown feature name {name!r}")
                values[self.schema.names.index(name)] = float(value)
        return FeatureVector(schema=self.schema, values=values)

    def featurize(self, corpus: Sequence[LabeledInstance], progress: bool = False) -> np.ndarray:
        """Feature matrix for a corpus. Fits the empty-document sentinels to
        the per-pair maximum observed distance and records them in the schema.
        """
        rows = []
        for k, inst in enumerate(corpus):
            rows.append(self._assemble_raw(inst))
            if progress and (k + 1) % 500 == 0:
                logger.info("featurized %d/%d instances", k + 1, len(corpus))
        matrix = np.stack(rows) if rows else np.zeros((0, len(self.schema.names)))
        for name, idx in self._wmd_indices.items():
            col = matrix[:, idx] if len(matrix) else np.zeros(0)
            finite = col[np.isfinite(col)]
            sentinel = float(finite.max()) if len(finite) else self.default_sentinel()
            self.schema.sentinels[name] = sentinel
            col[np.isnan(col)] = sentinel
        return matrix


@dataclass
class Preprocessor:
    """Column selection plus optional z-scoring, fitted on a training matrix."""

    kept_indices: tuple[int, ...]
    means: np.ndarray
    stds: np.ndarray
    standardize: bool
    schema_version: str

    def to_dict(self) -> dict:
        return {
            "keptIndices": list(self.kept_indices),
            "means": [float(x) for x in self.means],
            "stds": [float(x) for x in self.stds],
            "standardize": self.standardize,
            "schemaVersion": self.schema_version,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Preprocessor":
        return cls(
            kept_indices=tuple(int(i) for i in data["keptIndices"]),
            means=np.array(data["means"], dtype=np.float64),
            stds=np.array(data["stds"], dtype=np.float64),
            standardize=bool(data["standardize"]),
            schema_version=data["schemaVersion"],
        )


def _greedy_correlation_prune(X: np.ndarray, limit: float) -> list[int]:
    """Indices (into X's columns) surviving the pairwise-correlation scan.
    Columns are visited in order; a column correlated beyond the limit with
    any already-kept column is dropped (the later of the pair loses)."""
    n = X.shape[0]
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    Z = (X - mu) / sd
    corr = (Z.T @ Z) / n
    kept: list[int] = []
    for j in range(X.shape[1]):
        if all(abs(corr[i, j]) <= limit for i in kept):
            kept.append(j)
    return kept


def fit_preprocessor(matrix: np.ndarray, schema: FeatureSchema, for_linear_model: bool) -> Preprocessor:
    """Linear-model path: drop mostly-zero and zero-variance features, then
    greedily drop the later of any highly correlated pair, then fit z-scores.
    Other paths keep every feature untouched."""
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("fit requires at least 2 rows")
    d = X.shape[1]
    if d != len(schema.names):
        raise SchemaMismatchError("matrix width does not match schema")

    if not for_linear_model:
        return Preprocessor(
            kept_indices=tuple(range(d)),
            means=np.zeros(d),
            stds=np.ones(d),
            standardize=False,
            schema_version=schema.version,
        )

    zero_frac = (X == 0.0).mean(axis=0)
    variance = X.var(axis=0)
    survivors = np.flatnonzero((zero_frac <= ZERO_FRACTION_LIMIT) & (variance > 0.0))
    kept_local = _greedy_correlation_prune(X[:, survivors], CORRELATION_LIMIT)
    kept = survivors[kept_local]

    schema.pruned = tuple(schema.names[i] for i in range(d) if i not in set(kept.tolist()))
    means = X[:, kept].mean(axis=0)
    stds = X[:, kept].std(axis=0)
    return Preprocessor(
        kept_indices=tuple(int(i) for i in kept),
        means=means,
        stds=stds,
        standardize=True,
        schema_version=schema.version,
    )


def fit_standardizer(matrix: np.ndarray, schema: FeatureSchema) -> Preprocessor:
    """Keep-all z-scoring (zero-variance columns still pruned); the network
    training path uses this for optimization stability."""
    X = np.asarray(matrix, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise ValueError("fit requires at least 2 rows")
    if X.shape[1] != len(schema.names):
        raise SchemaMismatchError("matrix width does not match schema")
    kept = np.flatnonzero(X.var(axis=0) > 0.0)
    return Preprocessor(
        kept_indices=tuple(int(i) for i in kept),
        means=X[:, kept].mean(axis=0),
        stds=X[:, kept].std(axis=0),
        standardize=True,
        schema_version=schema.version,
    )


def apply_preprocessor(prep: Preprocessor, values: np.ndarray, schema: FeatureSchema | None = None) -> np.ndarray:
    """Select kept columns and z-score when the preprocessor standardizes."""
    if schema is not None and schema.version != prep.schema_version:
        raise SchemaMismatchError(
            f"schema version {schema.version} does not match preprocessor {prep.schema_version}"
        )
    X = np.asarray(values, dtype=np.float64)
    idx = list(prep.kept_indices)
    out = X[..., idx]
    if prep.standardize:
        out = (out - prep.means) / prep.stds
    return out


def write_features_csv(path, ids, labels, truth_means, matrix: np.ndarray, schema: FeatureSchema) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label", "truthMean", *schema.names])
        for i in range(len(ids)):
            writer.writerow([ids[i], labels[i], repr(float(truth_means[i])), *[repr(float(x)) for x in matrix[i]]])


def read_features_csv(path):
    """Returns (ids, labels, truth_means, matrix, names)."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["id", "label", "truthMean"]:
            raise ValueError(f"{path}: not a feature matrix CSV")
        names = tuple(header[3:])
        ids, labels, means, rows = [], [], [], []
        for row in reader:
            ids.append(row[0])
            labels.append(int(row[1]))
            means.append(float(row[2]))
            rows.append(np.array([float(x) for x in row[3:]], dtype=np.float64))
    matrix = np.stack(rows) if rows else np.zeros((0, len(names)))
    return ids, np.array(labels), np.array(means), matrix, names


def write_schema_json(schema: FeatureSchema, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(schema.to_dict(), fh, indent=2)


def read_schema_json(path) -> FeatureSchema:
    with open(path, encoding="utf-8") as fh:
        return FeatureSchema.from_dict(json.load(fh))
