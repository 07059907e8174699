"""Pretrained word vectors, sentence vectors, similarity measures, and
Word Mover's Distance over an exact transportation solve."""
from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .transport import greedy_feasible_shortcut, relaxed_lower_bound, solve_transport

logger = logging.getLogger(__name__)

# documents are capped at this many unique in-vocabulary tokens; the solver is
# exact up to this size and news paragraphs can exceed it
MAX_DOC_TOKENS = 500


class EmbeddingFormatError(Exception):
    """Bad pretrained-vector file."""


@dataclass
class EmbeddingTable:
    dimension: int
    entries: dict[str, np.ndarray]
    duplicate_count: int = 0
    _max_norm: float | None = field(default=None, repr=False)

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def get(self, token: str):
        return self.entries.get(token)

    def __len__(self) -> int:
        return len(self.entries)

    def max_norm(self) -> float:
        """Largest vector norm in the table (cached); 2x this bounds any
        pairwise Euclidean distance, which makes a principled fallback
        sentinel for empty-document distances."""
        if self._max_norm is None:
            norms = [float(np.linalg.norm(v)) for v in self.entries.values()]
            self._max_norm = max(norms) if norms else 0.0
        return self._max_norm


def load_embeddings(path, dimension: int) -> EmbeddingTable:
    """Load a text file of one `token c1 ... cD` entry per line.

    Duplicate tokens: last wins, counted and warned. A line with the wrong
    component count raises EmbeddingFormatError naming the line.
    """
    entries: dict[str, np.ndarray] = {}
    duplicates = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != dimension + 1:
                raise EmbeddingFormatError(
                    f"{path}: line {lineno}: expected {dimension} components, got {len(parts) - 1}"
                )
            token = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}: line {lineno}: {exc}") from exc
            if token in entries:
                duplicates += 1
            entries[token] = vec
    if duplicates:
        logger.warning("%s: %d duplicate tokens, last occurrence kept", path, duplicates)
    return EmbeddingTable(dimension=dimension, entries=entries, duplicate_count=duplicates)


def sentence_vector(tokens: Sequence[str], table: EmbeddingTable) -> np.ndarray:
    """Per-dimension median over in-vocabulary token vectors; zero vector when
    nothing is in vocabulary."""
    vecs = [table.entries[t] for t in tokens if t in table.entries]
    if not vecs:
        return np.zeros(table.dimension)
    return np.median(np.stack(vecs), axis=0)


def cosine(u, v) -> float:
    """Cosine similarity; 0 by convention when either vector has zero norm."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


def jaccard(a: Sequence[str], b: Sequence[str]) -> float:
    """|set(a) & set(b)| / |set(a) | set(b)|; 0 when both are empty."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


@dataclass
class NbowDoc:
    """Normalized bag of words: unique in-vocabulary tokens with frequency
    weights summing to 1. The mass distribution moved by WMD."""

    tokens: tuple[str, ...]
    weights: np.ndarray

    @property
    def is_empty(self) -> bool:
        return len(self.tokens) == 0


def nbow(tokens: Sequence[str], table: EmbeddingTable, max_tokens: int = MAX_DOC_TOKENS) -> NbowDoc:
    """Drop out-of-vocabulary tokens and normalize the rest to unit mass.

    Documents with more than max_tokens unique tokens keep the most frequent
    ones (ties to earliest occurrence) and renormalize.
    """
    order: list[str] = []
    counts: Counter[str] = Counter()
    for t in tokens:
        if t in table.entries:
            if t not in counts:
                order.append(t)
            counts[t] += 1
    if not order:
        return NbowDoc(tokens=(), weights=np.zeros(0))
    if len(order) > max_tokens:
        first_pos = {t: k for k, t in enumerate(order)}
        order = sorted(order, key=lambda t: (-counts[t], first_pos[t]))[:max_tokens]
        order.sort(key=lambda t: first_pos[t])
    weights = np.array([counts[t] for t in order], dtype=float)
    weights /= weights.sum()
    return NbowDoc(tokens=tuple(order), weights=weights)


def _cost_matrix(a: NbowDoc, b: NbowDoc, table: EmbeddingTable) -> np.ndarray:
    """Pairwise Euclidean distances between the docs' token embeddings.

    Uses the difference form (exact zero for identical vectors, which the
    wmd(a, a) == 0 invariant needs), chunked over rows to bound memory.
    """
    X = np.stack([table.entries[t] for t in a.tokens])
    Y = np.stack([table.entries[t] for t in b.tokens])
    m = X.shape[0]
    chunk = max(1, 2_000_000 // (Y.shape[0] * Y.shape[1] + 1))
    out = np.empty((m, Y.shape[0]))
    for start in range(0, m, chunk):
        stop = min(start + chunk, m)
        diff = X[start:stop, None, :] - Y[None, :, :]
        out[start:stop] = np.sqrt(np.sum(diff * diff, axis=2))
    return out


def wmd(
    a: NbowDoc,
    b: NbowDoc,
    table: EmbeddingTable,
    empty_value: float = math.nan,
    prefilter: bool = True,
) -> float:
    """Word Mover's Distance: minimum cost of transporting a's word mass to
    b's, per-unit cost being embedding-space Euclidean distance.

    Either document empty returns empty_value (callers configure a sentinel).
    With prefilter on, a greedy plan that happens to be feasible is accepted
    without a simplex solve (it attains the lower bound, hence is optimal).
    """
    if a.is_empty or b.is_empty:
        return empty_value
    C = _cost_matrix(a, b, table)
    if prefilter:
        shortcut = greedy_feasible_shortcut(C, a.weights, b.weights)
        if shortcut is not None:
            return shortcut
    cost, _ = solve_transport(C, a.weights, b.weights)
    return cost


def wmd_lower_bound(
    a: NbowDoc, b: NbowDoc, table: EmbeddingTable, empty_value: float = math.nan
) -> float:
    """Cheap bound below the exact WMD: max of the row- and column-relaxed
    transport costs. Tight for single-token documents."""
    if a.is_empty or b.is_empty:
        return empty_value
    C = _cost_matrix(a, b, table)
    return relaxed_lower_bound(C, a.weights, b.weights)
