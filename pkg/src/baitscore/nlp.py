"""Tokenization, surface features, rule-based POS counting, and
lexicon-averaged sentiment."""
from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Mapping

from .resources import load_pos_lexicon, load_sentiment_lexicon, load_stopwords

PUNCT_CHARS = frozenset(string.punctuation) | frozenset("‘’“”«»…–—―‐‑‒¡¿·•´`")

WH_WORDS = frozenset({"who", "what", "when", "where", "why", "which", "whom", "whose", "how"})

ALLURING_PHRASES = (
    "click here",
    "exclusive",
    "won't believe",
    "happens next",
    "don't want",
    "you know",
)

NEGATORS = frozenset({"not", "no", "never", "n't"})

PENN_TAGS = (
    "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD", "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS",
    "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT",
    "WP", "WP$", "WRB",
)


@dataclass(frozen=True)
class TokenSeq:
    """Lowercased tokens for lexicon lookups; original-case forms kept for
    the POS capitalization rule."""

    tokens: tuple[str, ...]
    raw: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class SurfaceFeatures:
    stopword_count: int
    unique_punctuation_count: int
    has_digits: int
    has_wh_word: int
    has_alluring_phrase: int


@dataclass(frozen=True)
class SentimentScore:
    polarity: float
    subjectivity: float


def _norm_apostrophe(token: str) -> str:
    return token.replace("’", "'")


def tokenize(text: str) -> TokenSeq:
    """Split on whitespace, then peel leading/trailing punctuation off each
    chunk as separate single-character tokens. Hashtag and mention prefixes
    stay attached; interior punctuation (won't, 3.5) is untouched."""
    raw_tokens: list[str] = []
    for chunk in text.split():
        lead: list[str] = []
        while chunk and chunk[0] in PUNCT_CHARS:
            if chunk[0] in "#@" and len(chunk) > 1 and chunk[1].isalnum():
                break
            lead.append(chunk[0])
            chunk = chunk[1:]
        trail: list[str] = []
        while chunk and chunk[-1] in PUNCT_CHARS:
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        raw_tokens.extend(lead)
        if chunk:
            raw_tokens.append(chunk)
        raw_tokens.extend(reversed(trail))
    return TokenSeq(
        tokens=tuple(t.lower() for t in raw_tokens),
        raw=tuple(raw_tokens),
    )


def surface_features(text: str, tokens: TokenSeq, stopwords: frozenset[str] | None = None) -> SurfaceFeatures:
    """Stop-word and punctuation counts plus the three clickbait-style flags.

    The alluring-phrase check is a case-insensitive substring match on the raw
    text (curly apostrophes normalized) so multi-word phrases survive any
    tokenization.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    lowered = _norm_apostrophe(text.lower())
    stopword_count = sum(1 for t in tokens.tokens if _norm_apostrophe(t) in stopwords)
    unique_punct = len({ch for ch in text if ch in PUNCT_CHARS})
    has_digits = int(any(ch.isdigit() for ch in text))
    has_wh = int(any(t in WH_WORDS for t in tokens.tokens))
    has_alluring = int(any(phrase in lowered for phrase in ALLURING_PHRASES))
    return SurfaceFeatures(
        stopword_count=stopword_count,
        unique_punctuation_count=unique_punct,
        has_digits=has_digits,
        has_wh_word=has_wh,
        has_alluring_phrase=has_alluring,
    )


def _tag_token(lower: str, raw: str, lexicon: Mapping[str, str]) -> str:
    tag = lexicon.get(_norm_apostrophe(lower))
    if tag is not None:
        return tag
    if lower.isdigit():
        return "CD"
    if lower.endswith("ing"):
        return "VBG"
    if lower.endswith("ly"):
        return "RB"
    if lower.endswith("ed"):
        return "VBD"
    if lower.endswith("s") and len(lower) > 3:
        return "NNS"
    if raw[:1].isupper():
        return "NNP"
    return "NN"


def pos_counts(
    tokens: TokenSeq,
    lexicon: Mapping[str, str] | None = None,
    tag_set: tuple[str, ...] = PENN_TAGS,
) -> dict[str, int]:
    """Token counts per POS tag: lexicon lookup, then suffix/shape fallback
    rules, default NN. Every token lands in exactly one tag of the set."""
    if lexicon is None:
        lexicon = load_pos_lexicon()
    counts = {tag: 0 for tag in tag_set}
    for lower, raw in zip(tokens.tokens, tokens.raw):
        tag = _tag_token(lower, raw, lexicon)
        if tag not in counts:
            tag = "NN"
        counts[tag] += 1
    return counts


def sentiment(
    tokens: TokenSeq,
    lexicon: Mapping[str, tuple[float, float]] | None = None,
) -> SentimentScore:
    """Mean polarity/subjectivity over lexicon hits; a negator within the two
    preceding tokens multiplies that hit's polarity by -0.5. No hits -> (0, 0)."""
    if lexicon is None:
        lexicon = load_sentiment_lexicon()
    toks = [_norm_apostrophe(t) for t in tokens.tokens]
    polarities: list[float] = []
    subjectivities: list[float] = []
    for i, t in enumerate(toks):
        entry = lexicon.get(t)
        if entry is None:
            continue
        pol, sub = entry
        window = toks[max(0, i - 2):i]
        if any(w in NEGATORS or w.endswith("n't") for w in window):
            pol *= -0.5
        polarities.append(pol)
        subjectivities.append(sub)
    if not polarities:
        return SentimentScore(0.0, 0.0)
    polarity = sum(polarities) / len(polarities)
    polarity = max(-1.0, min(1.0, polarity))
    subjectivity = sum(subjectivities) / len(subjectivities)
    return SentimentScore(polarity=polarity, subjectivity=subjectivity)
