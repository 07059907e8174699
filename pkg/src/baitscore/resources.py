"""Bundled lexicon loading: stop words, sentiment lexicon, POS lexicon.

Formats: stop words are newline-delimited UTF-8; the sentiment lexicon is CSV
`word,polarity,subjectivity`; the POS lexicon is TSV `word<TAB>tag`. All are
immutable after load and cached per process.
"""
from __future__ import annotations

import csv
from functools import lru_cache
from importlib import resources


def _data_path(name: str):
    return resources.files("baitscore").joinpath("data", name)


@lru_cache(maxsize=None)
def load_stopwords(path=None) -> frozenset[str]:
    source = path if path is not None else _data_path("stopwords.txt")
    with open(source, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


@lru_cache(maxsize=None)
def load_sentiment_lexicon(path=None) -> dict[str, tuple[float, float]]:
    source = path if path is not None else _data_path("sentiment_lexicon.csv")
    lexicon: dict[str, tuple[float, float]] = {}
    with open(source, encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            lexicon[row["word"].strip().lower()] = (
                float(row["polarity"]),
                float(row["subjectivity"]),
            )
    return lexicon


@lru_cache(maxsize=None)
def load_pos_lexicon(path=None) -> dict[str, str]:
    source = path if path is not None else _data_path("pos_lexicon.tsv")
    lexicon: dict[str, str] = {}
    with open(source, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            word, tag = line.split("\t")
            lexicon[word.lower()] = tag
    return lexicon
