"""Clickbait Challenge 2017 corpus handling.

Parses the two JSONL files (instances.jsonl, truth.jsonl), merges them on id,
encodes labels (clickbait -> 1), splits train/test, and builds the EDA group
tables (images, weekday, keywords, captions).
"""
from __future__ import annotations

import csv
import datetime
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

WEEKDAY_ORDER = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]

_MONTHS = {
    "Jan": 1, "Feb": 2, "Mar": 3, "Apr": 4, "May": 5, "Jun": 6,
    "Jul": 7, "Aug": 8, "Sep": 9, "Oct": 10, "Nov": 11, "Dec": 12,
}

EDA_GROUPERS = ("imageCount", "weekday", "keywordCount", "captionCount")

# keyword/caption tables only cover groups 0..10
EDA_COUNT_CAP = 10


class CorpusError(Exception):
    """Malformed corpus input."""


@dataclass
class Instance:
    id: str
    postText: list[str] = field(default_factory=list)
    postTimestamp: str = ""
    postMedia: list[str] = field(default_factory=list)
    targetTitle: str = ""
    targetDescription: str = ""
    targetKeywords: str = ""
    targetParagraphs: list[str] = field(default_factory=list)
    targetCaptions: list[str] = field(default_factory=list)


@dataclass
class TruthRecord:
    id: str
    truthJudgments: list[float]
    truthMean: float
    truthMedian: float
    truthMode: float
    truthClass: str


@dataclass
class LabeledInstance(Instance):
    truthJudgments: list[float] = field(default_factory=list)
    truthMean: float = 0.0
    truthMedian: float = 0.0
    truthMode: float = 0.0
    truthClass: str = ""
    label: int = 0


@dataclass
class EdaRow:
    groupKey: object
    clickbaitCount: int
    nonClickbaitCount: int

    @property
    def clickbaitPct(self) -> float:
        total = self.clickbaitCount + self.nonClickbaitCount
        return 100.0 * self.clickbaitCount / total


@dataclass
class MergeStats:
    unmatched_instances: int = 0
    unmatched_truths: int = 0


def _str_list(value) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ValueError(f"expected a list, got {type(value).__name__}")
    return [str(v) for v in value]


def _instance_from_obj(obj: dict) -> Instance:
    ident = str(obj.get("id", "")).strip()
    if not ident:
        raise ValueError("missing or empty id")
    return Instance(
        id=ident,
        postText=_str_list(obj.get("postText")),
        postTimestamp=str(obj.get("postTimestamp") or ""),
        postMedia=_str_list(obj.get("postMedia")),
        targetTitle=str(obj.get("targetTitle") or ""),
        targetDescription=str(obj.get("targetDescription") or ""),
        targetKeywords=str(obj.get("targetKeywords") or ""),
        targetParagraphs=_str_list(obj.get("targetParagraphs")),
        targetCaptions=_str_list(obj.get("targetCaptions")),
    )


def _truth_from_obj(obj: dict) -> TruthRecord:
    ident = str(obj.get("id", "")).strip()
    if not ident:
        raise ValueError("missing or empty id")
    judgments = obj.get("truthJudgments")
    if not isinstance(judgments, list) or not judgments:
        raise ValueError("truthJudgments missing or empty")
    truth_class = str(obj.get("truthClass", ""))
    if truth_class not in ("clickbait", "no-clickbait"):
        raise ValueError(f"unknown truthClass {truth_class!r}")
    return TruthRecord(
        id=ident,
        truthJudgments=[float(j) for j in judgments],
        truthMean=float(obj.get("truthMean", 0.0)),
        truthMedian=float(obj.get("truthMedian", 0.0)),
        truthMode=float(obj.get("truthMode", 0.0)),
        truthClass=truth_class,
    )


def _parse_jsonl(path, builder, lenient: bool):
    records = []
    skipped = 0
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip().lstrip("﻿")
            if not line:
                continue
            try:
                records.append(builder(json.loads(line)))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                if not lenient:
                    raise CorpusError(f"{path}: malformed line {lineno}: {exc}") from exc
                skipped += 1
    if skipped:
        logger.warning("%s: skipped %d malformed lines", path, skipped)
    return records


def parse_instances(path, lenient: bool = False) -> list[Instance]:
    """Parse instances.jsonl. Absent optional fields become empty values."""
    return _parse_jsonl(path, _instance_from_obj, lenient)


def parse_truth(path, lenient: bool = False) -> list[TruthRecord]:
    """Parse truth.jsonl."""
    return _parse_jsonl(path, _truth_from_obj, lenient)


def merge_corpus(
    instances: list[Instance], truths: list[TruthRecord]
) -> tuple[list[LabeledInstance], MergeStats]:
    """Inner-join instances and truths on id, preserving instance order.

    Raises CorpusError on duplicate ids within either input; ids present in
    only one input are dropped and counted in the returned stats.
    """
    truth_by_id: dict[str, TruthRecord] = {}
    for t in truths:
        if t.id in truth_by_id:
            raise CorpusError(f"duplicate id in truth input: {t.id}")
        truth_by_id[t.id] = t

    seen_instance_ids = set()
    merged: list[LabeledInstance] = []
    stats = MergeStats()
    for inst in instances:
        if inst.id in seen_instance_ids:
            raise CorpusError(f"duplicate id in instances input: {inst.id}")
        seen_instance_ids.add(inst.id)
        truth = truth_by_id.pop(inst.id, None)
        if truth is None:
            stats.unmatched_instances += 1
            continue
        merged.append(
            LabeledInstance(
                id=inst.id,
                postText=inst.postText,
                postTimestamp=inst.postTimestamp,
                postMedia=inst.postMedia,
                targetTitle=inst.targetTitle,
                targetDescription=inst.targetDescription,
                targetKeywords=inst.targetKeywords,
                targetParagraphs=inst.targetParagraphs,
                targetCaptions=inst.targetCaptions,
                truthJudgments=truth.truthJudgments,
                truthMean=truth.truthMean,
                truthMedian=truth.truthMedian,
                truthMode=truth.truthMode,
                truthClass=truth.truthClass,
                label=1 if truth.truthClass == "clickbait" else 0,
            )
        )
    stats.unmatched_truths = len(truth_by_id)
    if stats.unmatched_instances or stats.unmatched_truths:
        logger.warning(
            "merge dropped %d unmatched instances and %d unmatched truths",
            stats.unmatched_instances,
            stats.unmatched_truths,
        )
    return merged, stats


def split_train_test(
    data: list, train_fraction: float, seed: int = 1
) -> tuple[list, list]:
    """Seeded uniform shuffle; first floor(n * train_fraction) rows train."""
    if not data:
        raise ValueError("cannot split an empty corpus")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(len(data))
    n_train = math.floor(len(data) * train_fraction)
    train = [data[i] for i in perm[:n_train]]
    test = [data[i] for i in perm[n_train:]]
    return train, test


def count_keywords(keywords: str) -> int:
    """Number of non-empty comma-separated segments."""
    return sum(1 for part in keywords.split(",") if part.strip())


def weekday_of(timestamp: str) -> str | None:
    """Weekday name of a Twitter-format timestamp, in its own zone.

    Format: 'EEE MMM dd HH:mm:ss +zzzz yyyy'. The displayed fields are already
    local to the embedded offset, so the weekday follows from the date alone.
    Returns None when the string does not parse.
    """
    parts = timestamp.split()
    if len(parts) != 6:
        return None
    _, mon, day, _, _, year = parts
    month = _MONTHS.get(mon)
    if month is None:
        return None
    try:
        d = datetime.date(int(year), month, int(day))
    except ValueError:
        return None
    return WEEKDAY_ORDER[d.weekday()]


def eda_group_table(data: list[LabeledInstance], grouper: str) -> list[EdaRow]:
    """Clickbait/non-clickbait counts grouped by one of the EDA groupers.

    keywordCount and captionCount groups are capped at 0..10 (rows above the
    cap are excluded, as in the published tables). Unparseable timestamps land
    in an 'unknown' weekday group.
    """
    if grouper not in EDA_GROUPERS:
        raise ValueError(f"unknown grouper {grouper!r}, expected one of {EDA_GROUPERS}")

    counts: dict[object, list[int]] = {}
    unknown = 0
    for inst in data:
        if grouper == "imageCount":
            key: object = len(inst.postMedia)
        elif grouper == "captionCount":
            key = len(inst.targetCaptions)
            if key > EDA_COUNT_CAP:
                continue
        elif grouper == "keywordCount":
            key = count_keywords(inst.targetKeywords)
            if key > EDA_COUNT_CAP:
                continue
        else:
            wd = weekday_of(inst.postTimestamp)
            if wd is None:
                unknown += 1
                key = "unknown"
            else:
                key = wd
        pair = counts.setdefault(key, [0, 0])
        pair[inst.label] += 1

    if unknown:
        logger.warning("eda: %d rows with unparseable timestamps grouped as 'unknown'", unknown)

    if grouper == "weekday":
        order = {name: i for i, name in enumerate(WEEKDAY_ORDER)}
        keys = sorted(counts, key=lambda k: order.get(k, len(order)))
    else:
        keys = sorted(counts)
    return [EdaRow(k, counts[k][1], counts[k][0]) for k in keys]


def recompute_truth_stats(judgments: list[float]) -> tuple[float, float, float]:
    """(mean, median, mode) of a judgment list; mode ties break to the smallest value."""
    if not judgments:
        raise ValueError("empty judgment list")
    n = len(judgments)
    mean = sum(judgments) / n
    ordered = sorted(judgments)
    if n % 2 == 1:
        median = ordered[n // 2]
    else:
        median = (ordered[n // 2 - 1] + ordered[n // 2]) / 2.0
    freq = Counter(judgments)
    best = max(freq.values())
    mode = min(v for v, c in freq.items() if c == best)
    return mean, median, mode


def is_valid_text(inst: Instance) -> bool:
    """Optional validity filter: non-empty post text and non-empty target title."""
    return bool(" ".join(inst.postText).strip()) and bool(inst.targetTitle.strip())


CORPUS_CSV_FIELDS = [
    "id", "postText", "postTimestamp", "postMedia", "targetTitle",
    "targetDescription", "targetKeywords", "targetParagraphs", "targetCaptions",
    "truthJudgments", "truthMean", "truthMedian", "truthMode", "truthClass", "label",
]

_JSON_FIELDS = {"postText", "postMedia", "targetParagraphs", "targetCaptions", "truthJudgments"}


def write_corpus_csv(data: list[LabeledInstance], path) -> None:
    """Merged corpus as CSV; list-valued fields are JSON-encoded cells."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CORPUS_CSV_FIELDS)
        for inst in data:
            row = []
            for name in CORPUS_CSV_FIELDS:
                value = getattr(inst, name)
                row.append(json.dumps(value) if name in _JSON_FIELDS else value)
            writer.writerow(row)


def read_corpus_csv(path) -> list[LabeledInstance]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CORPUS_CSV_FIELDS) - set(reader.fieldnames or [])
        if missing:
            raise CorpusError(f"{path}: missing corpus CSV columns {sorted(missing)}")
        for row in reader:
            out.append(
                LabeledInstance(
                    id=row["id"],
                    postText=json.loads(row["postText"]),
                    postTimestamp=row["postTimestamp"],
                    postMedia=json.loads(row["postMedia"]),
                    targetTitle=row["targetTitle"],
                    targetDescription=row["targetDescription"],
                    targetKeywords=row["targetKeywords"],
                    targetParagraphs=json.loads(row["targetParagraphs"]),
                    targetCaptions=json.loads(row["targetCaptions"]),
                    truthJudgments=json.loads(row["truthJudgments"]),
                    truthMean=float(row["truthMean"]),
                    truthMedian=float(row["truthMedian"]),
                    truthMode=float(row["truthMode"]),
                    truthClass=row["truthClass"],
                    label=int(row["label"]),
                )
            )
    return out


def write_eda_csv(rows: list[EdaRow], fh) -> None:
    """EDA table as CSV with 2-decimal percentages."""
    writer = csv.writer(fh)
    writer.writerow(["group", "clickbait", "no-clickbait", "pct-clickbait"])
    for row in rows:
        writer.writerow(
            [row.groupKey, row.clickbaitCount, row.nonClickbaitCount, f"{row.clickbaitPct:.2f}"]
        )
