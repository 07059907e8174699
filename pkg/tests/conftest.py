import json

import numpy as np
import pytest

from baitscore.corpus import LabeledInstance, recompute_truth_stats
from baitscore.embed import EmbeddingTable
from baitscore.nlp import tokenize


def make_table(words, dim=50, seed=0, scale=0.5):
    """Deterministic random embedding table over an explicit vocabulary."""
    rng = np.random.default_rng(seed)
    return EmbeddingTable(
        dimension=dim,
        entries={w: rng.normal(size=dim) * scale for w in sorted(set(words))},
    )


CLICKBAIT_POSTS = [
    "You won't believe what happens next to this {t}",
    "10 amazing secrets about {t} that will shock you",
    "This exclusive {t} trick is incredible, click here now",
    "What nobody tells you about {t}? The answer is crazy",
    "They don't want you to know these 7 {t} facts",
    "You know this {t} story will make you cry",
]

NEWS_POSTS = [
    "Parliament passes the {t} budget bill after debate",
    "Officials announce new {t} policy for the region",
    "Report shows steady growth in the {t} sector",
    "Court rules on the {t} case brought last year",
    "Researchers publish findings on {t} development",
    "Ministers meet to discuss the {t} agreement",
]

TOPICS = ["health", "economy", "transport", "energy", "science", "housing", "water", "trade"]

TITLES = [
    "The full story about {t}",
    "A detailed look at {t} this year",
    "{t} report published by the committee",
    "Everything we learned about {t}",
]

PARAGRAPH_POOL = (
    "the committee reviewed the report and published its findings on schedule "
    "officials said the new measures would take effect next month and analysts "
    "expect steady progress across the sector while residents await details"
).split()

WEEKDAY_ABBR = ["Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"]
MONTH_NAME = {1: "Jan", 2: "Feb"}


def _timestamp(day_index: int) -> str:
    import datetime as dt

    d = dt.date(2018, 1, 1) + dt.timedelta(days=day_index % 40)
    return f"{WEEKDAY_ABBR[d.weekday()]} {MONTH_NAME[d.month]} {d.day:02d} 10:30:00 +0000 2018"


def build_synthetic_corpus(n_rows: int = 80, seed: int = 7) -> list[LabeledInstance]:
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(n_rows):
        label = k % 2
        topic = TOPICS[int(rng.integers(len(TOPICS)))]
        if label == 1:
            post = CLICKBAIT_POSTS[int(rng.integers(len(CLICKBAIT_POSTS)))].format(t=topic)
            judgments = [1.0, 1.0, 0.66, float(rng.choice([0.66, 1.0])), 0.66]
            truth_class = "clickbait"
        else:
            post = NEWS_POSTS[int(rng.integers(len(NEWS_POSTS)))].format(t=topic)
            judgments = [0.0, 0.0, 0.33, float(rng.choice([0.0, 0.33])), 0.0]
            truth_class = "no-clickbait"
        title = TITLES[int(rng.integers(len(TITLES)))].format(t=topic)
        para_words = [str(w) for w in rng.choice(PARAGRAPH_POOL, size=14)]
        mean, median, mode = recompute_truth_stats(judgments)
        rows.append(
            LabeledInstance(
                id=str(k + 1),
                postText=[post],
                postTimestamp=_timestamp(k),
                postMedia=[f"media/{k}.png"] * int(rng.integers(0, 3)),
                targetTitle=title,
                targetDescription=f"a {topic} article about recent developments",
                targetKeywords=", ".join([topic, "news", "report"][: int(rng.integers(1, 4))]),
                targetParagraphs=[" ".join(para_words[:7]), " ".join(para_words[7:])],
                targetCaptions=[f"photo of {topic}"] * int(rng.integers(0, 3)),
                truthJudgments=judgments,
                truthMean=mean,
                truthMedian=median,
                truthMode=mode,
                truthClass=truth_class,
                label=label,
            )
        )
    return rows


def corpus_vocabulary(rows) -> set[str]:
    vocab = set()
    for r in rows:
        for text in (
            " ".join(r.postText),
            r.targetTitle,
            r.targetDescription,
            r.targetKeywords,
            " ".join(r.targetParagraphs),
            " ".join(r.targetCaptions),
        ):
            vocab.update(tokenize(text).tokens)
    return vocab


@pytest.fixture(scope="session")
def synth_corpus():
    return build_synthetic_corpus()


@pytest.fixture(scope="session")
def synth_table(synth_corpus):
    return make_table(corpus_vocabulary(synth_corpus), dim=50, seed=3)


def write_embeddings_file(table: EmbeddingTable, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for token, vec in table.entries.items():
            fh.write(token + " " + " ".join(repr(float(x)) for x in vec) + "\n")


def write_corpus_jsonl(rows, instances_path, truth_path) -> None:
    with open(instances_path, "w", encoding="utf-8") as fi, open(truth_path, "w", encoding="utf-8") as ft:
        for r in rows:
            fi.write(json.dumps({
                "id": r.id,
                "postText": r.postText,
                "postTimestamp": r.postTimestamp,
                "postMedia": r.postMedia,
                "targetTitle": r.targetTitle,
                "targetDescription": r.targetDescription,
                "targetKeywords": r.targetKeywords,
                "targetParagraphs": r.targetParagraphs,
                "targetCaptions": r.targetCaptions,
            }) + "\n")
            ft.write(json.dumps({
                "id": r.id,
                "truthJudgments": r.truthJudgments,
                "truthMean": r.truthMean,
                "truthMedian": r.truthMedian,
                "truthMode": r.truthMode,
                "truthClass": r.truthClass,
            }) + "\n")


@pytest.fixture(scope="session")
def synth_files(tmp_path_factory, synth_corpus, synth_table):
    """Synthetic corpus JSONL pair plus a matching embeddings file on disk."""
    root = tmp_path_factory.mktemp("synth")
    instances = root / "instances.jsonl"
    truth = root / "truth.jsonl"
    embeddings = root / "vectors_50d.txt"
    write_corpus_jsonl(synth_corpus, instances, truth)
    write_embeddings_file(synth_table, embeddings)
    return {"instances": instances, "truth": truth, "embeddings": embeddings, "root": root}


@pytest.fixture(scope="session")
def lr_model_file(synth_corpus, synth_table, synth_files):
    """Logistic model trained end to end on the synthetic corpus, saved to disk."""
    from baitscore.corpus import split_train_test
    from baitscore.features import FeatureExtractor, apply_preprocessor, fit_preprocessor
    from baitscore.models import TrainConfig, train_logistic
    from baitscore.persist import save_model

    extractor = FeatureExtractor(synth_table)
    matrix = extractor.featurize(synth_corpus)
    labels = np.array([r.label for r in synth_corpus])
    train_idx, _ = split_train_test(list(range(len(synth_corpus))), 0.67, seed=1)
    prep = fit_preprocessor(matrix[train_idx], extractor.schema, for_linear_model=True)
    model = train_logistic(
        apply_preprocessor(prep, matrix[train_idx]),
        labels[train_idx],
        TrainConfig(learning_rate=0.5, epochs=800),
        schema_version=extractor.schema.version,
    )
    path = synth_files["root"] / "lr.model.json"
    save_model(model, prep, extractor.schema, path, metadata={"splitSeed": 1, "trainFraction": 0.67})
    return path
