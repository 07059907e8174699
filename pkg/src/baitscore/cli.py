"""Command line driver: ingest, eda, featurize, train, evaluate, predict,
serve. Resource paths can come from flags or the BAITSCORE_* environment
variables; flags win."""
from __future__ import annotations

import json
import logging
import sys

import click
import numpy as np

from . import corpus as corpus_mod
from . import features as feat_mod
from . import metrics as metrics_mod
from .embed import load_embeddings
from .models import (
    ForestConfig,
    TrainConfig,
    mlp_predict,
    predict_forest,
    predict_logistic,
    train_forest,
    train_logistic,
    train_mlp,
)
from .persist import load_model, save_model

logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

EDA_GROUP_FLAGS = {
    "images": "imageCount",
    "weekday": "weekday",
    "keywords": "keywordCount",
    "captions": "captionCount",
}


@click.group()
def main():
    """Clickbait scoring pipeline."""


@main.command()
@click.option("--instances", "instances_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--truth", "truth_paths", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--lenient", is_flag=True, help="skip malformed lines instead of failing")
def ingest(instances_paths, truth_paths, out, lenient):
    """Parse and merge instances.jsonl + truth.jsonl into a labeled corpus CSV."""
    instances = []
    truths = []
    for p in instances_paths:
        instances.extend(corpus_mod.parse_instances(p, lenient=lenient))
    for p in truth_paths:
        truths.extend(corpus_mod.parse_truth(p, lenient=lenient))
    merged, stats = corpus_mod.merge_corpus(instances, truths)
    corpus_mod.write_corpus_csv(merged, out)
    n1 = sum(r.label for r in merged)
    n0 = len(merged) - n1
    n_valid = sum(1 for r in merged if corpus_mod.is_valid_text(r))
    click.echo(f"labeled rows: {len(merged)} (no-clickbait {n0}, clickbait {n1})")
    click.echo(f"rows passing the text-validity filter: {n_valid}")
    if stats.unmatched_instances or stats.unmatched_truths:
        click.echo(
            f"unmatched: {stats.unmatched_instances} instances, {stats.unmatched_truths} truths"
        )
    click.echo(f"wrote {out}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True), envvar="BAITSCORE_CORPUS")
@click.option("--group", required=True, type=click.Choice(sorted(EDA_GROUP_FLAGS)))
@click.option("--out", type=click.Path(), default=None, help="CSV path (default: stdout)")
def eda(corpus_path, group, out):
    """Clickbait share per group (images, weekday, keywords, captions)."""
    data = corpus_mod.read_corpus_csv(corpus_path)
    rows = corpus_mod.eda_group_table(data, EDA_GROUP_FLAGS[group])
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            corpus_mod.write_eda_csv(rows, fh)
        click.echo(f"wrote {out}")
    else:
        corpus_mod.write_eda_csv(rows, sys.stdout)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True), envvar="BAITSCORE_CORPUS")
@click.option("--embeddings", required=True, type=click.Path(exists=True), envvar="BAITSCORE_EMBEDDINGS")
@click.option("--dimension", default=50, show_default=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--sample", default=None, type=int, help="featurize a seeded random subsample of N rows")
@click.option("--seed", default=1, show_default=True)
@click.option("--no-prefilter", is_flag=True, help="disable the greedy lower-bound shortcut")
def featurize(corpus_path, embeddings, dimension, out, sample, seed, no_prefilter):
    """Assemble the full feature matrix; writes OUT plus OUT.schema.json."""
    data = corpus_mod.read_corpus_csv(corpus_path)
    if sample is not None and sample < len(data):
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(data), size=sample, replace=False)
        data = [data[i] for i in idx]
        click.echo(f"sampled {sample} rows (seed {seed})")
    table = load_embeddings(embeddings, dimension)
    extractor = feat_mod.FeatureExtractor(table, use_prefilter=not no_prefilter)
    matrix = extractor.featurize(data, progress=True)
    ids = [r.id for r in data]
    labels = [r.label for r in data]
    means = [r.truthMean for r in data]
    feat_mod.write_features_csv(out, ids, labels, means, matrix, extractor.schema)
    feat_mod.write_schema_json(extractor.schema, f"{out}.schema.json")
    click.echo(f"wrote {out} ({matrix.shape[0]} rows x {matrix.shape[1]} features)")


@main.command()
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_kind", required=True, type=click.Choice(["lr", "rf", "mlp"]))
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", default=1, show_default=True)
@click.option("--train-fraction", default=0.67, show_default=True)
@click.option("--epochs", default=None, type=int)
@click.option("--learning-rate", default=None, type=float)
@click.option("--batch-size", default=None, type=int)
@click.option("--l2", "l2_lambda", default=1e-4, show_default=True)
@click.option("--trees", default=200, show_default=True)
@click.option("--depth", default=7, show_default=True)
@click.option("--split-features", default=19, show_default=True, help="features sampled per split")
def train(features_path, model_kind, out, seed, train_fraction, epochs, learning_rate,
          batch_size, l2_lambda, trees, depth, split_features):
    """Split, fit the preprocessor on the training part, and train one model."""
    ids, labels, means, matrix, names = feat_mod.read_features_csv(features_path)
    schema = feat_mod.read_schema_json(f"{features_path}.schema.json")
    if tuple(names) != schema.names:
        raise click.ClickException("feature CSV and schema JSON disagree")

    order = list(range(len(ids)))
    train_idx, _ = corpus_mod.split_train_test(order, train_fraction, seed=seed)
    Xtr = matrix[train_idx]
    ytr = labels[train_idx]

    if model_kind == "lr":
        prep = feat_mod.fit_preprocessor(Xtr, schema, for_linear_model=True)
        cfg = TrainConfig(
            learning_rate=learning_rate or 0.5,
            epochs=epochs or 3000,
            l2_lambda=l2_lambda,
            seed=seed,
        )
        model = train_logistic(
            feat_mod.apply_preprocessor(prep, Xtr), ytr, cfg, schema_version=schema.version
        )
        click.echo(f"class weights: {model.class_weights}")
    elif model_kind == "rf":
        prep = feat_mod.fit_preprocessor(Xtr, schema, for_linear_model=False)
        model = train_forest(
            feat_mod.apply_preprocessor(prep, Xtr),
            ytr,
            ForestConfig(n_trees=trees, max_depth=depth, max_features=split_features, seed=seed),
        )
    else:
        prep = feat_mod.fit_standardizer(Xtr, schema)
        cfg = TrainConfig(
            learning_rate=learning_rate or 0.001,
            epochs=epochs or 50,
            batch_size=batch_size or 64,
            seed=seed,
        )
        model = train_mlp(
            feat_mod.apply_preprocessor(prep, Xtr), ytr, cfg, schema_version=schema.version
        )

    save_model(
        model, prep, schema, out,
        metadata={"splitSeed": seed, "trainFraction": train_fraction, "featuresPath": str(features_path)},
    )
    click.echo(f"trained {model_kind} on {len(train_idx)} rows, wrote {out}")


def _predict_any(bundle, X):
    if bundle.model_type == "lr":
        return predict_logistic(bundle.model, X)
    if bundle.model_type == "rf":
        return predict_forest(bundle.model, X)
    return mlp_predict(bundle.model, X)


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True), envvar="BAITSCORE_MODEL")
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def evaluate(model_path, features_path, out):
    """Score the stored split's train and test parts and write the report."""
    bundle = load_model(model_path)
    ids, labels, means, matrix, names = feat_mod.read_features_csv(features_path)
    schema = feat_mod.read_schema_json(f"{features_path}.schema.json")
    if schema.version != bundle.schema.version:
        raise click.ClickException(
            f"feature schema {schema.version} does not match the model's {bundle.schema.version}"
        )
    seed = int(bundle.metadata.get("splitSeed", 1))
    fraction = float(bundle.metadata.get("trainFraction", 0.67))
    order = list(range(len(ids)))
    train_idx, test_idx = corpus_mod.split_train_test(order, fraction, seed=seed)

    reports = {}
    for name, idx in (("train", train_idx), ("test", test_idx)):
        X = feat_mod.apply_preprocessor(bundle.preprocessor, matrix[idx], schema=schema)
        probs = np.atleast_1d(_predict_any(bundle, X))
        scored = [
            metrics_mod.Scored(float(p), int(labels[i]), float(means[i]))
            for p, i in zip(probs, idx)
        ]
        reports[name] = metrics_mod.evaluate_scored(scored)
        click.echo(
            f"{name}: accuracy {reports[name].accuracy:.4f} auc {reports[name].auc:.4f} "
            f"f1w {reports[name].f1_weighted:.4f}"
        )

    payload = {name: rep.to_dict() for name, rep in reports.items()}
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
    with open(f"{out}.summary.csv", "w", encoding="utf-8", newline="") as fh:
        metrics_mod.write_report_csv(reports, bundle.model_type, fh)
    for name, rep in reports.items():
        with open(f"{out}.roc.{name}.csv", "w", encoding="utf-8", newline="") as fh:
            metrics_mod.write_roc_csv(rep.roc_points, fh)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True), envvar="BAITSCORE_MODEL")
@click.option("--embeddings", required=True, type=click.Path(exists=True), envvar="BAITSCORE_EMBEDDINGS")
@click.option("--dimension", default=50, show_default=True)
@click.option("--json", "json_request", default=None, help="score request as inline JSON")
@click.option("--stdin", "from_stdin", is_flag=True, help="read the request JSON from stdin")
@click.option("--echo-features", is_flag=True)
def predict(model_path, embeddings, dimension, json_request, from_stdin, echo_features):
    """Score one request given as JSON (same shape as POST /score)."""
    from .scorer import Scorer, ScoreRequest

    if json_request is None and not from_stdin:
        raise click.ClickException("provide --json or --stdin")
    raw = json_request if json_request is not None else sys.stdin.read()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"bad request JSON: {exc}") from exc
    if echo_features:
        data["includeFeatures"] = True

    bundle = load_model(model_path)
    table = load_embeddings(embeddings, dimension)
    scorer = Scorer(bundle, table)
    try:
        result = scorer.score(ScoreRequest.from_dict(data))
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(json.dumps(result, indent=2))


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True), envvar="BAITSCORE_MODEL")
@click.option("--embeddings", required=True, type=click.Path(exists=True), envvar="BAITSCORE_EMBEDDINGS")
@click.option("--dimension", default=50, show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--frontend", default=None, type=click.Path(), help="static UI bundle to mount at /ui")
def serve(model_path, embeddings, dimension, port, host, frontend):
    """Start the warm scoring service (resources load once at startup)."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(model_path, embeddings, dimension=dimension, frontend_dir=frontend)
    except Exception as exc:
        raise click.ClickException(f"startup failed: {exc}") from exc
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
