"""Clickbait scoring: corpus ingestion, text feature engineering (embedding,
word-mover distance, sentiment, surface), from-scratch classifiers, metric
reports, and a warm HTTP scoring service."""

__version__ = "0.1.0"
