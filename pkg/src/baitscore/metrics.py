"""Binary classification metrics: confusion-derived scores, both MSE
variants, the ROC curve, and rank-based AUC (ties counted one half)."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np


@dataclass
class Scored:
    probability: float
    label: int
    truth_mean: float | None = None


@dataclass
class EvalReport:
    accuracy: float
    mse_hard_label: float
    auc: float | None = None
    mse_truth_mean: float | None = None
    precision_pos: float = 0.0
    recall_pos: float = 0.0
    f1_pos: float = 0.0
    precision_weighted: float = 0.0
    recall_weighted: float = 0.0
    f1_weighted: float = 0.0
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0
    roc_points: list[tuple[float, float, float]] | None = None
    zero_denominator: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "accuracy": self.accuracy,
            "mseHardLabel": self.mse_hard_label,
            "mseTruthMean": self.mse_truth_mean,
            "auc": self.auc,
            "precisionPos": self.precision_pos,
            "recallPos": self.recall_pos,
            "f1Pos": self.f1_pos,
            "precisionWeighted": self.precision_weighted,
            "recallWeighted": self.recall_weighted,
            "f1Weighted": self.f1_weighted,
            "confusion": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "zeroDenominator": list(self.zero_denominator),
        }
        return out

    def summary_row(self) -> list:
        """Accuracy, MSE, AUC, Precision, Recall, F1 (weighted averaging)."""
        return [
            round(self.accuracy, 4),
            round(self.mse_hard_label, 4),
            round(self.auc, 4) if self.auc is not None else "",
            round(self.precision_weighted, 4),
            round(self.recall_weighted, 4),
            round(self.f1_weighted, 4),
        ]


def _ratio(num: float, den: float, flag_name: str, flags: list[str]) -> float:
    if den == 0:
        flags.append(flag_name)
        return 0.0
    return num / den


def binary_metrics(scored: list[Scored], threshold: float = 0.5) -> EvalReport:
    """Confusion-derived metrics at a probability threshold. Weighted variants
    are support-weighted averages over both classes; zero-denominator ratios
    come back as 0 with the metric named in zero_denominator."""
    if not scored:
        raise ValueError("binary_metrics needs at least one scored row")
    probs = np.array([s.probability for s in scored])
    labels = np.array([s.label for s in scored])
    preds = (probs >= threshold).astype(int)

    tp = int(np.sum((preds == 1) & (labels == 1)))
    fp = int(np.sum((preds == 1) & (labels == 0)))
    tn = int(np.sum((preds == 0) & (labels == 0)))
    fn = int(np.sum((preds == 0) & (labels == 1)))
    n = len(scored)

    flags: list[str] = []
    precision_pos = _ratio(tp, tp + fp, "precisionPos", flags)
    recall_pos = _ratio(tp, tp + fn, "recallPos", flags)
    f1_pos = _ratio(2 * precision_pos * recall_pos, precision_pos + recall_pos, "f1Pos", flags)
    precision_neg = _ratio(tn, tn + fn, "precisionNeg", flags)
    recall_neg = _ratio(tn, tn + fp, "recallNeg", flags)
    f1_neg = _ratio(2 * precision_neg * recall_neg, precision_neg + recall_neg, "f1Neg", flags)

    support_pos = tp + fn
    support_neg = tn + fp
    precision_w = (precision_pos * support_pos + precision_neg * support_neg) / n
    recall_w = (recall_pos * support_pos + recall_neg * support_neg) / n
    f1_w = (f1_pos * support_pos + f1_neg * support_neg) / n

    return EvalReport(
        accuracy=(tp + tn) / n,
        mse_hard_label=mse(scored, target="hardLabel"),
        precision_pos=precision_pos,
        recall_pos=recall_pos,
        f1_pos=f1_pos,
        precision_weighted=precision_w,
        recall_weighted=recall_w,
        f1_weighted=f1_w,
        tp=tp, fp=fp, tn=tn, fn=fn,
        zero_denominator=tuple(flags),
    )


def mse(scored: list[Scored], target: str = "hardLabel") -> float:
    """Mean of (probability - target)^2 against the 0/1 label or the crowd
    truthMean."""
    if target == "hardLabel":
        return float(np.mean([(s.probability - s.label) ** 2 for s in scored]))
    if target == "truthMean":
        if any(s.truth_mean is None for s in scored):
            raise ValueError("truthMean requested but missing on some rows")
        return float(np.mean([(s.probability - s.truth_mean) ** 2 for s in scored]))
    raise ValueError(f"unknown mse target {target!r}")


def roc_curve(scored: list[Scored]) -> list[tuple[float, float, float]]:
    """(fpr, tpr, threshold) at each distinct score, descending, with a
    (0, 0, inf) start sentinel. Tied scores collapse to one point, which makes
    trapezoidal area equal the tie-adjusted rank statistic."""
    probs = np.array([s.probability for s in scored])
    labels = np.array([s.label for s in scored])
    n_pos = int(np.sum(labels == 1))
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_curve needs both classes")

    order = np.argsort(-probs, kind="stable")
    sorted_probs = probs[order]
    sorted_labels = labels[order]
    tps = np.cumsum(sorted_labels == 1)
    fps = np.cumsum(sorted_labels == 0)
    # last index of each tie group
    distinct = np.flatnonzero(np.diff(sorted_probs) != 0)
    ends = np.append(distinct, len(sorted_probs) - 1)

    points = [(0.0, 0.0, math.inf)]
    for k in ends:
        points.append((fps[k] / n_neg, tps[k] / n_pos, float(sorted_probs[k])))
    return points


def auc(scored: list[Scored]) -> float:
    """Mann-Whitney statistic: the fraction of (positive, negative) pairs
    ranked correctly, ties counted one half."""
    probs = np.array([s.probability for s in scored])
    labels = np.array([s.label for s in scored])
    n_pos = int(np.sum(labels == 1))
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc needs both classes")

    order = np.argsort(probs, kind="stable")
    sorted_probs = probs[order]
    ranks = np.empty(len(probs))
    i = 0
    while i < len(sorted_probs):
        j = i
        while j + 1 < len(sorted_probs) and sorted_probs[j + 1] == sorted_probs[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0  # average 1-based rank
        i = j + 1
    rank_sum_pos = float(np.sum(ranks[labels == 1]))
    u = rank_sum_pos - n_pos * (n_pos + 1) / 2.0
    return u / (n_pos * n_neg)


def trapezoid_area(points: list[tuple[float, float, float]]) -> float:
    """Area under a piecewise-linear ROC given as (fpr, tpr, threshold)."""
    area = 0.0
    for k in range(1, len(points)):
        x0, y0 = points[k - 1][0], points[k - 1][1]
        x1, y1 = points[k][0], points[k][1]
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def evaluate_scored(
    scored: list[Scored], threshold: float = 0.5, with_roc: bool = True
) -> EvalReport:
    """Full report: confusion metrics plus AUC/ROC and, when truthMean is
    present on every row, the crowd-mean MSE."""
    report = binary_metrics(scored, threshold=threshold)
    if with_roc:
        report.roc_points = roc_curve(scored)
        report.auc = auc(scored)
    if all(s.truth_mean is not None for s in scored):
        report.mse_truth_mean = mse(scored, target="truthMean")
    return report


def write_roc_csv(points: list[tuple[float, float, float]], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["fpr", "tpr", "threshold"])
    for fpr, tpr, thr in points:
        writer.writerow([repr(fpr), repr(tpr), repr(thr)])


def write_report_csv(reports: dict[str, EvalReport], model_name: str, fh) -> None:
    """Summary table, one row per dataset, in the standard column order."""
    writer = csv.writer(fh)
    writer.writerow(["Model", "Dataset", "Accuracy", "MSE", "AUC", "Precision", "Recall", "F1-Score"])
    for dataset, report in reports.items():
        writer.writerow([model_name, dataset, *report.summary_row()])
