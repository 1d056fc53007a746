"""Per-class precision/recall/F1 and overall accuracy."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import MalformedDocument, UniverseMismatch
from .reasoner import Labeling
from .scene import LABELS, GroundTruth


@dataclass
class Metrics:
    per_class: dict   # label -> {"precision", "recall", "f1"}
    overall_accuracy: float
    confusion: list   # 3x3 counts, rows = ground truth, cols = prediction
    n: int

    def to_doc(self):
        return {
            "per_class": self.per_class,
            "overall_accuracy": self.overall_accuracy,
            "confusion": self.confusion,
            "label_order": list(LABELS),
            "n": self.n,
        }

    def dump(self) -> bytes:
        return (json.dumps(self.to_doc(), indent=2, sort_keys=True)
                + "\n").encode("utf-8")


def score(pred: Labeling, gt: GroundTruth) -> Metrics:
    if set(pred.labels) != set(gt.labels):
        raise UniverseMismatch(
            "prediction and ground truth cover different rect ids: "
            f"{sorted(set(pred.labels) ^ set(gt.labels))[:5]}")
    idx = {label: i for i, label in enumerate(LABELS)}
    confusion = [[0] * len(LABELS) for _ in LABELS]
    for rect_id in gt.labels:
        confusion[idx[gt.labels[rect_id]]][idx[pred.label_of(rect_id)]] += 1
    n = len(gt.labels)
    per_class = {}
    for label, i in idx.items():
        tp = confusion[i][i]
        n_pred = sum(confusion[r][i] for r in range(len(LABELS)))
        n_gt = sum(confusion[i])
        precision = tp / n_pred if n_pred else 0.0
        recall = tp / n_gt if n_gt else 0.0
        f1 = (2 * precision * recall / (precision + recall)
              if precision + recall else 0.0)
        per_class[label] = {"precision": precision, "recall": recall,
                            "f1": f1}
    accuracy = sum(confusion[i][i] for i in range(len(LABELS))) / n if n else 0.0
    return Metrics(per_class, accuracy, confusion, n)


def load_metrics(data: bytes) -> Metrics:
    try:
        doc = json.loads(data.decode("utf-8"))
        return Metrics(doc["per_class"], doc["overall_accuracy"],
                       doc["confusion"], doc["n"])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError) as exc:
        raise MalformedDocument(f"not a metrics document: {exc}") from exc
