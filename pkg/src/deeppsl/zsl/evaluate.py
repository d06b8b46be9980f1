"""Class-averaged top-1 scoring.

The class average weights every class equally regardless of sample counts,
so it differs from plain accuracy on unbalanced data. Classes without
samples are excluded from the average and listed.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InputError


@dataclass
class EvalReport:
    class_names: list[str]
    per_class_accuracy: dict[str, float]
    class_averaged_accuracy: float
    confusion: dict[str, dict[str, int]]       # true -> predicted -> count
    excluded_classes: list[str]
    n_samples: int

    def to_json_dict(self) -> dict:
        return {
            "class_names": self.class_names,
            "per_class_accuracy": self.per_class_accuracy,
            "class_averaged_accuracy": self.class_averaged_accuracy,
            "confusion": self.confusion,
            "excluded_classes": self.excluded_classes,
            "n_samples": self.n_samples,
        }


def evaluate(predictions: list[str], true_labels: list[str],
             class_names: list[str]) -> EvalReport:
    if len(predictions) != len(true_labels):
        raise InputError("prediction and label counts differ")
    if not true_labels:
        raise InputError("cannot evaluate an empty sample set")
    known = set(class_names)
    bad = sorted({t for t in true_labels if t not in known})
    if bad:
        raise InputError(f"labels outside the class set: {bad}")

    correct = {c: 0 for c in class_names}
    count = {c: 0 for c in class_names}
    confusion: dict[str, dict[str, int]] = {}
    for pred, true in zip(predictions, true_labels):
        count[true] += 1
        if pred == true:
            correct[true] += 1
        row = confusion.setdefault(true, {})
        row[pred] = row.get(pred, 0) + 1

    per_class = {c: correct[c] / count[c] for c in class_names if count[c] > 0}
    excluded = [c for c in class_names if count[c] == 0]
    average = sum(per_class.values()) / len(per_class)
    return EvalReport(class_names=list(class_names),
                      per_class_accuracy=per_class,
                      class_averaged_accuracy=float(average),
                      confusion=confusion,
                      excluded_classes=excluded,
                      n_samples=len(true_labels))
