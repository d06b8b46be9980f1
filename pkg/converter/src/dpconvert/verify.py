"""Post-conversion verification of an output directory."""

from __future__ import annotations

import os
from dataclasses import dataclass, field


from . import dpm1
from .errors import ConvertError


@dataclass
class VerifyReport:
    ok: bool
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    def lines(self):
        for name, passed, detail in self.checks:
            yield f"{'PASS' if passed else 'FAIL'} {name}: {detail}"


def _read_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _read_split(path):
    section, train, test = None, [], []
    for line in _read_lines(path):
        if line in ("train:", "test:"):
            section = line[:-1]
        elif section == "train":
            train.append(line)
        elif section == "test":
            test.append(line)
        else:
            raise ConvertError(f"{path}: class before a section header")
    return train, test


def verify(out_dir: str) -> VerifyReport:
    """Check magics, dimensions, cross-references, and split disjointness."""
    checks = []

    def check(name, passed, detail):
        checks.append((name, bool(passed), detail))

    try:
        features = dpm1.read_matrix(os.path.join(out_dir, "features.dpm1"))
        check("features-magic", True,
              f"{features.shape[0]}x{features.shape[1]} matrix read back")
    except (ConvertError, OSError) as exc:
        check("features-magic", False, str(exc))
        return VerifyReport(ok=False, checks=checks)

    try:
        attributes = dpm1.read_matrix(os.path.join(out_dir, "attributes.dpm1"))
        check("attributes-magic", True,
              f"{attributes.shape[0]}x{attributes.shape[1]} matrix read back")
    except (ConvertError, OSError) as exc:
        check("attributes-magic", False, str(exc))
        return VerifyReport(ok=False, checks=checks)

    labels = _read_lines(os.path.join(out_dir, "labels.txt"))
    classes = _read_lines(os.path.join(out_dir, "classes.txt"))
    train, test = _read_split(os.path.join(out_dir, "split.txt"))

    check("label-count", len(labels) == features.shape[0],
          f"{len(labels)} labels for {features.shape[0]} feature rows")
    check("attribute-rows", attributes.shape[0] == len(classes),
          f"{attributes.shape[0]} matrix rows for {len(classes)} classes")
    unknown_labels = sorted(set(labels) - set(classes))
    check("labels-in-classes", not unknown_labels,
          "all labels canonical" if not unknown_labels
          else f"unknown labels: {unknown_labels[:3]}")
    unknown_split = sorted((set(train) | set(test)) - set(classes))
    check("split-in-classes", not unknown_split,
          "all split classes canonical" if not unknown_split
          else f"unknown split classes: {unknown_split[:3]}")
    overlap = sorted(set(train) & set(test))
    check("split-disjoint", not overlap,
          f"{len(train)} train / {len(test)} test classes, no overlap"
          if not overlap else f"overlap: {overlap[:3]}")
    lo, hi = float(attributes.min()), float(attributes.max())
    check("attribute-range", 0.0 <= lo and hi <= 1.0,
          f"observed range [{lo:.4f}, {hi:.4f}]")

    return VerifyReport(ok=all(p for _, p, _ in checks), checks=checks)
