"""Text-format dataset files: labels, class lists, splits, CSV attribute
matrices, and the sniffing loader that accepts DPM1 or CSV attributes."""

from __future__ import annotations

import csv
import os

import numpy as np

from ..errors import InputError
from ..zsl.attributes import AttributeMatrix, SplitSpec
from . import dpm1


def read_lines(path) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(f"{line}\n")


read_labels = read_lines
write_labels = write_lines
read_classes = read_lines
write_classes = write_lines


def read_split(path) -> SplitSpec:
    """Sections 'train:' and 'test:', one class name per line."""
    section = None
    train, test = [], []
    for lineno, line in enumerate(read_lines(path), start=1):
        if line.startswith("#"):
            continue
        if line.rstrip(":").lower() in ("train", "test") and line.endswith(":"):
            section = line.rstrip(":").lower()
            continue
        if section == "train":
            train.append(line)
        elif section == "test":
            test.append(line)
        else:
            raise InputError(f"{path}:{lineno}: class name before a train:/test: header")
    if not train or not test:
        raise InputError(f"{path}: split needs both train: and test: sections")
    try:
        return SplitSpec(train=train, test=test)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_split(path, split: SplitSpec) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("train:\n")
        for c in split.train:
            fh.write(f"{c}\n")
        fh.write("test:\n")
        for c in split.test:
            fh.write(f"{c}\n")


def read_attribute_csv(path) -> AttributeMatrix:
    """Header row: anchor cell then attribute names; rows: class name, values."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = [r for r in reader if r]
    if len(rows) < 2:
        raise InputError(f"{path}: attribute CSV needs a header and at least one class row")
    attribute_names = [c.strip() for c in rows[0][1:]]
    class_names, values = [], []
    for r in rows[1:]:
        class_names.append(r[0].strip())
        try:
            values.append([float(v) for v in r[1:]])
        except ValueError as exc:
            raise InputError(f"{path}: bad value in row {r[0]!r}: {exc}") from None
    try:
        return AttributeMatrix(values=np.array(values), class_names=class_names,
                               attribute_names=attribute_names)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_attribute_csv(path, matrix: AttributeMatrix) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class"] + matrix.attribute_names)
        for name, row in zip(matrix.class_names, matrix.values):
            writer.writerow([name] + [repr(float(v)) for v in row])


def load_attribute_matrix(path) -> AttributeMatrix:
    """DPM1 (with a classes.txt sidecar for row names) or self-describing CSV."""
    if dpm1.sniff(path):
        values = dpm1.read_matrix(path)
        classes_path = os.path.join(os.path.dirname(os.path.abspath(path)),
                                    "classes.txt")
        if not os.path.exists(classes_path):
            raise InputError(
                f"{path}: DPM1 attribute matrices need a classes.txt beside them "
                "to name the rows")
        class_names = read_classes(classes_path)
        if len(class_names) != values.shape[0]:
            raise InputError(
                f"{classes_path}: {len(class_names)} names for {values.shape[0]} rows")
        attribute_names = [f"a{i:03d}" for i in range(values.shape[1])]
        try:
            return AttributeMatrix(values=values, class_names=class_names,
                                   attribute_names=attribute_names)
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from None
    return read_attribute_csv(path)
