"""AWA2/CUB conversion into the portable artifact set.

Outputs per dataset: features.dpm1 (images x 2048), labels.txt (one class
name per image row), attributes.dpm1 (classes x attributes in [0,1]),
classes.txt (canonical class order = matrix row order), split.txt
(disjoint train/test class lists from the proposed splits).
"""

from __future__ import annotations

import os
from collections import defaultdict

import numpy as np

from . import dpm1
from .errors import ConvertError
from .matfiles import read_features_and_labels, read_splits

AWA2_FEATURE_DIM = 2048
AWA2_CLASSES = 50
AWA2_ATTRIBUTES = 85
CUB_FEATURE_DIM = 2048
CUB_CLASSES = 200
CUB_ATTRIBUTES = 312


def _minmax_to_unit(values: np.ndarray) -> np.ndarray:
    lo, hi = float(values.min()), float(values.max())
    if hi <= lo:
        raise ConvertError("attribute matrix is constant; cannot rescale")
    return (values - lo) / (hi - lo)


def _split_class_lists(labels, names, trainval, test_unseen):
    train_classes = sorted({names[labels[i]] for i in trainval},
                           key=lambda n: names.index(n))
    test_classes = sorted({names[labels[i]] for i in test_unseen},
                          key=lambda n: names.index(n))
    overlap = set(train_classes) & set(test_classes)
    if overlap:
        raise ConvertError(f"proposed split is not disjoint: {sorted(overlap)[:5]}")
    return train_classes, test_classes


def _write_artifacts(out_dir, features, label_names, attributes, class_names,
                     train_classes, test_classes):
    os.makedirs(out_dir, exist_ok=True)
    dpm1.write_matrix(os.path.join(out_dir, "features.dpm1"), features)
    with open(os.path.join(out_dir, "labels.txt"), "w", encoding="utf-8") as fh:
        for name in label_names:
            fh.write(f"{name}\n")
    dpm1.write_matrix(os.path.join(out_dir, "attributes.dpm1"), attributes)
    with open(os.path.join(out_dir, "classes.txt"), "w", encoding="utf-8") as fh:
        for name in class_names:
            fh.write(f"{name}\n")
    with open(os.path.join(out_dir, "split.txt"), "w", encoding="utf-8") as fh:
        fh.write("train:\n")
        for name in train_classes:
            fh.write(f"{name}\n")
        fh.write("test:\n")
        for name in test_classes:
            fh.write(f"{name}\n")


def convert_awa2(source_dir: str, out_dir: str) -> dict:
    """Convert the published AWA2 distribution; returns a summary dict."""
    features, labels = read_features_and_labels(source_dir)
    att, original, names, trainval, test_unseen = read_splits(source_dir)

    if features.shape[1] != AWA2_FEATURE_DIM:
        raise ConvertError(
            f"AWA2 features must have {AWA2_FEATURE_DIM} columns, "
            f"got {features.shape[1]}")
    if att.shape != (AWA2_CLASSES, AWA2_ATTRIBUTES):
        raise ConvertError(
            f"AWA2 attribute matrix must be {AWA2_CLASSES}x{AWA2_ATTRIBUTES}, "
            f"got {att.shape[0]}x{att.shape[1]}")
    if labels.max() >= len(names):
        raise ConvertError("labels reference classes beyond allclasses_names")

    # prefer the raw 0-100 association values when shipped; either way the
    # emitted matrix is min-max rescaled into [0,1]
    source_att = original if original is not None else att
    attributes = _minmax_to_unit(source_att)

    train_classes, test_classes = _split_class_lists(labels, names,
                                                     trainval, test_unseen)
    _write_artifacts(out_dir, features, [names[l] for l in labels],
                     attributes, names, train_classes, test_classes)
    return {
        "dataset": "AWA2",
        "images": int(features.shape[0]),
        "classes": len(names),
        "attributes": int(attributes.shape[1]),
        "train_classes": len(train_classes),
        "test_classes": len(test_classes),
        "attribute_source": "original_att" if original is not None else "att",
    }


def _class_level_attributes_from_annotations(source_dir: str):
    """200 x 312 matrix by per-class averaging of per-image binary
    annotations; None when the annotation files are absent."""
    ann_path = os.path.join(source_dir, "image_attribute_labels.txt")
    cls_path = os.path.join(source_dir, "image_class_labels.txt")
    if not (os.path.exists(ann_path) and os.path.exists(cls_path)):
        return None

    class_of_image: dict[int, int] = {}
    with open(cls_path, "r", encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if len(parts) < 2:
                continue
            class_of_image[int(parts[0])] = int(parts[1]) - 1

    sums = defaultdict(float)
    counts = defaultdict(int)
    max_attr = 0
    with open(ann_path, "r", encoding="utf-8") as fh:
        for line in fh:
            # <image_id> <attribute_id> <is_present> <certainty> <time>;
            # the published file has occasional extra columns, so only the
            # first three fields are trusted
            parts = line.split()
            if len(parts) < 3:
                continue
            image_id, attr_id, present = int(parts[0]), int(parts[1]), int(parts[2])
            cls = class_of_image.get(image_id)
            if cls is None:
                raise ConvertError(
                    f"image {image_id} annotated but missing from "
                    "image_class_labels.txt")
            key = (cls, attr_id - 1)
            sums[key] += float(present)
            counts[key] += 1
            max_attr = max(max_attr, attr_id)

    n_classes = max(class_of_image.values()) + 1
    matrix = np.zeros((n_classes, max_attr))
    for (cls, attr), total in sums.items():
        matrix[cls, attr] = total / counts[(cls, attr)]
    return matrix


def convert_cub(source_dir: str, out_dir: str) -> dict:
    """Convert the published CUB distribution; returns a summary dict.

    Prefers the raw per-image annotations (averaged per class); falls back
    to the class-level matrix from att_splits.mat otherwise.
    """
    features, labels = read_features_and_labels(source_dir)
    att, _, names, trainval, test_unseen = read_splits(source_dir)

    if features.shape[1] != CUB_FEATURE_DIM:
        raise ConvertError(
            f"CUB features must have {CUB_FEATURE_DIM} columns, "
            f"got {features.shape[1]}")

    from_annotations = _class_level_attributes_from_annotations(source_dir)
    if from_annotations is not None:
        attributes = from_annotations
        attribute_source = "image_attribute_labels"
    else:
        attributes = att
        attribute_source = "att"
    if attributes.shape != (CUB_CLASSES, CUB_ATTRIBUTES):
        raise ConvertError(
            f"CUB attribute matrix must be {CUB_CLASSES}x{CUB_ATTRIBUTES}, "
            f"got {attributes.shape[0]}x{attributes.shape[1]}")
    if attributes.min() < 0.0 or attributes.max() > 1.0:
        attributes = _minmax_to_unit(attributes)
        attribute_source += "+minmax"

    train_classes, test_classes = _split_class_lists(labels, names,
                                                     trainval, test_unseen)
    _write_artifacts(out_dir, features, [names[l] for l in labels],
                     attributes, names, train_classes, test_classes)
    return {
        "dataset": "CUB",
        "images": int(features.shape[0]),
        "classes": len(names),
        "attributes": int(attributes.shape[1]),
        "train_classes": len(train_classes),
        "test_classes": len(test_classes),
        "attribute_source": attribute_source,
    }
