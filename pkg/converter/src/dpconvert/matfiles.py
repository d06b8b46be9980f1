"""Readers for the published MAT containers.

The proposed-splits distribution ships two files per dataset:

  res101.mat      features (d x m, one column per image), labels (m x 1,
                  1-based class ids)
  att_splits.mat  att (a x z class-attribute matrix; AWA2 also carries
                  original_att on the raw 0-100 scale), allclasses_names
                  (z x 1 cell of strings), trainval_loc / test_unseen_loc
                  (1-based image indices)
"""

from __future__ import annotations

import os

import numpy as np
from scipy.io import loadmat

from .errors import ConvertError


def _require(path: str):
    if not os.path.exists(path):
        raise ConvertError(f"missing source file: {path}")
    return loadmat(path)


def _cell_to_str(cell) -> str:
    value = cell
    while isinstance(value, np.ndarray):
        if value.size == 0:
            raise ConvertError("empty class name cell")
        value = value.flat[0]
    return str(value)


def read_features_and_labels(source_dir: str):
    """(m x d float64 features, m int64 0-based labels)."""
    mat = _require(os.path.join(source_dir, "res101.mat"))
    for key in ("features", "labels"):
        if key not in mat:
            raise ConvertError(f"res101.mat lacks the {key!r} variable")
    features = np.asarray(mat["features"], dtype=np.float64).T
    labels = np.asarray(mat["labels"]).reshape(-1).astype(np.int64) - 1
    if features.shape[0] != labels.shape[0]:
        raise ConvertError(
            f"res101.mat: {features.shape[0]} feature columns vs "
            f"{labels.shape[0]} labels")
    if labels.min() < 0:
        raise ConvertError("res101.mat: labels must be 1-based class ids")
    return features, labels


def read_splits(source_dir: str):
    """(attribute matrix z x a, optional raw-scale matrix, class names,
    trainval image indices, test-unseen image indices; indices 0-based)."""
    mat = _require(os.path.join(source_dir, "att_splits.mat"))
    for key in ("att", "allclasses_names", "trainval_loc", "test_unseen_loc"):
        if key not in mat:
            raise ConvertError(f"att_splits.mat lacks the {key!r} variable")
    att = np.asarray(mat["att"], dtype=np.float64).T          # z x a
    original = None
    if "original_att" in mat:
        original = np.asarray(mat["original_att"], dtype=np.float64).T
        if original.shape != att.shape:
            raise ConvertError("att_splits.mat: original_att shape differs from att")
    names = [_cell_to_str(c) for c in np.asarray(mat["allclasses_names"]).reshape(-1)]
    if len(names) != att.shape[0]:
        raise ConvertError(
            f"att_splits.mat: {len(names)} class names for {att.shape[0]} "
            "attribute rows")
    trainval = np.asarray(mat["trainval_loc"]).reshape(-1).astype(np.int64) - 1
    test_unseen = np.asarray(mat["test_unseen_loc"]).reshape(-1).astype(np.int64) - 1
    return att, original, names, trainval, test_unseen
