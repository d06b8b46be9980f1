"""Builders for miniature source directories in the published layouts.

Class/attribute counts match the real distributions (the converter and its
acceptance checks pin them); image counts stay small.
"""

import numpy as np
from scipy.io import savemat


def _cellify(names):
    return np.array([[np.array([n])] for n in names], dtype=object)


def make_awa2_source(path, images_per_class=2, seed=0):
    """50 classes, 85 attributes, 2048-d features, 40/10 proposed split."""
    rng = np.random.default_rng(seed)
    n_classes, n_attrs, d = 50, 85, 2048
    names = [f"animal+{i:02d}" for i in range(n_classes)]
    m = n_classes * images_per_class
    labels = np.repeat(np.arange(1, n_classes + 1), images_per_class)
    features = rng.normal(size=(d, m)).astype(np.float64)

    original_att = rng.uniform(0.0, 100.0, size=(n_attrs, n_classes))
    original_att[0, 0] = 0.0            # pin the published 0-100 scale
    original_att[1, 0] = 100.0
    att = original_att / 100.0

    test_classes = set(range(40, 50))
    trainval = np.array([i + 1 for i in range(m)
                         if (labels[i] - 1) not in test_classes])
    test_unseen = np.array([i + 1 for i in range(m)
                            if (labels[i] - 1) in test_classes])

    path.mkdir(parents=True, exist_ok=True)
    savemat(path / "res101.mat",
            {"features": features, "labels": labels.reshape(-1, 1)})
    savemat(path / "att_splits.mat",
            {"att": att, "original_att": original_att,
             "allclasses_names": _cellify(names),
             "trainval_loc": trainval.reshape(-1, 1),
             "test_unseen_loc": test_unseen.reshape(-1, 1)})
    return names, labels


def make_cub_source(path, images_per_class=2, seed=1, with_annotations=True):
    """200 classes, 312 attributes, per-image annotation files by default."""
    rng = np.random.default_rng(seed)
    n_classes, n_attrs, d = 200, 312, 2048
    names = [f"{i + 1:03d}.Some_Bird_{i:03d}" for i in range(n_classes)]
    m = n_classes * images_per_class
    labels = np.repeat(np.arange(1, n_classes + 1), images_per_class)
    features = rng.normal(size=(d, m)).astype(np.float64)
    att = rng.uniform(0.0, 1.0, size=(n_attrs, n_classes))

    test_classes = set(range(150, 200))
    trainval = np.array([i + 1 for i in range(m)
                         if (labels[i] - 1) not in test_classes])
    test_unseen = np.array([i + 1 for i in range(m)
                            if (labels[i] - 1) in test_classes])

    path.mkdir(parents=True, exist_ok=True)
    savemat(path / "res101.mat",
            {"features": features, "labels": labels.reshape(-1, 1)})
    savemat(path / "att_splits.mat",
            {"att": att, "allclasses_names": _cellify(names),
             "trainval_loc": trainval.reshape(-1, 1),
             "test_unseen_loc": test_unseen.reshape(-1, 1)})

    presence = None
    if with_annotations:
        presence = rng.integers(0, 2, size=(m, n_attrs))
        with open(path / "image_class_labels.txt", "w") as fh:
            for i in range(m):
                fh.write(f"{i + 1} {labels[i]}\n")
        with open(path / "image_attribute_labels.txt", "w") as fh:
            for i in range(m):
                for a in range(n_attrs):
                    extra = " 0" if (i + a) % 97 == 0 else ""   # stray columns
                    fh.write(f"{i + 1} {a + 1} {presence[i, a]} 3 10.5{extra}\n")
    return names, labels, presence
