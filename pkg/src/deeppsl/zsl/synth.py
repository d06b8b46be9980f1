"""Synthetic attribute-based classification datasets.

Each class gets a distinct nonzero binary attribute signature; features are
a fixed random linear embedding of the signature plus Gaussian noise. With
zero noise a linear readout recovers the signature exactly, so a perfect
attribute network exists by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..train.loop import LabeledSample
from .attributes import AttributeMatrix, SplitSpec


@dataclass(eq=False)
class FeatureBundle:
    features: np.ndarray        # (m, d)
    labels: np.ndarray          # (m,) indices into class_names
    class_names: list[str]

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("feature/label row counts differ")

    def label_names(self) -> list[str]:
        return [self.class_names[i] for i in self.labels]

    def samples(self) -> list[LabeledSample]:
        z = len(self.class_names)
        out = []
        for u, c in zip(self.features, self.labels):
            one_hot = np.zeros(z)
            one_hot[c] = 1.0
            out.append(LabeledSample(features=u, class_index=int(c),
                                     one_hot=one_hot))
        return out


@dataclass(eq=False)
class ZslDataset:
    matrix: AttributeMatrix
    split: SplitSpec
    train: FeatureBundle
    test: FeatureBundle
    embedding: np.ndarray       # (d, a)
    noise_sigma: float


def _distinct_signatures(rng: np.random.Generator, count: int, n_attributes: int):
    if n_attributes <= 20:
        space = (1 << n_attributes) - 1    # nonzero signatures only
        if count > space:
            raise ValueError(
                f"cannot draw {count} distinct signatures from {n_attributes} attributes")
        codes = rng.choice(space, size=count, replace=False) + 1
        sigs = ((codes[:, None] >> np.arange(n_attributes)) & 1).astype(np.float64)
        return sigs
    seen = set()
    rows = []
    attempts = 0
    while len(rows) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise ValueError("failed to sample distinct attribute signatures")
        sig = rng.integers(0, 2, size=n_attributes)
        key = sig.tobytes()
        if sig.any() and key not in seen:
            seen.add(key)
            rows.append(sig.astype(np.float64))
    return np.stack(rows)


def synthesize(seed: int, n_train_classes: int, n_test_classes: int,
               n_attributes: int, feature_dim: int, per_class: int,
               noise_sigma: float) -> ZslDataset:
    if noise_sigma < 0.0:
        raise ValueError("noise_sigma must be >= 0")
    rng = np.random.default_rng(seed)
    total = n_train_classes + n_test_classes
    signatures = _distinct_signatures(rng, total, n_attributes)
    embedding = rng.normal(0.0, 1.0 / np.sqrt(n_attributes),
                           size=(feature_dim, n_attributes))

    class_names = [f"class{i:02d}" for i in range(total)]
    attribute_names = [f"attr{i:02d}" for i in range(n_attributes)]
    matrix = AttributeMatrix(values=signatures, class_names=class_names,
                             attribute_names=attribute_names)
    split = SplitSpec(train=class_names[:n_train_classes],
                      test=class_names[n_train_classes:])

    def sample_bundle(class_ids):
        feats, labels = [], []
        for local, ci in enumerate(class_ids):
            clean = embedding @ signatures[ci]
            noise = rng.normal(0.0, noise_sigma, size=(per_class, feature_dim)) \
                if noise_sigma > 0 else np.zeros((per_class, feature_dim))
            feats.append(clean + noise)
            labels.extend([local] * per_class)
        names = [class_names[ci] for ci in class_ids]
        return FeatureBundle(features=np.vstack(feats),
                             labels=np.array(labels), class_names=names)

    train = sample_bundle(range(n_train_classes))
    test = sample_bundle(range(n_train_classes, total))
    return ZslDataset(matrix=matrix, split=split, train=train, test=test,
                      embedding=embedding, noise_sigma=noise_sigma)
