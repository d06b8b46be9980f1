"""Class-attribute associations and train/test class splits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class AttributeMatrix:
    """Associations in [0,1]: rows are classes, columns are attributes."""

    values: np.ndarray
    class_names: list[str]
    attribute_names: list[str]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError("attribute matrix must be 2-D")
        z, a = self.values.shape
        if len(self.class_names) != z or len(self.attribute_names) != a:
            raise ValueError("class/attribute name counts do not match the matrix")
        if len(set(self.class_names)) != z:
            raise ValueError("duplicate class names")
        if len(set(self.attribute_names)) != a:
            raise ValueError("duplicate attribute names")
        if not np.isfinite(self.values).all():
            raise ValueError("attribute matrix has non-finite entries")
        if self.values.min() < 0.0 or self.values.max() > 1.0:
            raise ValueError("attribute associations must lie in [0, 1]")

    @property
    def n_classes(self) -> int:
        return self.values.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.values.shape[1]

    def row(self, class_name: str) -> np.ndarray:
        try:
            return self.values[self.class_names.index(class_name)]
        except ValueError:
            raise KeyError(f"unknown class {class_name!r}") from None

    def global_mean(self) -> float:
        return float(self.values.mean())


@dataclass(frozen=True)
class SplitSpec:
    """Disjoint train/test class name lists."""

    train: tuple[str, ...]
    test: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "test", tuple(self.test))
        overlap = set(self.train) & set(self.test)
        if overlap:
            raise ValueError(f"train and test classes overlap: {sorted(overlap)}")
