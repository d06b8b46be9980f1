"""Shared grounded template: one potential structure reused across samples.

All samples of a classification task ground to the same instance; only the
observed vector x (the network outputs) changes per sample. The template
carries the two permutations that glue network space and class space to the
instance's x and y slots.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..hlmrf.instance import HlmrfInstance


@dataclass(eq=False)
class InferenceTemplate:
    instance: HlmrfInstance
    x_slot_of_output: np.ndarray    # (n_outputs,) x index per network output, -1 if unused
    class_of_slot: np.ndarray       # (n_free,) class index per y slot
    n_classes: int
    class_names: list[str] | None = None

    def __post_init__(self):
        self.x_slot_of_output = np.asarray(self.x_slot_of_output, dtype=np.int64)
        self.class_of_slot = np.asarray(self.class_of_slot, dtype=np.int64)
        used = self.x_slot_of_output[self.x_slot_of_output >= 0]
        if len(np.unique(used)) != self.instance.n_obs:
            raise ValueError("network outputs do not cover every observed slot")
        if self.class_of_slot.shape != (self.instance.n_free,):
            raise ValueError("class_of_slot must assign every free slot")
        # class -> y slot, -1 when the class grounded to no atom
        slot = np.full(self.n_classes, -1, dtype=np.int64)
        slot[self.class_of_slot] = np.arange(self.instance.n_free)
        self.slot_of_class = slot

    @property
    def n_outputs(self) -> int:
        return self.x_slot_of_output.shape[0]

    def x_from_outputs(self, outputs: np.ndarray) -> np.ndarray:
        x = np.empty(self.instance.n_obs, dtype=np.float64)
        mask = self.x_slot_of_output >= 0
        x[self.x_slot_of_output[mask]] = outputs[mask]
        return x

    def scores_from_y(self, y: np.ndarray, fill: float = 0.5) -> np.ndarray:
        scores = np.full(self.n_classes, fill, dtype=np.float64)
        scores[self.class_of_slot] = y
        return scores

    def loss_grad_to_slots(self, class_grad: np.ndarray) -> np.ndarray:
        """Project a class-space loss gradient onto the instance's y slots."""
        return np.asarray(class_grad, dtype=np.float64)[self.class_of_slot]
