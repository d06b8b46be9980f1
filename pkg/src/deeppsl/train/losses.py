"""Hinge rank loss over inferred class scores.

L(y, label) = sum_{j != label} max(margin - y[label] + y[j], 0); zero exactly
when the target score beats every other score by the margin.
"""

from __future__ import annotations

import numpy as np


def hinge_rank_loss(y: np.ndarray, label: int, margin: float) -> float:
    y = np.asarray(y, dtype=np.float64)
    viol = margin - y[label] + y
    viol[label] = 0.0
    return float(np.maximum(viol, 0.0).sum())


def hinge_rank_grad(y: np.ndarray, label: int, margin: float) -> np.ndarray:
    """Subgradient: +1 per active competitor, minus the active count on the
    target coordinate; 0 at exact ties."""
    y = np.asarray(y, dtype=np.float64)
    viol = margin - y[label] + y
    viol[label] = 0.0
    active = viol > 0.0
    g = active.astype(np.float64)
    g[label] = -float(active.sum())
    return g
