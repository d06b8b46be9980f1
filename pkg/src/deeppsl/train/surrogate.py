"""Surrogate objective steering the inference argmin toward lower loss.

Given the current MAP solution y_t and the loss gradient g_L at y_t, the
surrogate is

    L2 = f_soft(x, y_t - alpha * g_L) - f_soft(x, y_t)

as a function of the network outputs x; y_t is held constant, so no
differentiation through the argmin is needed. For small alpha,
L2 / alpha -> -grad_y(f_soft) . g_L, so descending L2 in the network
weights rotates the energy's y-gradient against the loss gradient.
"""

from __future__ import annotations

import numpy as np

from ..hlmrf.instance import HlmrfInstance, SolverConfig
from ..hlmrf.solve import grad_x, soft_energy


def shifted_point(y_t: np.ndarray, loss_grad: np.ndarray, alpha: float) -> np.ndarray:
    return y_t - alpha * loss_grad


def surrogate_loss(instance: HlmrfInstance, x: np.ndarray, y_t: np.ndarray,
                   loss_grad: np.ndarray, alpha: float,
                   config: SolverConfig) -> float:
    y_shift = shifted_point(y_t, loss_grad, alpha)
    return soft_energy(instance, x, y_shift, config) - soft_energy(instance, x, y_t, config)


def surrogate_grad_x(instance: HlmrfInstance, x: np.ndarray, y_t: np.ndarray,
                     loss_grad: np.ndarray, alpha: float,
                     config: SolverConfig) -> np.ndarray:
    """d L2 / d x. Box and proximal penalties do not involve x, so only the
    hinge terms differ between the two evaluation points."""
    y_shift = shifted_point(y_t, loss_grad, alpha)
    return grad_x(instance, x, y_shift, config) - grad_x(instance, x, y_t, config)
