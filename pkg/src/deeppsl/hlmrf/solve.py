"""Energy evaluation, gradients, and MAP inference for HL-MRF instances.

The total energy is sum_j theta_j * max(l_j(x, y), 0)^{p_j}; it is convex in
y, so MAP inference is a box-constrained convex minimization. The box is
enforced softly (squared penalties outside [0,1]) and solved by fixed-step
gradient descent; ``brute_force_map`` is an independent exhaustive oracle
for small instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import NumericError
from .instance import HlmrfInstance, SolverConfig

_DEFAULT = SolverConfig()


def _check_dims(instance: HlmrfInstance, x, y=None):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (instance.n_obs,):
        raise ValueError(f"x has shape {x.shape}, expected ({instance.n_obs},)")
    if y is None:
        return x
    y = np.asarray(y, dtype=np.float64)
    if y.shape != (instance.n_free,):
        raise ValueError(f"y has shape {y.shape}, expected ({instance.n_free},)")
    return x, y


def _prox_args(config: SolverConfig, n_free: int):
    anchor = config.anchor
    if anchor is None:
        anchor = np.zeros(n_free)
    elif anchor.shape != (n_free,):
        raise ValueError(f"anchor has shape {anchor.shape}, expected ({n_free},)")
    return config.proximal_nu, anchor


def energy(instance: HlmrfInstance, x, y) -> float:
    x, y = _check_dims(instance, x, y)
    return float(kernels.energy(*instance.arrays(), x, y))


def soft_energy(instance: HlmrfInstance, x, y, config: SolverConfig = _DEFAULT) -> float:
    x, y = _check_dims(instance, x, y)
    nu, anchor = _prox_args(config, instance.n_free)
    return float(kernels.soft_energy(*instance.arrays(), x, y,
                                     config.gamma_lower, config.gamma_upper,
                                     nu, anchor))


def grad_y(instance: HlmrfInstance, x, y, config: SolverConfig = _DEFAULT) -> np.ndarray:
    x, y = _check_dims(instance, x, y)
    nu, anchor = _prox_args(config, instance.n_free)
    return np.asarray(kernels.grad_y(*instance.arrays(), x, y,
                                     config.gamma_lower, config.gamma_upper,
                                     nu, anchor))


def grad_x(instance: HlmrfInstance, x, y, config: SolverConfig = _DEFAULT) -> np.ndarray:
    # Box and proximal penalties touch y only, so config never changes this.
    x, y = _check_dims(instance, x, y)
    return np.asarray(kernels.grad_x(*instance.arrays(), x, y))


@dataclass(frozen=True, eq=False)
class MapResult:
    y: np.ndarray          # clamped to [0,1] for reporting
    y_raw: np.ndarray      # actual iterate (soft constraints allow tiny excursions)
    iterations: int
    soft_energy: float
    converged: bool


def map_infer(instance: HlmrfInstance, x, config: SolverConfig = _DEFAULT) -> MapResult:
    """Minimize the soft energy over y by fixed-step gradient descent.

    Starts from init_value * ones, stops when the per-step energy change
    falls under loss_change_threshold or at max_iterations. When
    proximal_nu > 0 and no anchor is set, the initial iterate anchors the
    proximal term.
    """
    x = _check_dims(instance, x)
    y0 = np.full(instance.n_free, config.init_value, dtype=np.float64)
    anchor = config.anchor
    if anchor is None:
        anchor = y0
    elif anchor.shape != (instance.n_free,):
        raise ValueError(f"anchor has shape {anchor.shape}, expected ({instance.n_free},)")
    y_raw, iters, f_last, status = kernels.descend(
        *instance.arrays(), x, y0,
        float(config.step_size), int(config.max_iterations),
        float(config.loss_change_threshold),
        float(config.gamma_lower), float(config.gamma_upper),
        float(config.proximal_nu), anchor)
    if status == kernels.NON_FINITE:
        raise NumericError(
            f"non-finite energy after {iters} iterations "
            f"(step_size={config.step_size}); weights or step size too large")
    y_raw = np.asarray(y_raw)
    return MapResult(y=np.clip(y_raw, 0.0, 1.0), y_raw=y_raw,
                     iterations=int(iters), soft_energy=float(f_last),
                     converged=status == kernels.CONVERGED)


def brute_force_map(instance: HlmrfInstance, x, grid_step: float,
                    config: SolverConfig = _DEFAULT) -> np.ndarray:
    """Exhaustive grid minimizer of the soft energy; verification oracle.

    Evaluates every point of {0, grid_step, ..., 1}^n_free with a dense
    re-expression of the energy (independent of the sparse kernels) and
    returns the grid point with the smallest value. Guarded to n_free <= 4.
    """
    x = _check_dims(instance, x)
    n = instance.n_free
    if n > 4:
        raise ValueError(f"brute force is limited to n_free <= 4, got {n}")
    steps = round(1.0 / grid_step)
    if abs(steps * grid_step - 1.0) > 1e-9:
        raise ValueError(f"grid_step {grid_step} does not divide 1 evenly")
    axis = np.linspace(0.0, 1.0, steps + 1)

    k = instance.n_potentials
    dense_y = np.zeros((k, n))
    const = np.zeros(k)
    weights = np.zeros(k)
    exps = np.zeros(k, dtype=np.int64)
    for j, p in enumerate(instance.potentials):
        weights[j] = p.weight
        exps[j] = p.exponent
        const[j] = p.offset + sum(c * x[i] for i, c in p.x_coeffs)
        for i, c in p.y_coeffs:
            dense_y[j, i] += c
    nu, anchor = _prox_args(config, n)

    shape = (steps + 1,) * n
    total = (steps + 1) ** n
    best_val = np.inf
    best_y = None
    chunk = 65536
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        coords = np.unravel_index(idx, shape)
        ygrid = axis[np.stack(coords, axis=1)]          # (B, n)
        if k:
            l = ygrid @ dense_y.T + const               # (B, k)
            h = np.maximum(l, 0.0)
            phi = np.where(exps == 2, h * h, h)
            vals = phi @ weights
        else:
            vals = np.zeros(len(idx))
        if nu > 0.0:
            d = ygrid - anchor
            vals = vals + nu * (d * d).sum(axis=1)
        j = int(np.argmin(vals))
        if vals[j] < best_val:
            best_val = float(vals[j])
            best_y = ygrid[j].copy()
    return best_y
