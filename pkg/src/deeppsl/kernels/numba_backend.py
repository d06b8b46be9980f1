"""Numba-compiled kernel implementations.

Same signatures and semantics as ``numpy_backend``; loops over the CSR
(ptr, idx, coef) layout instead of vectorizing. fastmath stays off: the
energy identities the tests pin (e.g. the paired-rule quadratic) rely on
IEEE-exact cancellation. nogil lets batch inference fan out over threads.
"""

import numpy as np
from numba import njit

CONVERGED = 0
MAX_ITERS = 1
NON_FINITE = 2

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def energy(weights, exponents, offsets,
           y_ptr, y_idx, y_coef, y_pot,
           x_ptr, x_idx, x_coef, x_pot,
           x, y):
    total = 0.0
    for j in range(offsets.shape[0]):
        l = offsets[j]
        for t in range(y_ptr[j], y_ptr[j + 1]):
            l += y_coef[t] * y[y_idx[t]]
        for t in range(x_ptr[j], x_ptr[j + 1]):
            l += x_coef[t] * x[x_idx[t]]
        if l > 0.0:
            if exponents[j] == 2:
                total += weights[j] * l * l
            else:
                total += weights[j] * l
    return total


@njit(**_JIT)
def soft_energy(weights, exponents, offsets,
                y_ptr, y_idx, y_coef, y_pot,
                x_ptr, x_idx, x_coef, x_pot,
                x, y, gamma_lo, gamma_hi, nu, anchor):
    e = energy(weights, exponents, offsets,
               y_ptr, y_idx, y_coef, y_pot,
               x_ptr, x_idx, x_coef, x_pot, x, y)
    for i in range(y.shape[0]):
        if y[i] < 0.0:
            e += gamma_lo * y[i] * y[i]
        elif y[i] > 1.0:
            d = y[i] - 1.0
            e += gamma_hi * d * d
    if nu > 0.0:
        for i in range(y.shape[0]):
            d = y[i] - anchor[i]
            e += nu * d * d
    return e


@njit(**_JIT)
def grad_y(weights, exponents, offsets,
           y_ptr, y_idx, y_coef, y_pot,
           x_ptr, x_idx, x_coef, x_pot,
           x, y, gamma_lo, gamma_hi, nu, anchor):
    g = np.zeros_like(y)
    for j in range(offsets.shape[0]):
        l = offsets[j]
        for t in range(y_ptr[j], y_ptr[j + 1]):
            l += y_coef[t] * y[y_idx[t]]
        for t in range(x_ptr[j], x_ptr[j + 1]):
            l += x_coef[t] * x[x_idx[t]]
        if l > 0.0:
            if exponents[j] == 2:
                fac = 2.0 * weights[j] * l
            else:
                fac = weights[j]
            for t in range(y_ptr[j], y_ptr[j + 1]):
                g[y_idx[t]] += fac * y_coef[t]
    for i in range(y.shape[0]):
        if y[i] < 0.0:
            g[i] += 2.0 * gamma_lo * y[i]
        elif y[i] > 1.0:
            g[i] += 2.0 * gamma_hi * (y[i] - 1.0)
    if nu > 0.0:
        for i in range(y.shape[0]):
            g[i] += 2.0 * nu * (y[i] - anchor[i])
    return g


@njit(**_JIT)
def grad_x(weights, exponents, offsets,
           y_ptr, y_idx, y_coef, y_pot,
           x_ptr, x_idx, x_coef, x_pot,
           x, y):
    g = np.zeros_like(x)
    for j in range(offsets.shape[0]):
        l = offsets[j]
        for t in range(y_ptr[j], y_ptr[j + 1]):
            l += y_coef[t] * y[y_idx[t]]
        for t in range(x_ptr[j], x_ptr[j + 1]):
            l += x_coef[t] * x[x_idx[t]]
        if l > 0.0:
            if exponents[j] == 2:
                fac = 2.0 * weights[j] * l
            else:
                fac = weights[j]
            for t in range(x_ptr[j], x_ptr[j + 1]):
                g[x_idx[t]] += fac * x_coef[t]
    return g


@njit(**_JIT)
def descend(weights, exponents, offsets,
            y_ptr, y_idx, y_coef, y_pot,
            x_ptr, x_idx, x_coef, x_pot,
            x, y0, step, max_iters, threshold,
            gamma_lo, gamma_hi, nu, anchor):
    y = y0.copy()
    f_prev = soft_energy(weights, exponents, offsets,
                         y_ptr, y_idx, y_coef, y_pot,
                         x_ptr, x_idx, x_coef, x_pot,
                         x, y, gamma_lo, gamma_hi, nu, anchor)
    if not np.isfinite(f_prev):
        return y, 0, f_prev, NON_FINITE
    status = MAX_ITERS
    iters = 0
    for it in range(1, max_iters + 1):
        g = grad_y(weights, exponents, offsets,
                   y_ptr, y_idx, y_coef, y_pot,
                   x_ptr, x_idx, x_coef, x_pot,
                   x, y, gamma_lo, gamma_hi, nu, anchor)
        for i in range(y.shape[0]):
            y[i] -= step * g[i]
        f = soft_energy(weights, exponents, offsets,
                        y_ptr, y_idx, y_coef, y_pot,
                        x_ptr, x_idx, x_coef, x_pot,
                        x, y, gamma_lo, gamma_hi, nu, anchor)
        iters = it
        if not np.isfinite(f):
            return y, iters, f, NON_FINITE
        if abs(f - f_prev) < threshold:
            f_prev = f
            status = CONVERGED
            break
        f_prev = f
    return y, iters, f_prev, status
