"""Pure-numpy kernel implementations.

Every function here has a numba twin in ``numba_backend`` with the same
signature; ``deeppsl.kernels`` picks one at import time. Potentials arrive
flattened: per-potential weight/exponent/offset arrays plus CSR-style
(ptr, idx, coef) triples for the free (y) and observed (x) coefficients.
The ``*_pot`` arrays map each flattened coefficient entry back to its
potential row, which is what the vectorized path needs; the numba twin
walks the ptr arrays instead.
"""

import numpy as np


def linear_forms(weights, exponents, offsets,
                 y_ptr, y_idx, y_coef, y_pot,
                 x_ptr, x_idx, x_coef, x_pot,
                 x, y):
    """Value of every potential's linear form l_j = offset_j + c_y.y + c_x.x."""
    k = offsets.shape[0]
    l = offsets.copy()
    if y_idx.size:
        l += np.bincount(y_pot, weights=y_coef * y[y_idx], minlength=k)
    if x_idx.size:
        l += np.bincount(x_pot, weights=x_coef * x[x_idx], minlength=k)
    return l


def energy(weights, exponents, offsets,
           y_ptr, y_idx, y_coef, y_pot,
           x_ptr, x_idx, x_coef, x_pot,
           x, y):
    if offsets.shape[0] == 0:
        return 0.0
    l = linear_forms(weights, exponents, offsets,
                     y_ptr, y_idx, y_coef, y_pot,
                     x_ptr, x_idx, x_coef, x_pot, x, y)
    h = np.maximum(l, 0.0)
    phi = np.where(exponents == 2, h * h, h)
    return float(weights @ phi)


def soft_energy(weights, exponents, offsets,
                y_ptr, y_idx, y_coef, y_pot,
                x_ptr, x_idx, x_coef, x_pot,
                x, y, gamma_lo, gamma_hi, nu, anchor):
    e = energy(weights, exponents, offsets,
               y_ptr, y_idx, y_coef, y_pot,
               x_ptr, x_idx, x_coef, x_pot, x, y)
    below = np.maximum(-y, 0.0)
    above = np.maximum(y - 1.0, 0.0)
    e += gamma_lo * float(below @ below) + gamma_hi * float(above @ above)
    if nu > 0.0:
        d = y - anchor
        e += nu * float(d @ d)
    return e


def _hinge_factors(weights, exponents, l):
    # d/dl of theta * max(l,0)^p; subgradient 0 at the p=1 kink.
    h = np.maximum(l, 0.0)
    return np.where(exponents == 2, 2.0 * weights * h, weights * (l > 0.0))


def grad_y(weights, exponents, offsets,
           y_ptr, y_idx, y_coef, y_pot,
           x_ptr, x_idx, x_coef, x_pot,
           x, y, gamma_lo, gamma_hi, nu, anchor):
    g = np.zeros_like(y)
    if offsets.shape[0] and y_idx.size:
        l = linear_forms(weights, exponents, offsets,
                         y_ptr, y_idx, y_coef, y_pot,
                         x_ptr, x_idx, x_coef, x_pot, x, y)
        fac = _hinge_factors(weights, exponents, l)
        g += np.bincount(y_idx, weights=y_coef * fac[y_pot], minlength=y.shape[0])
    g += -2.0 * gamma_lo * np.maximum(-y, 0.0)
    g += 2.0 * gamma_hi * np.maximum(y - 1.0, 0.0)
    if nu > 0.0:
        g += 2.0 * nu * (y - anchor)
    return g


def grad_x(weights, exponents, offsets,
           y_ptr, y_idx, y_coef, y_pot,
           x_ptr, x_idx, x_coef, x_pot,
           x, y):
    g = np.zeros_like(x)
    if offsets.shape[0] and x_idx.size:
        l = linear_forms(weights, exponents, offsets,
                         y_ptr, y_idx, y_coef, y_pot,
                         x_ptr, x_idx, x_coef, x_pot, x, y)
        fac = _hinge_factors(weights, exponents, l)
        g += np.bincount(x_idx, weights=x_coef * fac[x_pot], minlength=x.shape[0])
    return g


# descend status codes, shared with the numba twin
CONVERGED = 0
MAX_ITERS = 1
NON_FINITE = 2


def descend(weights, exponents, offsets,
            y_ptr, y_idx, y_coef, y_pot,
            x_ptr, x_idx, x_coef, x_pot,
            x, y0, step, max_iters, threshold,
            gamma_lo, gamma_hi, nu, anchor):
    """Fixed-step gradient descent on the soft energy.

    Stops when the energy change between consecutive iterates drops below
    ``threshold`` or after ``max_iters`` steps. Returns (y, iterations,
    final soft energy, status).
    """
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
        y = y - step * g
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
