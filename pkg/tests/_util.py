"""Shared test helpers: independent oracles and random instance factories.

The oracles here deliberately avoid the library code paths they are used to
verify: Lukasiewicz semantics is computed by folding the binary t-norm and
t-conorm, and derivative checks use only energy *values* via central
differences.
"""


from deeppsl.hlmrf import HlmrfInstance, LinearPotential


def luk_and(truths):
    """Fold the binary Lukasiewicz t-norm max(0, a + b - 1)."""
    acc = truths[0]
    for t in truths[1:]:
        acc = max(0.0, acc + t - 1.0)
    return acc


def luk_or(truths):
    """Fold the binary Lukasiewicz t-conorm min(1, a + b)."""
    acc = truths[0]
    for t in truths[1:]:
        acc = min(1.0, acc + t)
    return acc


def luk_distance(body_truths, head_truths):
    """Distance to satisfaction of body -> head under Lukasiewicz logic."""
    return max(0.0, luk_and(body_truths) - luk_or(head_truths))


def make_random_instance(rng, n_free, n_obs, n_potentials, exponent=2):
    pots = []
    for _ in range(n_potentials):
        ny = int(rng.integers(1, n_free + 1))
        nx = int(rng.integers(0, n_obs + 1))
        yi = rng.choice(n_free, size=ny, replace=False)
        xi = rng.choice(n_obs, size=nx, replace=False) if nx else []
        pots.append(LinearPotential(
            y_coeffs=[(int(i), float(rng.uniform(-2, 2))) for i in yi],
            x_coeffs=[(int(j), float(rng.uniform(-2, 2))) for j in xi],
            offset=float(rng.uniform(-1, 1)),
            weight=float(rng.uniform(0.1, 2.0)),
            exponent=exponent))
    return HlmrfInstance(pots, n_free=n_free, n_obs=n_obs)


def central_diff(f, v, i, h):
    """(f(v + h e_i) - f(v - h e_i)) / 2h without touching gradient code."""
    up = v.copy()
    up[i] += h
    dn = v.copy()
    dn[i] -= h
    return (f(up) - f(dn)) / (2.0 * h)
