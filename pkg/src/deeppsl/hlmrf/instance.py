"""Hinge-loss MRF instances: weighted hinge potentials over a box of soft truth values.

A potential is theta * max(l, 0)^p with l linear in the free variables y and
the observed variables x. An instance is a bag of potentials plus the two
variable counts; it compiles itself to the flat array layout the kernels
consume and is immutable afterwards, so concurrent inference is safe.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import InputError


def _as_coeff_tuple(pairs):
    out = []
    for idx, coef in pairs:
        out.append((int(idx), float(coef)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class LinearPotential:
    """One hinge term: weight * max(offset + c_y.y + c_x.x, 0)^exponent."""

    y_coeffs: tuple[tuple[int, float], ...]
    x_coeffs: tuple[tuple[int, float], ...]
    offset: float
    weight: float
    exponent: int = 2

    def __post_init__(self):
        object.__setattr__(self, "y_coeffs", _as_coeff_tuple(self.y_coeffs))
        object.__setattr__(self, "x_coeffs", _as_coeff_tuple(self.x_coeffs))
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "weight", float(self.weight))
        if self.weight < 0.0:
            raise ValueError(f"potential weight must be >= 0, got {self.weight}")
        if self.exponent not in (1, 2):
            raise ValueError(f"potential exponent must be 1 or 2, got {self.exponent}")
        vals = [self.offset, self.weight] + [c for _, c in self.y_coeffs] \
            + [c for _, c in self.x_coeffs]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("potential has non-finite coefficients")
        if any(i < 0 for i, _ in self.y_coeffs) or any(i < 0 for i, _ in self.x_coeffs):
            raise ValueError("negative variable index in potential")

    def linear_form(self, x: np.ndarray, y: np.ndarray) -> float:
        l = self.offset
        for i, c in self.y_coeffs:
            l += c * y[i]
        for j, c in self.x_coeffs:
            l += c * x[j]
        return l

    def value(self, x: np.ndarray, y: np.ndarray) -> float:
        h = max(self.linear_form(x, y), 0.0)
        return self.weight * (h * h if self.exponent == 2 else h)


class HlmrfInstance:
    """Immutable set of potentials over n_free y-variables and n_obs x-variables."""

    def __init__(self, potentials, n_free: int, n_obs: int):
        potentials = tuple(potentials)
        if n_free < 1:
            raise ValueError(f"an instance needs at least one free variable, got {n_free}")
        if n_obs < 0:
            raise ValueError(f"n_obs must be >= 0, got {n_obs}")
        for p in potentials:
            for i, _ in p.y_coeffs:
                if i >= n_free:
                    raise ValueError(f"potential references y{i}, but n_free={n_free}")
            for j, _ in p.x_coeffs:
                if j >= n_obs:
                    raise ValueError(f"potential references x{j}, but n_obs={n_obs}")
        self._potentials = potentials
        self._n_free = int(n_free)
        self._n_obs = int(n_obs)
        self._arrays = _flatten(potentials)

    @property
    def potentials(self):
        return self._potentials

    @property
    def n_free(self) -> int:
        return self._n_free

    @property
    def n_obs(self) -> int:
        return self._n_obs

    @property
    def n_potentials(self) -> int:
        return len(self._potentials)

    def arrays(self):
        """Flat kernel layout: (weights, exponents, offsets, y_ptr, y_idx, y_coef, y_pot, x_ptr, x_idx, x_coef, x_pot)."""
        return self._arrays

    def dump(self) -> str:
        return dump_potentials(self._potentials)

    def __repr__(self):
        return (f"HlmrfInstance(n_potentials={self.n_potentials}, "
                f"n_free={self._n_free}, n_obs={self._n_obs})")


def _flatten(potentials):
    k = len(potentials)
    weights = np.empty(k, dtype=np.float64)
    exponents = np.empty(k, dtype=np.int64)
    offsets = np.empty(k, dtype=np.float64)
    y_ptr = np.zeros(k + 1, dtype=np.int64)
    x_ptr = np.zeros(k + 1, dtype=np.int64)
    y_idx, y_coef, y_pot = [], [], []
    x_idx, x_coef, x_pot = [], [], []
    for j, p in enumerate(potentials):
        weights[j] = p.weight
        exponents[j] = p.exponent
        offsets[j] = p.offset
        for i, c in p.y_coeffs:
            y_idx.append(i)
            y_coef.append(c)
            y_pot.append(j)
        for i, c in p.x_coeffs:
            x_idx.append(i)
            x_coef.append(c)
            x_pot.append(j)
        y_ptr[j + 1] = len(y_idx)
        x_ptr[j + 1] = len(x_idx)
    return (weights, exponents, offsets,
            y_ptr, np.asarray(y_idx, dtype=np.int64),
            np.asarray(y_coef, dtype=np.float64),
            np.asarray(y_pot, dtype=np.int64),
            x_ptr, np.asarray(x_idx, dtype=np.int64),
            np.asarray(x_coef, dtype=np.float64),
            np.asarray(x_pot, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class SolverConfig:
    """Knobs for the soft-constrained MAP solve.

    gamma_lower/gamma_upper penalize box violations (always squared); a
    positive proximal_nu adds nu*||y - anchor||^2, which makes the argmin
    unique and hence continuous in the observed inputs. anchor=None means
    the initial iterate is used as the proximal center.
    """

    gamma_lower: float = 100.0
    gamma_upper: float = 100.0
    proximal_nu: float = 0.0
    anchor: np.ndarray | None = None
    step_size: float = 5e-3
    max_iterations: int = 5000
    loss_change_threshold: float = 1e-6
    init_value: float = 0.5

    def __post_init__(self):
        if self.gamma_lower <= 0.0 or self.gamma_upper <= 0.0:
            raise ValueError("box penalty weights must be > 0")
        if self.proximal_nu < 0.0:
            raise ValueError("proximal_nu must be >= 0")
        if self.step_size <= 0.0:
            raise ValueError("step_size must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.loss_change_threshold <= 0.0:
            raise ValueError("loss_change_threshold must be > 0")
        if not 0.0 <= self.init_value <= 1.0:
            raise ValueError("init_value must lie in [0, 1]")
        if self.anchor is not None:
            object.__setattr__(self, "anchor",
                               np.asarray(self.anchor, dtype=np.float64))


# --- text dump: one potential per line, for debugging and fixtures ---------

def _fmt_terms(coeffs, var):
    parts = []
    for i, c in coeffs:
        sign = "+" if c >= 0 else "-"
        parts.append(f"{sign} {abs(c)!r}*{var}{i}")
    return parts


def dump_potentials(potentials) -> str:
    lines = []
    for p in potentials:
        terms = _fmt_terms(p.y_coeffs, "y") + _fmt_terms(p.x_coeffs, "x")
        tail = (" " + " ".join(terms)) if terms else ""
        lines.append(f"{p.weight!r} {p.exponent} : {p.offset!r}{tail}")
    return "\n".join(lines) + ("\n" if lines else "")


_TERM_RE = re.compile(r"([+-])\s*([0-9.eE+-]+)\*([xy])(\d+)")
_HEAD_RE = re.compile(r"^\s*(\S+)\s+([12])\s*:\s*(\S+)\s*(.*)$")


def load_potentials(text: str):
    """Inverse of dump_potentials (round-trips through repr floats)."""
    potentials = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _HEAD_RE.match(line)
        if m is None:
            raise InputError(f"instance dump line {lineno}: cannot parse {raw!r}")
        weight, exponent, offset, rest = m.groups()
        y_coeffs, x_coeffs = [], []
        consumed = 0
        for tm in _TERM_RE.finditer(rest):
            sign, mag, axis, idx = tm.groups()
            coef = float(mag) * (1.0 if sign == "+" else -1.0)
            (y_coeffs if axis == "y" else x_coeffs).append((int(idx), coef))
            consumed += tm.end() - tm.start()
        if rest.replace(" ", "") and consumed == 0:
            raise InputError(f"instance dump line {lineno}: bad term list {rest!r}")
        potentials.append(LinearPotential(
            y_coeffs=y_coeffs, x_coeffs=x_coeffs,
            offset=float(offset), weight=float(weight), exponent=int(exponent)))
    return potentials


def load_instance(text: str, n_free: int | None = None,
                  n_obs: int | None = None) -> HlmrfInstance:
    potentials = load_potentials(text)
    if n_free is None:
        n_free = 1 + max((i for p in potentials for i, _ in p.y_coeffs), default=-1)
    if n_obs is None:
        n_obs = 1 + max((i for p in potentials for i, _ in p.x_coeffs), default=-1)
    return HlmrfInstance(potentials, n_free=max(n_free, 1), n_obs=n_obs)
