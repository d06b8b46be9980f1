"""Flat key=value run configuration.

Defaults mirror the training hyperparameter table; unknown keys are
rejected so typos fail loudly. Command-line --set overrides win over the
config file.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import InputError
from .hlmrf.instance import SolverConfig
from .train.loop import TrainConfig


@dataclass(frozen=True)
class RunConfig:
    batch_size: int = 32
    epochs: int = 10
    inference_lr: float = 5e-3
    inference_threshold: float = 1e-6
    inference_max_iters: int = 5000
    alpha: float = 1e-4
    adam_lr: float = 1e-3
    adam_betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8
    weight_decay: float = 0.0
    inner_steps: int = 1
    margin: float = 0.3
    gamma: float = 100.0
    nu: float = 1e-3
    seed: int = 0

    def solver_config(self, training: bool = False) -> SolverConfig:
        """Inference knobs; the proximal term is active only while training."""
        return SolverConfig(
            gamma_lower=self.gamma, gamma_upper=self.gamma,
            proximal_nu=self.nu if training else 0.0,
            step_size=self.inference_lr,
            max_iterations=self.inference_max_iters,
            loss_change_threshold=self.inference_threshold)

    def train_config(self) -> TrainConfig:
        return TrainConfig(
            alpha=self.alpha, inner_steps=self.inner_steps, margin=self.margin,
            batch_size=self.batch_size, epochs=self.epochs,
            adam_lr=self.adam_lr, adam_betas=self.adam_betas,
            adam_eps=self.adam_eps, weight_decay=self.weight_decay,
            train_nu=self.nu, solver=self.solver_config(training=False))


_FIELDS = {f.name: f for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "adam_betas":
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 2:
            raise InputError(f"adam_betas expects two comma-separated values, got {raw!r}")
        return (float(parts[0]), float(parts[1]))
    typ = _FIELDS[key].type
    try:
        if typ == "int":
            return int(raw)
        if typ == "float":
            return float(raw)
    except ValueError:
        raise InputError(f"bad value for {key}: {raw!r}") from None
    raise InputError(f"cannot parse config key {key!r}")


def parse_assignments(pairs: list[str], source: str = "override") -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise InputError(f"{source}: expected key=value, got {pair!r}")
        key, raw = pair.split("=", 1)
        key = key.strip()
        if key not in _FIELDS:
            raise InputError(f"{source}: unknown config key {key!r}")
        out[key] = _parse_value(key, raw)
    return out


def load_run_config(path: str | None = None,
                    overrides: list[str] | None = None) -> RunConfig:
    values = {}
    if path is not None:
        assignments = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InputError(f"{path}:{lineno}: expected key = value")
                assignments.append(line)
        values.update(parse_assignments(assignments, source=path))
    if overrides:
        values.update(parse_assignments(overrides, source="--set"))
    try:
        return RunConfig(**values)
    except (TypeError, ValueError) as exc:
        raise InputError(f"invalid configuration: {exc}") from None
