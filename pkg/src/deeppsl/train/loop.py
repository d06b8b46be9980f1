"""Alternating surrogate-descent training of the attribute network.

Outer iteration (per batch): MAP-infer y_t for every sample at the current
weights, take the hinge rank loss gradient at y_t, then for each of the
inner steps evaluate the batch-summed surrogate objective and apply one
Adam update through network outputs -> observed variables. Convergence is
tracked per epoch as delta = ||w_t - w_{t-1}||_2 over all flattened
parameters.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..hlmrf.instance import SolverConfig
from ..hlmrf.solve import MapResult, map_infer
from ..nn.adam import Adam
from ..nn.mlp import MlpParams, backward, forward, init_mlp
from .losses import hinge_rank_grad, hinge_rank_loss
from .surrogate import surrogate_grad_x, surrogate_loss
from .template import InferenceTemplate


@dataclass(eq=False)
class LabeledSample:
    features: np.ndarray
    class_index: int
    one_hot: np.ndarray

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.one_hot = np.asarray(self.one_hot, dtype=np.float64)
        if self.one_hot.ndim != 1:
            raise ValueError("one_hot must be a vector")
        ones = np.nonzero(self.one_hot == 1.0)[0]
        if len(ones) != 1 or not np.all((self.one_hot == 0.0) | (self.one_hot == 1.0)):
            raise ValueError("one_hot must contain exactly one 1")
        if int(ones[0]) != self.class_index:
            raise ValueError("one_hot position disagrees with class_index")


def _unpack_samples(samples):
    features = np.stack([s.features for s in samples])
    labels = np.array([s.class_index for s in samples], dtype=np.int64)
    return features, labels


@dataclass(eq=False)
class TrainConfig:
    alpha: float = 1e-4
    inner_steps: int = 1
    margin: float = 0.3
    batch_size: int = 32
    epochs: int = 10
    delta_epsilon: float = 1e-12
    adam_lr: float = 1e-3
    adam_betas: tuple[float, float] = (0.9, 0.999)
    adam_eps: float = 1e-8
    weight_decay: float = 0.0
    hidden_units: int = 512
    train_nu: float = 1e-3
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ValueError("alpha must be > 0")
        if self.inner_steps < 1:
            raise ValueError("inner_steps must be >= 1")
        if self.margin <= 0.0:
            raise ValueError("margin must be > 0")
        if self.batch_size < 1 or self.epochs < 0:
            raise ValueError("batch_size >= 1 and epochs >= 0 required")
        if self.delta_epsilon <= 0.0:
            raise ValueError("delta_epsilon must be > 0")
        if self.train_nu < 0.0:
            raise ValueError("train_nu must be >= 0")

    def make_adam(self) -> Adam:
        return Adam(learning_rate=self.adam_lr, beta1=self.adam_betas[0],
                    beta2=self.adam_betas[1], eps=self.adam_eps,
                    weight_decay=self.weight_decay)


@dataclass
class TrainHistory:
    epoch: list[int] = field(default_factory=list)
    batch: list[int] = field(default_factory=list)
    mean_loss: list[float] = field(default_factory=list)
    mean_iterations: list[float] = field(default_factory=list)
    epoch_delta: list[float] = field(default_factory=list)

    def record_batch(self, epoch, batch, mean_loss, mean_iterations):
        self.epoch.append(epoch)
        self.batch.append(batch)
        self.mean_loss.append(mean_loss)
        self.mean_iterations.append(mean_iterations)

    def epoch_mean_loss(self, epoch: int) -> float:
        vals = [l for e, l in zip(self.epoch, self.mean_loss) if e == epoch]
        if not vals:
            raise ValueError(f"no batches recorded for epoch {epoch}")
        return float(np.mean(vals))

    @property
    def n_epochs(self) -> int:
        return len(self.epoch_delta)


def infer_batch(instance, xs, configs, threads: int = 1) -> list[MapResult]:
    """MAP inference for a batch of observed vectors; order-stable."""
    if threads <= 1 or len(xs) <= 1:
        return [map_infer(instance, x, c) for x, c in zip(xs, configs)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(map_infer, instance, x, c)
                   for x, c in zip(xs, configs)]
        return [f.result() for f in futures]


def surrogate_batch(template: InferenceTemplate, outputs: np.ndarray,
                    y_ts: list[np.ndarray], slot_grads: list[np.ndarray],
                    configs: list[SolverConfig], alpha: float):
    """Batch-summed surrogate value and its gradient wrt the network outputs.

    Returns (total, grad matrix shaped like outputs). Summation over the
    batch keeps training on one batch identical to accumulating its
    sub-batches before a deferred update.
    """
    inst = template.instance
    total = 0.0
    gout = np.zeros_like(outputs)
    mask = template.x_slot_of_output >= 0
    slots = template.x_slot_of_output[mask]
    for s in range(outputs.shape[0]):
        x = template.x_from_outputs(outputs[s])
        total += surrogate_loss(inst, x, y_ts[s], slot_grads[s], alpha, configs[s])
        gx = surrogate_grad_x(inst, x, y_ts[s], slot_grads[s], alpha, configs[s])
        gout[s, mask] = gx[slots]
    return total, gout


def train(features, labels, template: InferenceTemplate,
          config: TrainConfig, seed: int, metrics_path=None,
          init_params: MlpParams | None = None,
          threads: int = 1) -> tuple[MlpParams, TrainHistory]:
    """Run the alternating optimization; returns trained params and history.

    labels are class indices into the template's class order (alternatively,
    pass a list of LabeledSample as `features` and None labels). All samples
    share the template's potential structure; per-sample state is the
    observed vector and the proximal anchor (previous MAP solution).
    """
    if labels is None and isinstance(features, (list, tuple)):
        features, labels = _unpack_samples(features)
    features = np.asarray(features, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    m = features.shape[0]
    if labels.shape != (m,):
        raise ValueError(f"labels shape {labels.shape} does not match {m} samples")
    if m and (labels.min() < 0 or labels.max() >= template.n_classes):
        raise ValueError("label index out of range for the template's classes")

    state = np.random.SeedSequence(seed).generate_state(2)
    if init_params is None:
        dims = [features.shape[1], config.hidden_units, template.n_outputs]
        params = init_mlp(dims, seed=int(state[0]))
    else:
        params = init_params.copy()
    rng = np.random.default_rng(int(state[1]))
    adam = config.make_adam()
    history = TrainHistory()

    inst = template.instance
    anchors = np.full((m, inst.n_free), config.solver.init_value, dtype=np.float64)

    writer = None
    fh = None
    if metrics_path is not None:
        fh = open(metrics_path, "w", newline="")
        writer = csv.writer(fh)
        writer.writerow(["epoch", "batch", "mean_l1", "mean_iterations", "delta"])

    try:
        for epoch in range(config.epochs):
            w_before = params.flatten()
            order = rng.permutation(m)
            epoch_rows = []
            for batch_no, start in enumerate(range(0, m, config.batch_size)):
                idx = order[start:start + config.batch_size]
                batch_u = features[idx]
                labs = labels[idx]

                outputs, cache = forward(params, batch_u)
                xs, cfgs = [], []
                for s, i in enumerate(idx):
                    xs.append(template.x_from_outputs(outputs[s]))
                    cfgs.append(replace(config.solver,
                                        proximal_nu=config.train_nu,
                                        anchor=anchors[i].copy()))
                results = infer_batch(inst, xs, cfgs, threads=threads)

                y_ts, slot_grads, losses, iters = [], [], [], []
                for s, (i, res) in enumerate(zip(idx, results)):
                    anchors[i] = res.y_raw
                    y_ts.append(res.y_raw)
                    scores = template.scores_from_y(res.y_raw,
                                                    fill=config.solver.init_value)
                    losses.append(hinge_rank_loss(scores, int(labs[s]), config.margin))
                    grad_c = hinge_rank_grad(scores, int(labs[s]), config.margin)
                    slot_grads.append(template.loss_grad_to_slots(grad_c))
                    iters.append(res.iterations)

                for inner in range(config.inner_steps):
                    if inner > 0:
                        outputs, cache = forward(params, batch_u)
                    _, gout = surrogate_batch(template, outputs, y_ts,
                                              slot_grads, cfgs, config.alpha)
                    grads = backward(params, cache, gout)
                    params = adam.step(params, grads)

                mean_l1 = float(np.mean(losses))
                mean_it = float(np.mean(iters))
                history.record_batch(epoch, batch_no, mean_l1, mean_it)
                epoch_rows.append([epoch, batch_no, f"{mean_l1:.6f}", f"{mean_it:.1f}", ""])

            delta = float(np.linalg.norm(params.flatten() - w_before))
            history.epoch_delta.append(delta)
            if epoch_rows:
                epoch_rows[-1][-1] = f"{delta:.6e}"
            if writer is not None:
                writer.writerows(epoch_rows)
                fh.flush()
            if delta <= config.delta_epsilon:
                break
    finally:
        if fh is not None:
            fh.close()
    return params, history


def predict(params: MlpParams, template: InferenceTemplate, u: np.ndarray,
            config: SolverConfig) -> tuple[int, np.ndarray]:
    """forward -> MAP inference -> argmax; ties go to the lowest class index."""
    out, _ = forward(params, np.asarray(u, dtype=np.float64))
    x = template.x_from_outputs(out)
    res = map_infer(template.instance, x, config)
    scores = template.scores_from_y(res.y, fill=config.init_value)
    return int(np.argmax(scores)), scores


def predict_batch(params: MlpParams, template: InferenceTemplate,
                  features: np.ndarray, config: SolverConfig,
                  threads: int = 1) -> tuple[np.ndarray, np.ndarray]:
    features = np.asarray(features, dtype=np.float64)
    outputs, _ = forward(params, features)
    xs = [template.x_from_outputs(outputs[s]) for s in range(features.shape[0])]
    results = infer_batch(template.instance, xs,
                          [config] * len(xs), threads=threads)
    scores = np.stack([template.scores_from_y(r.y, fill=config.init_value)
                       for r in results])
    return np.argmax(scores, axis=1), scores
