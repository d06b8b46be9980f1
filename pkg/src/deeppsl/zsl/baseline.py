"""End-to-end pipeline and the two-stage ablation baseline.

The baseline trains the same network against each class's binarized
attribute signature with per-attribute binary cross-entropy, then runs the
identical rule-based inference at test time. The end-to-end path instead
trains through the inference via the surrogate objective.
"""

from __future__ import annotations

import numpy as np

from ..nn.mlp import MlpParams, backward_from_preact, forward, init_mlp
from ..train.loop import TrainConfig, TrainHistory, predict_batch, train
from .attributes import AttributeMatrix
from .evaluate import EvalReport, evaluate
from .rulegen import build_template
from .synth import ZslDataset


def evaluate_model(params: MlpParams, dataset: ZslDataset, config: TrainConfig,
                   weight_mode: str = "continuous", threads: int = 1) -> EvalReport:
    """Score a trained attribute network on the dataset's unseen classes."""
    template = build_template(dataset.matrix, list(dataset.split.test), weight_mode)
    pred_idx, _ = predict_batch(params, template, dataset.test.features,
                                config.solver, threads=threads)
    predictions = [template.class_names[i] for i in pred_idx]
    return evaluate(predictions, dataset.test.label_names(),
                    list(dataset.split.test))


def run_zsl(dataset: ZslDataset, config: TrainConfig, seed: int,
            weight_mode: str = "continuous", metrics_path=None,
            threads: int = 1) -> tuple[MlpParams, TrainHistory, EvalReport]:
    """Train end-to-end on the seen classes, evaluate on the unseen ones."""
    template = build_template(dataset.matrix, list(dataset.split.train), weight_mode)
    params, history = train(dataset.train.features, dataset.train.labels,
                            template, config, seed, metrics_path=metrics_path,
                            threads=threads)
    report = evaluate_model(params, dataset, config, weight_mode, threads=threads)
    return params, history, report


def binary_targets(matrix: AttributeMatrix, class_names: list[str]) -> np.ndarray:
    """Per-class attribute targets, thresholded at the matrix's global mean."""
    threshold = matrix.global_mean()
    return np.stack([(matrix.row(c) > threshold).astype(np.float64)
                     for c in class_names])


def bce_loss(outputs: np.ndarray, targets: np.ndarray) -> float:
    eps = 1e-12
    p = np.clip(outputs, eps, 1.0 - eps)
    return float(-(targets * np.log(p) + (1.0 - targets) * np.log(1.0 - p)).sum())


def train_attribute_classifier(features: np.ndarray, targets: np.ndarray,
                               config: TrainConfig, seed: int) -> MlpParams:
    """Independent attribute training: sigmoid outputs against binary targets.

    The paired BCE/sigmoid gradient (output - target) feeds the reverse pass
    at the last pre-activation, so saturation stays numerically harmless.
    """
    features = np.asarray(features, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    m = features.shape[0]
    state = np.random.SeedSequence(seed).generate_state(2)
    params = init_mlp([features.shape[1], config.hidden_units, targets.shape[1]],
                      seed=int(state[0]))
    rng = np.random.default_rng(int(state[1]))
    adam = config.make_adam()
    for _ in range(config.epochs):
        order = rng.permutation(m)
        for start in range(0, m, config.batch_size):
            idx = order[start:start + config.batch_size]
            outputs, cache = forward(params, features[idx])
            delta = outputs - targets[idx]
            grads = backward_from_preact(params, cache, delta)
            params = adam.step(params, grads)
    return params


def two_stage_baseline(dataset: ZslDataset, config: TrainConfig, seed: int,
                       weight_mode: str = "continuous",
                       threads: int = 1) -> tuple[MlpParams, EvalReport]:
    """Ablation: attributes learned independently, rules applied only at test."""
    per_class = binary_targets(dataset.matrix, dataset.train.class_names)
    targets = per_class[dataset.train.labels]
    params = train_attribute_classifier(dataset.train.features, targets,
                                        config, seed)
    report = evaluate_model(params, dataset, config, weight_mode, threads=threads)
    return params, report
