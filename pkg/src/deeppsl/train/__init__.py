from .loop import (LabeledSample, TrainConfig, TrainHistory, infer_batch,
                   predict, predict_batch, surrogate_batch, train)
from .losses import hinge_rank_grad, hinge_rank_loss
from .surrogate import shifted_point, surrogate_grad_x, surrogate_loss
from .template import InferenceTemplate

__all__ = [
    "LabeledSample", "TrainConfig", "TrainHistory", "infer_batch",
    "predict", "predict_batch", "surrogate_batch", "train",
    "hinge_rank_grad", "hinge_rank_loss",
    "shifted_point", "surrogate_grad_x", "surrogate_loss",
    "InferenceTemplate",
]
