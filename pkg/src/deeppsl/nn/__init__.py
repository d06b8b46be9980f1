from .adam import Adam
from .checkpoint import load_mlp, save_mlp
from .mlp import (ForwardCache, MlpGrads, MlpParams, backward,
                  backward_from_preact, forward, init_mlp, zeros_like_grads)

__all__ = [
    "Adam", "load_mlp", "save_mlp",
    "ForwardCache", "MlpGrads", "MlpParams", "backward",
    "backward_from_preact", "forward", "init_mlp", "zeros_like_grads",
]
