"""deeppsl: weighted first-order rules grounded into hinge-loss MRFs,
convex MAP inference, and end-to-end training of neural predicates.

The hot inference kernels run under numba by default; set
``DEEPPSL_BACKEND=numpy`` for the pure-numpy fallback.
"""

from .hlmrf import (HlmrfInstance, LinearPotential, MapResult, SolverConfig,
                    brute_force_map, energy, grad_x, grad_y, map_infer,
                    soft_energy)
from .rules import (Domain, RuleProgram, ground, instance_from_grounding,
                    parse_domain, parse_program, to_potential)
from .train import (InferenceTemplate, TrainConfig, TrainHistory,
                    hinge_rank_grad, hinge_rank_loss, predict, predict_batch,
                    surrogate_grad_x, surrogate_loss, train)
from .zsl import (AttributeMatrix, EvalReport, SplitSpec, build_rules,
                  build_template, evaluate, run_zsl, synthesize,
                  two_stage_baseline)

__version__ = "0.1.0"

__all__ = [
    "HlmrfInstance", "LinearPotential", "MapResult", "SolverConfig",
    "brute_force_map", "energy", "grad_x", "grad_y", "map_infer", "soft_energy",
    "Domain", "RuleProgram", "ground", "instance_from_grounding",
    "parse_domain", "parse_program", "to_potential",
    "InferenceTemplate", "TrainConfig", "TrainHistory",
    "hinge_rank_grad", "hinge_rank_loss", "predict", "predict_batch",
    "surrogate_grad_x", "surrogate_loss", "train",
    "AttributeMatrix", "EvalReport", "SplitSpec", "build_rules",
    "build_template", "evaluate", "run_zsl", "synthesize", "two_stage_baseline",
    "__version__",
]
