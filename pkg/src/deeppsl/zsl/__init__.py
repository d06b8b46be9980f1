from .attributes import AttributeMatrix, SplitSpec
from .baseline import (binary_targets, evaluate_model, run_zsl,
                       train_attribute_classifier, two_stage_baseline)
from .evaluate import EvalReport, evaluate
from .rulegen import (attribute_predicate_name, build_rules, build_template,
                      domain_for_classes, domain_to_text, program_to_text)
from .synth import FeatureBundle, ZslDataset, synthesize

__all__ = [
    "AttributeMatrix", "SplitSpec",
    "binary_targets", "evaluate_model", "run_zsl",
    "train_attribute_classifier", "two_stage_baseline",
    "EvalReport", "evaluate",
    "attribute_predicate_name", "build_rules", "build_template",
    "domain_for_classes", "domain_to_text", "program_to_text",
    "FeatureBundle", "ZslDataset", "synthesize",
]
