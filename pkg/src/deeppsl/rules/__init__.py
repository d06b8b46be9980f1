from .ground import (Grounding, ground, instance_from_grounding,
                     potentials_from_grounding, to_potential)
from .model import (FREE, OBSERVED, Constant, Domain, GroundAtom,
                    GroundLiteral, GroundRule, Literal, Predicate, Rule,
                    RuleProgram, Variable)
from .parser import parse_domain, parse_program

__all__ = [
    "Grounding", "ground", "instance_from_grounding",
    "potentials_from_grounding", "to_potential",
    "FREE", "OBSERVED", "Constant", "Domain", "GroundAtom", "GroundLiteral",
    "GroundRule", "Literal", "Predicate", "Rule", "RuleProgram", "Variable",
    "parse_domain", "parse_program",
]
