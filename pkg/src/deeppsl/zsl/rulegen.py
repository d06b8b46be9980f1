"""Rule programs from a class-attribute matrix.

Per (attribute i, class c) the two templates

    w : Ai(Img) -> Label(Img, "c")
    w : !Ai(Img) -> !Label(Img, "c")

with w either the continuous association A[c, i] or its binarization at the
matrix's global mean (binarized zero-weight pairs emit nothing).
"""

from __future__ import annotations

import warnings

import numpy as np

from ..errors import InputError
from ..rules.ground import ground, instance_from_grounding
from ..rules.model import (FREE, OBSERVED, Constant, Domain, GroundAtom,
                           Literal, Predicate, Rule, RuleProgram, Variable)
from ..train.template import InferenceTemplate
from .attributes import AttributeMatrix

LABEL_PREDICATE = "Label"
IMAGE_CONSTANT = "img0"
WEIGHT_MODES = ("continuous", "binarized")


def attribute_predicate_name(index: int, n_attributes: int) -> str:
    width = max(2, len(str(n_attributes - 1)))
    return f"A{index:0{width}d}"


def build_rules(matrix: AttributeMatrix, classes: list[str],
                weight_mode: str = "continuous") -> RuleProgram:
    if weight_mode not in WEIGHT_MODES:
        raise InputError(f"weight_mode must be one of {WEIGHT_MODES}, got {weight_mode!r}")
    unknown = [c for c in classes if c not in matrix.class_names]
    if unknown:
        raise InputError(f"classes not present in the attribute matrix: {unknown}")

    a = matrix.n_attributes
    predicates = {}
    for i in range(a):
        name = attribute_predicate_name(i, a)
        predicates[name] = Predicate(name, 1, OBSERVED)
    predicates[LABEL_PREDICATE] = Predicate(LABEL_PREDICATE, 2, FREE)

    threshold = matrix.global_mean()
    img = Variable("Img")
    rules = []
    for cls in classes:
        row = matrix.row(cls)
        for i in range(a):
            if weight_mode == "continuous":
                weight = float(row[i])
            else:
                weight = 1.0 if row[i] > threshold else 0.0
                if weight == 0.0:
                    continue
            attr = predicates[attribute_predicate_name(i, a)]
            label = Literal(predicates[LABEL_PREDICATE], (img, Constant(cls)))
            pos = Literal(attr, (img,))
            rules.append(Rule(weight=weight, body=(pos,), head=(label,)))
            neg_body = Literal(attr, (img,), negated=True)
            neg_head = Literal(predicates[LABEL_PREDICATE], (img, Constant(cls)),
                               negated=True)
            rules.append(Rule(weight=weight, body=(neg_body,), head=(neg_head,)))
    if not rules:
        warnings.warn("attribute matrix produced an empty rule program "
                      "(no association above the global mean)")
    return RuleProgram(predicates=predicates, rules=rules)


def domain_for_classes(matrix: AttributeMatrix, classes: list[str]) -> Domain:
    sorts = {"img": (IMAGE_CONSTANT,), "cls": tuple(classes)}
    signatures = {LABEL_PREDICATE: ("img", "cls")}
    for i in range(matrix.n_attributes):
        signatures[attribute_predicate_name(i, matrix.n_attributes)] = ("img",)
    return Domain(sorts=sorts, signatures=signatures)


def program_to_text(program: RuleProgram) -> str:
    """Render a program back into the rule file grammar."""
    lines = []
    for p in program.predicates.values():
        lines.append(f"predicate {p.name}/{p.arity} : {p.kind}")
    for r in program.rules:
        body = " & ".join(_literal_text(l) for l in r.body)
        head = " | ".join(_literal_text(l) for l in r.head)
        lines.append(f"{r.weight!r} : {body} -> {head}")
    return "\n".join(lines) + "\n"


def domain_to_text(domain: Domain) -> str:
    lines = []
    for name, constants in domain.sorts.items():
        rendered = ", ".join(_constant_text(c) for c in constants)
        lines.append(f"sort {name} = {{{rendered}}}")
    for pred, arg_sorts in domain.signatures.items():
        lines.append(f"sig {pred} = ({', '.join(arg_sorts)})")
    return "\n".join(lines) + "\n"


def _constant_text(value: str) -> str:
    if value and value[0].islower() and value.isidentifier():
        return value
    return f'"{value}"'


def _literal_text(lit: Literal) -> str:
    args = []
    for arg in lit.args:
        if isinstance(arg, Variable):
            args.append(arg.name)
        else:
            args.append(_constant_text(arg.value))
    bang = "!" if lit.negated else ""
    return f"{bang}{lit.predicate.name}({', '.join(args)})"


def build_template(matrix: AttributeMatrix, classes: list[str],
                   weight_mode: str = "continuous") -> InferenceTemplate:
    """Ground the per-image program once and wire its slots to network
    outputs (attribute columns) and class indices."""
    program = build_rules(matrix, classes, weight_mode)
    domain = domain_for_classes(matrix, classes)
    grounding = ground(program, domain)
    instance = instance_from_grounding(grounding)

    a = matrix.n_attributes
    x_slot = np.full(a, -1, dtype=np.int64)
    for i in range(a):
        atom = GroundAtom(attribute_predicate_name(i, a), (IMAGE_CONSTANT,))
        x_slot[i] = grounding.x_index.get(atom, -1)

    class_of_slot = np.full(instance.n_free, -1, dtype=np.int64)
    for ci, cls in enumerate(classes):
        atom = GroundAtom(LABEL_PREDICATE, (IMAGE_CONSTANT, cls))
        slot = grounding.y_index.get(atom)
        if slot is not None:
            class_of_slot[slot] = ci
    if (class_of_slot < 0).any():
        raise InputError("grounded free atoms do not all correspond to classes")

    return InferenceTemplate(instance=instance, x_slot_of_output=x_slot,
                             class_of_slot=class_of_slot,
                             n_classes=len(classes), class_names=list(classes))
