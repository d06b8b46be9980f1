"""AST for weighted first-order rule programs."""

from __future__ import annotations

import math
from dataclasses import dataclass

OBSERVED = "observed"
FREE = "free"
KINDS = (OBSERVED, FREE)


@dataclass(frozen=True)
class Predicate:
    name: str
    arity: int
    kind: str

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError(f"predicate {self.name}: arity must be >= 0")
        if self.kind not in KINDS:
            raise ValueError(f"predicate {self.name}: kind must be one of {KINDS}")


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Constant:
    value: str


Arg = Variable | Constant


@dataclass(frozen=True)
class Literal:
    predicate: Predicate
    args: tuple[Arg, ...]
    negated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != self.predicate.arity:
            raise ValueError(
                f"{self.predicate.name} expects {self.predicate.arity} argument(s), "
                f"got {len(self.args)}")

    def variables(self):
        return [a.name for a in self.args if isinstance(a, Variable)]


@dataclass(frozen=True)
class Rule:
    """weight : body_1 & ... & body_m -> head_1 | ... | head_n"""

    weight: float
    body: tuple[Literal, ...]
    head: tuple[Literal, ...]
    exponent: int = 2

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        object.__setattr__(self, "head", tuple(self.head))
        if not math.isfinite(self.weight) or self.weight < 0.0:
            raise ValueError(f"rule weight must be a finite non-negative real, got {self.weight}")
        if len(self.body) < 1 or len(self.head) < 1:
            raise ValueError("rules need at least one body and one head literal")
        if self.exponent not in (1, 2):
            raise ValueError(f"rule exponent must be 1 or 2, got {self.exponent}")

    def variables(self):
        seen = []
        for lit in self.body + self.head:
            for v in lit.variables():
                if v not in seen:
                    seen.append(v)
        return seen


@dataclass(frozen=True)
class GroundAtom:
    """A predicate applied to constants; carries a soft truth value in [0,1]."""

    predicate: str
    args: tuple[str, ...]

    def sort_key(self):
        return (self.predicate, self.args)

    def __str__(self):
        return f"{self.predicate}({', '.join(self.args)})"


@dataclass(frozen=True)
class GroundLiteral:
    atom: GroundAtom
    negated: bool = False


@dataclass
class GroundRule:
    rule: Rule
    substitution: dict[str, str]
    body: tuple[GroundLiteral, ...]
    head: tuple[GroundLiteral, ...]

    def __post_init__(self):
        missing = [v for v in self.rule.variables() if v not in self.substitution]
        if missing:
            raise ValueError(f"substitution misses variables {missing}")

    def atoms(self):
        for lit in self.body + self.head:
            yield lit.atom


@dataclass
class Domain:
    """Constant universe: sorted constant pools plus per-predicate argument sorts."""

    sorts: dict[str, tuple[str, ...]]
    signatures: dict[str, tuple[str, ...]]

    def __post_init__(self):
        for name, constants in self.sorts.items():
            if len(constants) == 0:
                raise ValueError(f"sort {name} is empty")
            if len(set(constants)) != len(constants):
                raise ValueError(f"sort {name} has duplicate constants")
        for pred, arg_sorts in self.signatures.items():
            for s in arg_sorts:
                if s not in self.sorts:
                    raise ValueError(f"signature of {pred} references unknown sort {s}")


@dataclass
class RuleProgram:
    predicates: dict[str, Predicate]
    rules: list[Rule]

    def observed_predicates(self):
        return [p for p in self.predicates.values() if p.kind == OBSERVED]

    def free_predicates(self):
        return [p for p in self.predicates.values() if p.kind == FREE]
