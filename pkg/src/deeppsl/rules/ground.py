"""Grounding: instantiate rule variables over constant pools and translate
each ground rule into a hinge potential.

The translation uses the clausal Lukasiewicz distance to satisfaction

    l = sum_body t_i - (m - 1) - sum_head t_k,    t = v or 1 - v for negated,

so that max(l, 0) equals max(0, I(body) - I(head)) under the Lukasiewicz
t-norm/t-conorm for all truth assignments.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..errors import GroundingError
from ..hlmrf.instance import HlmrfInstance, LinearPotential
from .model import (OBSERVED, Domain, GroundAtom,
                    GroundLiteral, GroundRule, Literal, Rule, RuleProgram,
                    Variable)


@dataclass
class Grounding:
    ground_rules: list[GroundRule]
    x_index: dict[GroundAtom, int]
    y_index: dict[GroundAtom, int]

    @property
    def n_obs(self) -> int:
        return len(self.x_index)

    @property
    def n_free(self) -> int:
        return len(self.y_index)


def _variable_sorts(rule: Rule, domain: Domain) -> dict[str, str]:
    sorts: dict[str, str] = {}
    for lit in rule.body + rule.head:
        pred = lit.predicate
        sig = domain.signatures.get(pred.name)
        if sig is None:
            raise GroundingError(f"no signature declared for predicate {pred.name!r}")
        if len(sig) != pred.arity:
            raise GroundingError(
                f"signature of {pred.name!r} has {len(sig)} sorts, arity is {pred.arity}")
        for pos, arg in enumerate(lit.args):
            if isinstance(arg, Variable):
                sort = sig[pos]
                prev = sorts.get(arg.name)
                if prev is not None and prev != sort:
                    raise GroundingError(
                        f"variable {arg.name!r} used with conflicting sorts "
                        f"{prev!r} and {sort!r}")
                sorts[arg.name] = sort
            else:
                pool = domain.sorts.get(sig[pos])
                if pool is None:
                    raise GroundingError(f"unknown sort {sig[pos]!r} for {pred.name!r}")
                if arg.value not in pool:
                    raise GroundingError(
                        f"constant {arg.value!r} is not in sort {sig[pos]!r}")
    return sorts


def _ground_literal(lit: Literal, subst: dict[str, str]) -> GroundLiteral:
    args = tuple(subst[a.name] if isinstance(a, Variable) else a.value
                 for a in lit.args)
    return GroundLiteral(atom=GroundAtom(lit.predicate.name, args),
                         negated=lit.negated)


def ground(program: RuleProgram, domain: Domain) -> Grounding:
    """Instantiate every rule over the cross product of its variables' sorts.

    Each distinct ground atom gets exactly one index: into x for observed
    predicates, into y for free ones. Index assignment is lexicographic by
    (predicate name, constant tuple), so it is deterministic.
    """
    ground_rules: list[GroundRule] = []
    for rule in program.rules:
        var_sorts = _variable_sorts(rule, domain)
        names = [v for v in rule.variables()]
        pools = []
        for v in names:
            pool = domain.sorts.get(var_sorts[v])
            if pool is None:
                raise GroundingError(f"unknown sort {var_sorts[v]!r} for variable {v!r}")
            pools.append(pool)
        for combo in itertools.product(*pools):
            subst = dict(zip(names, combo))
            ground_rules.append(GroundRule(
                rule=rule,
                substitution=subst,
                body=tuple(_ground_literal(l, subst) for l in rule.body),
                head=tuple(_ground_literal(l, subst) for l in rule.head)))

    observed, free = set(), set()
    kinds = {p.name: p.kind for p in program.predicates.values()}
    for gr in ground_rules:
        for atom in gr.atoms():
            kind = kinds.get(atom.predicate)
            if kind is None:
                raise GroundingError(f"atom {atom} references undeclared predicate")
            (observed if kind == OBSERVED else free).add(atom)
    overlap = observed & free
    if overlap:
        raise GroundingError(f"atoms assigned to both x and y: {sorted(overlap)[:3]}")
    x_index = {a: i for i, a in enumerate(sorted(observed, key=GroundAtom.sort_key))}
    y_index = {a: i for i, a in enumerate(sorted(free, key=GroundAtom.sort_key))}
    return Grounding(ground_rules=ground_rules, x_index=x_index, y_index=y_index)


def to_potential(ground_rule: GroundRule,
                 x_index: dict[GroundAtom, int],
                 y_index: dict[GroundAtom, int]) -> LinearPotential | None:
    """Clausal linear form of one ground rule as a hinge potential.

    Positive body literals contribute +1 on their variable, negated ones -1
    plus 1 on the offset; head literals contribute the opposite; the offset
    also absorbs -(m-1). Zero-weight rules are dropped (None).
    """
    rule = ground_rule.rule
    if rule.weight == 0.0:
        return None
    offset = -(len(ground_rule.body) - 1)
    y_acc: dict[int, float] = {}
    x_acc: dict[int, float] = {}

    def add(atom: GroundAtom, coef: float):
        if atom in y_index:
            i = y_index[atom]
            y_acc[i] = y_acc.get(i, 0.0) + coef
        elif atom in x_index:
            j = x_index[atom]
            x_acc[j] = x_acc.get(j, 0.0) + coef
        else:
            raise GroundingError(f"atom {atom} missing from both index maps")

    for lit in ground_rule.body:
        if lit.negated:
            offset += 1.0
            add(lit.atom, -1.0)
        else:
            add(lit.atom, +1.0)
    for lit in ground_rule.head:
        if lit.negated:
            offset -= 1.0
            add(lit.atom, +1.0)
        else:
            add(lit.atom, -1.0)

    y_coeffs = [(i, c) for i, c in sorted(y_acc.items()) if c != 0.0]
    x_coeffs = [(j, c) for j, c in sorted(x_acc.items()) if c != 0.0]
    return LinearPotential(y_coeffs=y_coeffs, x_coeffs=x_coeffs,
                           offset=float(offset), weight=rule.weight,
                           exponent=rule.exponent)


def potentials_from_grounding(grounding: Grounding) -> list[LinearPotential]:
    out = []
    for gr in grounding.ground_rules:
        p = to_potential(gr, grounding.x_index, grounding.y_index)
        if p is not None:
            out.append(p)
    return out


def instance_from_grounding(grounding: Grounding) -> HlmrfInstance:
    if grounding.n_free == 0:
        raise GroundingError("grounded program has no free atoms to infer")
    return HlmrfInstance(potentials_from_grounding(grounding),
                         n_free=grounding.n_free, n_obs=grounding.n_obs)
