"""Grounding and evaluation of bridge rules against belief states."""
from __future__ import annotations

import itertools

from .kernel import BridgeLiteral, BridgeRule, Emcs, EmcsError, OpFormula, Var
from .matching import AtomIndex, complete, solve


class UnsafeRuleError(EmcsError):
    pass


def ground(rules, pool) -> set[BridgeRule]:
    """All instances of ``rules`` under substitutions drawn from ``pool``.

    Grounding is unsorted: every variable ranges over the whole pool.
    """
    consts = sorted(pool, key=str)
    out: set[BridgeRule] = set()
    for rule in rules:
        if not rule.is_safe():
            raise UnsafeRuleError(f"unsafe bridge rule: {rule}")
        vs = sorted(rule.variables(), key=lambda v: v.name)
        if not vs:
            out.add(rule)
            continue
        for combo in itertools.product(consts, repeat=len(vs)):
            out.add(rule.substitute(dict(zip(vs, combo))))
    return out


def satisfies(state, lit: BridgeLiteral) -> bool:
    return (lit.atom in state[lit.context - 1]) != lit.negated


def state_index(state) -> tuple:
    return tuple(AtomIndex(comp) for comp in state)


def applicable_heads(rules, positive, negative, pool=frozenset()) -> set[OpFormula]:
    """Heads of rule instances whose positive literals hold in ``positive`` and
    whose negated literals hold in ``negative``.

    ``positive`` is a tuple of :class:`AtomIndex`, ``negative`` a tuple of
    sets.  In an ordinary system both describe the same belief state; in an
    S-reduct ``negative`` is the fixed state S.  Variables not bound by the
    positive body are enumerated over ``pool``.
    """
    heads: set[OpFormula] = set()
    for rule in rules:
        goals = [(lit.atom, positive[lit.context - 1]) for lit in rule.body if not lit.negated]
        negs = [lit for lit in rule.body if lit.negated]
        free = _rule_vars(rule)
        for b in solve(goals, {}):
            for full in complete(b, free, pool):
                if all(lit.atom.substitute(full) not in negative[lit.context - 1] for lit in negs):
                    heads.add(rule.head.substitute(full))
    return heads


def _rule_vars(rule: BridgeRule) -> list:
    seen: dict = {}
    for a in [rule.head.atom] + [b.atom for b in rule.body]:
        for t in a.args:
            if type(t) is Var:
                seen.setdefault(t, None)
    return list(seen)


def app(system: Emcs, i: int, state) -> set[OpFormula]:
    """Heads of the bridge rules of context ``i`` (1-based) applicable in ``state``."""
    rules = system.contexts[i - 1].bridge_rules
    return applicable_heads(rules, state_index(state), state, system.pool)


def split_now_next(heads) -> tuple[set, set]:
    now = {h for h in heads if not h.next}
    nxt = {h.unwrapped() for h in heads if h.next}
    return now, nxt


def app_now(system: Emcs, i: int, state) -> set[OpFormula]:
    return split_now_next(app(system, i, state))[0]


def app_next(system: Emcs, i: int, state) -> set[OpFormula]:
    return split_now_next(app(system, i, state))[1]
