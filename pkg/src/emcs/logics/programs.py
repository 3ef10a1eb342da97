"""Rule-based context logics: observations, definite datalog and normal programs.

Rules may be schematic.  Variables bound by the positive body are found by
joining against the model under construction; any other variable (for
example ``x`` in ``FullInspection(x) :- not CompliantShpmt(x)``) ranges over
the constant pool of the enclosing system.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx

from ..kernel import Atom, ContextLogic, PreconditionError, Var
from ..matching import AtomIndex, complete, solve, variables_of


class Rule(NamedTuple):
    head: Atom
    pos: tuple = ()
    neg: tuple = ()

    def __str__(self):
        body = [str(a) for a in self.pos] + [f"not {a}" for a in self.neg]
        if not body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(body)}."

    @property
    def is_fact(self) -> bool:
        return not self.pos and not self.neg and self.head.is_ground()

    @property
    def definite(self) -> bool:
        return not self.neg

    def atoms(self):
        return (self.head,) + self.pos + self.neg

    def is_ground(self) -> bool:
        return all(a.is_ground() for a in self.atoms())


def fact(a: Atom) -> Rule:
    return Rule(a)


def program(*items) -> frozenset:
    """Build a kb from rules and atoms (atoms become facts)."""
    return frozenset(i if isinstance(i, Rule) else Rule(i) for i in items)


class _Compiled:
    __slots__ = ("rule", "free")

    def __init__(self, rule: Rule):
        self.rule = rule
        bound = set(variables_of(rule.pos))
        self.free = [v for v in variables_of(rule.atoms()) if v not in bound]


def least_model(rules, pool=frozenset(), blocked=None) -> frozenset:
    """Least model of a definite program, by semi-naive bottom-up evaluation.

    With ``blocked`` given, negated body atoms are allowed: a ground
    instance is dropped when one of its negated atoms is in ``blocked``.
    This is the least model of the Gelfond-Lifschitz reduct w.r.t. ``blocked``.
    """
    model = AtomIndex()
    compiled = []
    delta: set = set()
    for r in rules:
        if not r.pos and not r.neg and r.head.is_ground():
            delta.add(r.head)
            continue
        if r.neg and blocked is None:
            raise PreconditionError(f"rule with negation in a definite program: {r}")
        compiled.append(_Compiled(r))
    blocked = blocked or frozenset()

    def fire(c: _Compiled, binding, out):
        r = c.rule
        for full in complete(binding, c.free, pool):
            if r.neg and any(n.substitute(full) in blocked for n in r.neg):
                continue
            h = r.head.substitute(full) if full else r.head
            if h not in model:
                out.add(h)

    recursive = []
    for c in compiled:
        if c.rule.pos:
            recursive.append(c)
        else:
            fire(c, {}, delta)
    for a in delta:
        model.add(a)

    while delta:
        dindex = AtomIndex(delta)
        new: set = set()
        for c in recursive:
            pos = c.rule.pos
            for k, lit in enumerate(pos):
                if not dindex.has_sig((lit.pred, len(lit.args))):
                    continue
                goals = [(p, model) for j, p in enumerate(pos) if j != k]
                for args in dindex.candidates(lit, {}):
                    b = _bind(lit, args)
                    if b is None:
                        continue
                    for full in solve(goals, b):
                        fire(c, full, new)
        for a in new:
            model.add(a)
        delta = new
    return model.atoms()


def _bind(pattern: Atom, args: tuple):
    b: dict = {}
    for p, a in zip(pattern.args, args):
        if type(p) is Var:
            if b.setdefault(p, a) != a:
                return None
        elif p != a:
            return None
    return b


def well_founded(rules, pool=frozenset()) -> frozenset:
    """True atoms of the well-founded model, via the alternating fixpoint."""
    true: frozenset = frozenset()
    while True:
        upper = least_model(rules, pool, blocked=true)
        nxt = least_model(rules, pool, blocked=upper)
        if nxt == true:
            return true
        true = nxt


def well_founded_model(rules, pool=frozenset()) -> tuple[frozenset, frozenset]:
    """(true, possibly-true) atoms of the well-founded model."""
    true: frozenset = frozenset()
    while True:
        upper = least_model(rules, pool, blocked=true)
        nxt = least_model(rules, pool, blocked=upper)
        if nxt == true:
            return true, upper
        true = nxt


def ground_rules(rules, pool) -> frozenset:
    """Full instantiation of rules over ``pool`` (desk-scale inputs only)."""
    out = set()
    for r in rules:
        vs = variables_of(r.atoms())
        for b in complete({}, vs, pool):
            out.add(Rule(r.head.substitute(b), tuple(a.substitute(b) for a in r.pos),
                         tuple(a.substitute(b) for a in r.neg)))
    return frozenset(out)


def gl_reduct(kb, belief_set, pool=frozenset()) -> frozenset:
    """Gelfond-Lifschitz reduct of a normal program w.r.t. ``belief_set``.

    Rules without negation are kept verbatim; rules with negation are
    instantiated over ``pool`` when schematic, then dropped if a negated atom
    is believed, otherwise stripped of their negative body.
    """
    if isinstance(kb, Reduct):
        return kb.materialize(pool)
    out = set()
    for r in kb:
        if not r.neg:
            out.add(r)
            continue
        for g in (ground_rules([r], pool) if not r.is_ground() else (r,)):
            if not any(n in belief_set for n in g.neg):
                out.add(Rule(g.head, g.pos))
    return frozenset(out)


@dataclass(frozen=True)
class Reduct:
    """A normal program read under a fixed reduct assumption.

    Semantically the definite program ``gl_reduct(rules, assumed)``; kept
    lazy so schematic rules need not be instantiated over the pool.
    """

    rules: frozenset
    assumed: frozenset

    def __le__(self, other):
        if isinstance(other, Reduct):
            return self.assumed == other.assumed and self.rules <= other.rules
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, Reduct):
            return other <= self
        return NotImplemented

    def materialize(self, pool=frozenset()) -> frozenset:
        return gl_reduct(self.rules, self.assumed, pool)


def rule_signatures(rules) -> set:
    out = set()
    for r in rules:
        out.update(a.signature for a in r.atoms())
    return out


def rule_constants(rules) -> set:
    out = set()
    for r in rules:
        for a in r.atoms():
            out.update(t for t in a.args if type(t) is not Var)
    return out


def negation_cycle(rules) -> bool:
    """Whether the predicate dependency graph has a cycle through negation."""
    g = nx.DiGraph()
    neg_edges = set()
    for r in rules:
        h = r.head.signature
        g.add_node(h)
        for a in r.pos:
            g.add_edge(a.signature, h)
        for a in r.neg:
            g.add_edge(a.signature, h)
            neg_edges.add((a.signature, h))
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(g)):
        for v in scc:
            comp[v] = k
    return any(comp[u] == comp[v] for u, v in neg_edges)


class _RuleLogic(ContextLogic):
    def signatures(self, kb):
        rules = kb.rules if isinstance(kb, Reduct) else kb
        return rule_signatures(rules)

    def constants(self, kb):
        rules = kb.rules if isinstance(kb, Reduct) else kb
        return rule_constants(rules)

    def dependencies(self, kb):
        rules = kb.rules if isinstance(kb, Reduct) else kb
        for r in rules:
            for a in r.pos + r.neg:
                yield (a.signature, r.head.signature)

    def add_facts(self, kb, atoms):
        facts = frozenset(Rule(a) for a in atoms)
        if isinstance(kb, Reduct):
            return Reduct(kb.rules | facts, kb.assumed)
        return kb | facts


class ObservationLogic(ContextLogic):
    """Identity logic: the knowledge base is its own unique belief set."""

    kind = "observation"
    monotone = True

    def acc(self, kb, pool=frozenset()):
        return frozenset(kb)

    def signatures(self, kb):
        return {a.signature for a in kb}

    def constants(self, kb):
        return {t for a in kb for t in a.args}


class DatalogLogic(_RuleLogic):
    """Definite programs under least-model semantics."""

    kind = "datalog"
    monotone = True

    def acc(self, kb, pool=frozenset()):
        return least_model(kb, pool)


class NormalLogic(_RuleLogic):
    """Normal programs; ACC returns the true atoms of the well-founded model.

    The reduction is the Gelfond-Lifschitz reduct.  Its reducibility laws
    (in particular ``S in ACC(kb)`` iff ``ACC(red(kb, S)) = {S}``) hold when
    the program has no loop through negation, which is what
    :meth:`is_reducible` checks.
    """

    kind = "normal-lp"
    monotone = False

    @property
    def has_reduction(self):
        return True

    def acc(self, kb, pool=frozenset()):
        if isinstance(kb, Reduct):
            return least_model(kb.rules, pool, blocked=kb.assumed)
        if all(r.definite for r in kb):
            return least_model(kb, pool)
        return well_founded(kb, pool)

    def reduce(self, kb, belief_set, pool=frozenset()):
        if isinstance(kb, Reduct) or all(r.definite for r in kb):
            return kb
        return Reduct(frozenset(kb), frozenset(belief_set))

    def is_reduced(self, kb):
        return isinstance(kb, Reduct) or all(r.definite for r in kb)

    def is_reducible(self, kb):
        rules = kb.rules if isinstance(kb, Reduct) else kb
        return not negation_cycle(rules)

    def kb_leq(self, a, b):
        if isinstance(a, Reduct) or isinstance(b, Reduct):
            return isinstance(a, Reduct) and isinstance(b, Reduct) and a <= b
        return a <= b


def acc_datalog(kb, pool=frozenset()) -> frozenset:
    return DatalogLogic().acc(kb, pool)


def acc_normal_lp(kb, pool=frozenset()) -> frozenset:
    return NormalLogic().acc(kb, pool)


def acc_observation(kb) -> frozenset:
    return frozenset(kb)
