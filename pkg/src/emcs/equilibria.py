"""Static semantics of one system at one time instant.

Covers static equilibria, the grounded equilibrium of definite systems
(monotone kb iteration), the S-reduct, the gamma operator and the
well-founded semantics as the least fixpoint of gamma applied twice.
"""
from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass, field

import networkx as nx

from .bridge import applicable_heads, state_index
from .kernel import (
    BridgeRule,
    Emcs,
    InconsistencyError,
    IntegrityError,
    PreconditionError,
    state_leq,
)
from .matching import AtomIndex

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReductSystem:
    """The S-reduct of a reducible system.

    ``system`` has reduced knowledge bases and ground bridge rules already
    reduced.  Schematic rules with negated literals are kept; their negated
    literals are read against the fixed ``assumption`` rather than the
    state being built, which is the reduct applied instance by instance.
    """

    system: Emcs
    assumption: tuple


@dataclass(frozen=True)
class FixpointStep:
    alpha: int
    kbs: tuple
    state: tuple


@dataclass
class FixpointTrace:
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def to_dict(self, names=None) -> dict:
        def name(i):
            return names[i] if names else str(i + 1)

        return {
            "iterations": len(self.steps),
            "steps": [
                {
                    "alpha": s.alpha,
                    "state": {name(i): sorted(str(a) for a in comp) for i, comp in enumerate(s.state)},
                    "kb_sizes": {name(i): len(getattr(kb, "rules", kb)) for i, kb in enumerate(s.kbs)},
                }
                for s in self.steps
            ],
        }


def iteration_cap(system: Emcs) -> int:
    """Safety bound on monotone iterations over ``system``'s finite lattice."""
    env = os.environ.get("EMCS_ITER_CAP")
    if env:
        return int(env)
    p = max(len(system.pool), 1)
    heads = sum(p ** len(r.head.atom.variables()) for c in system.contexts for r in c.bridge_rules)
    vocab = sum(p ** ar for c in system.contexts for _, ar in c.vocabulary)
    return heads + vocab + 1


def _now_rules(ctx):
    return tuple(r for r in ctx.bridge_rules if not r.head.next)


def is_static_equilibrium(system: Emcs, state) -> bool:
    """Whether every component is accepted given the now-heads it triggers."""
    if len(state) != len(system.contexts):
        return False
    index = state_index(state)
    pool = system.pool
    for i, ctx in enumerate(system.contexts):
        heads = applicable_heads(_now_rules(ctx), index, state, pool)
        try:
            if ctx.logic.acc(ctx.mng(heads), pool) != state[i]:
                return False
        except InconsistencyError:
            return False
    return True


def _check_monotone_ops(system: Emcs):
    for ctx in system.contexts:
        if not ctx.monotone_ops:
            raise PreconditionError(f"context {ctx.name}: management base has non-monotone operations")


def _cached_acc(logic, kb, pool, memo):
    if memo is None:
        return logic.acc(kb, pool)
    key = (logic.kind, kb)
    hit = memo.get(key)
    if hit is None:
        hit = memo[key] = logic.acc(kb, pool)
    return hit


def grounded_equilibrium_definite(system, cap=None, memo=None):
    """Grounded equilibrium of a definite system, with its iteration trace.

    Accepts an :class:`Emcs` without negated bridge literals or a
    :class:`ReductSystem`.  ``memo`` may carry belief sets already computed
    for identical knowledge bases over the same pool.
    """
    if isinstance(system, ReductSystem):
        emcs, negative = system.system, system.assumption
    else:
        emcs, negative = system, None
        for ctx in emcs.contexts:
            if any(r.negative for r in ctx.bridge_rules):
                raise PreconditionError(f"context {ctx.name} has negated bridge literals; system not definite")
    for ctx in emcs.contexts:
        if not ctx.logic.is_reduced(ctx.kb):
            raise PreconditionError(f"context {ctx.name}: knowledge base not in reduced form")
    _check_monotone_ops(emcs)
    cap = iteration_cap(emcs) if cap is None else cap
    pool = emcs.pool
    ctxs = emcs.contexts
    rules = [_now_rules(c) for c in ctxs]
    kbs = list(emcs.kbs)
    state = [_cached_acc(c.logic, kb, pool, memo) for c, kb in zip(ctxs, kbs)]
    index = [AtomIndex(s) for s in state]
    # contexts whose rules read context k; with a fixed assumption negated literals never change
    readers: dict[int, set] = {}
    for i, rs in enumerate(rules):
        for r in rs:
            for lit in r.body:
                if negative is None or not lit.negated:
                    readers.setdefault(lit.context - 1, set()).add(i)
    dirty = set(range(len(ctxs)))
    trace = FixpointTrace()
    alpha = 0
    while True:
        trace.steps.append(FixpointStep(alpha, tuple(kbs), tuple(state)))
        neg_view = negative if negative is not None else state
        changed = []
        for i, ctx in enumerate(ctxs):
            # add is idempotent, so unchanged inputs give back the same kb
            if not rules[i] or i not in dirty:
                continue
            heads = applicable_heads(rules[i], index, neg_view, pool)
            new_kb = ctx.mng(heads, kbs[i])
            if new_kb != kbs[i]:
                if not ctx.logic.kb_leq(kbs[i], new_kb):
                    raise IntegrityError(f"context {ctx.name}: knowledge base shrank at iteration {alpha}")
                changed.append((i, new_kb))
        if not changed:
            return tuple(state), trace
        alpha += 1
        if alpha > cap:
            raise IntegrityError(f"no fixpoint within {cap} iterations")
        dirty = set()
        for i, new_kb in changed:
            kbs[i] = new_kb
            new_state = _cached_acc(ctxs[i].logic, new_kb, pool, memo)
            if new_state != state[i]:
                state[i] = new_state
                index[i] = AtomIndex(new_state)
                dirty |= readers.get(i, set())


def s_reduct(system: Emcs, state) -> ReductSystem:
    """The S-reduct: reduce every kb w.r.t. its component and prune bridge rules."""
    pool = system.pool
    contexts = []
    for i, ctx in enumerate(system.contexts):
        if not ctx.logic.has_reduction:
            raise PreconditionError(f"context {ctx.name}: logic {ctx.logic.kind} has no reduction function")
        kb = ctx.logic.reduce(ctx.kb, state[i], pool)
        rules = []
        for r in ctx.bridge_rules:
            negs = r.negative
            if not negs:
                rules.append(r)
            elif r.is_ground():
                if any(lit.atom in state[lit.context - 1] for lit in negs):
                    continue
                rules.append(BridgeRule(r.head, r.positive))
            else:
                rules.append(r)
        contexts.append(dataclasses.replace(ctx, kb=kb, bridge_rules=tuple(rules)))
    reduced = Emcs(tuple(contexts), system.constants)
    # reduction never introduces constants
    reduced.__dict__["pool"] = pool
    return ReductSystem(reduced, tuple(state))


def gamma(system: Emcs, state, memo=None) -> tuple:
    return grounded_equilibrium_definite(s_reduct(system, state), memo=memo)[0]


def check_wfs_preconditions(system: Emcs):
    """Raise unless the system is normal, reducible and has monotone operations."""
    for ctx in system.contexts:
        logic = ctx.logic
        if logic.least_element is None:
            raise PreconditionError(f"context {ctx.name}: logic {logic.kind} is not normal")
        if not logic.has_reduction or not logic.is_reducible(ctx.kb):
            raise PreconditionError(f"context {ctx.name}: not reducible")
    _check_monotone_ops(system)


def wfs_sequence(system: Emcs, cap=None) -> list:
    """Iterates of gamma squared from the least belief state up to the fixpoint."""
    check_wfs_preconditions(system)
    cap = iteration_cap(system) if cap is None else cap
    current = system.least_state()
    seq = [current]
    memo: dict = {}
    while True:
        half = gamma(system, current, memo)
        if half == current:
            # a fixpoint of gamma is one of gamma squared; reached from below it is the least
            return seq
        nxt = gamma(system, half, memo)
        if nxt == current:
            return seq
        if not state_leq(current, nxt):
            raise IntegrityError("gamma squared is not monotone on this system")
        if len(seq) > cap:
            raise IntegrityError(f"well-founded iteration exceeded {cap} steps")
        seq.append(nxt)
        current = nxt


def wfs(system: Emcs) -> tuple:
    """Well-founded semantics: least fixpoint of gamma squared."""
    return wfs_sequence(system)[-1]


def is_grounded_equilibrium(system: Emcs, state) -> bool:
    state = tuple(frozenset(s) for s in state)
    return gamma(system, state) == state and is_static_equilibrium(system, state)


def dependency_graph(system: Emcs) -> tuple[nx.DiGraph, set]:
    """Predicate-level dependency graph and the set of its bridge edges.

    Nodes are ``(context, (pred, arity))`` with 1-based context numbers.
    ``next`` rules are left out: they never act within an instant.
    """
    g = nx.DiGraph()
    bridge_edges = set()
    for i, ctx in enumerate(system.contexts, start=1):
        for src, dst in ctx.logic.dependencies(ctx.kb):
            g.add_edge((i, src), (i, dst))
        for r in ctx.bridge_rules:
            if r.head.next:
                continue
            h = (i, r.head.atom.signature)
            g.add_node(h)
            for lit in r.body:
                e = ((lit.context, lit.atom.signature), h)
                g.add_edge(*e)
                bridge_edges.add(e)
    return g, bridge_edges


def check_acyclic(system: Emcs) -> bool:
    """True iff no dependency cycle passes through a bridge edge."""
    g, bridge_edges = dependency_graph(system)
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(g)):
        for v in scc:
            comp[v] = k
    return not any(comp[u] == comp[v] for u, v in bridge_edges)
