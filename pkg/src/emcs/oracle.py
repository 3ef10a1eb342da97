"""Brute-force reference semantics for small systems.

Everything here enumerates candidate belief states outright and checks them
one by one against the engine's equilibrium test, so it shares no fixpoint
machinery with :mod:`emcs.equilibria`.  Use it on desk-scale inputs only.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .equilibria import (
    check_acyclic,
    check_wfs_preconditions,
    gamma,
    is_grounded_equilibrium,
    is_static_equilibrium,
    wfs_sequence,
)
from .evolution import instantiate, step_kbs, _prepare
from .kernel import (
    Atom,
    BridgeRule,
    Emcs,
    EmcsError,
    EvolvingContext,
    InconsistencyError,
    add,
    neg,
    next_add,
    pos,
    state_leq,
)
from .logics import DatalogLogic, NormalLogic, ObservationLogic, Rule
from .logics.programs import negation_cycle
from .matching import complete

DEFAULT_BOUND = 1 << 20


class OracleBoundError(EmcsError):
    """The candidate universe is too large to enumerate."""

    def __init__(self, sizes, bound):
        self.sizes, self.bound = sizes, bound
        total = 1
        for s in sizes:
            total *= 1 << s
        self.total = total
        super().__init__(f"candidate universe has {total} belief states "
                         f"(atoms per context {list(sizes)}), bound is {bound}")


def _all_heads(ctx: EvolvingContext, pool) -> set:
    heads = set()
    for r in ctx.bridge_rules:
        if r.head.next:
            continue
        vs = sorted(r.variables(), key=lambda v: v.name)
        for b in complete({}, vs, pool):
            heads.add(r.head.substitute(b))
    return heads


def belief_universe(system: Emcs) -> list[list[Atom]]:
    """Per context, the atoms any accepted belief set could contain.

    Every bridge head is assumed to fire and every negated premise to hold,
    so the result over-approximates reachable beliefs.  Atoms mentioned by
    bridge bodies are added so that queried beliefs are also enumerated.
    """
    pool = system.pool
    out = []
    for ctx in system.contexts:
        kb = ctx.mng(_all_heads(ctx, pool))
        logic = ctx.logic
        try:
            if logic.has_reduction:
                kb = logic.reduce(kb, frozenset(), pool)
            atoms = set(logic.acc(kb, pool))
        except InconsistencyError:
            atoms = set()
        out.append(atoms)
    for ctx in system.contexts:
        for r in ctx.bridge_rules:
            for lit in r.body:
                vs = sorted(lit.atom.variables(), key=lambda v: v.name)
                for b in complete({}, vs, pool):
                    out[lit.context - 1].add(lit.atom.substitute(b))
    return [sorted(u, key=str) for u in out]


def _subsets(atoms):
    for k in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, k):
            yield frozenset(combo)


def candidates(system: Emcs, bound: int = DEFAULT_BOUND):
    universe = belief_universe(system)
    sizes = [len(u) for u in universe]
    if sum(sizes) > 62 or 1 << sum(sizes) > bound:
        raise OracleBoundError(sizes, bound)
    return itertools.product(*[list(_subsets(u)) for u in universe])


def enumerate_equilibria(system: Emcs, bound: int = DEFAULT_BOUND) -> set:
    """Every static equilibrium inside the candidate universe."""
    return {s for s in candidates(system, bound) if is_static_equilibrium(system, s)}


def minimal_elements(states) -> set:
    states = set(states)
    return {s for s in states if not any(t != s and state_leq(t, s) for t in states)}


def minimal_equilibria(system: Emcs, bound: int = DEFAULT_BOUND) -> set:
    return minimal_elements(enumerate_equilibria(system, bound))


def grounded_equilibria(system: Emcs, bound: int = DEFAULT_BOUND) -> set:
    return {s for s in enumerate_equilibria(system, bound) if is_grounded_equilibrium(system, s)}


@dataclass
class PropCheck:
    name: str
    passed: bool = True
    checked: int = 0
    witnesses: list = field(default_factory=list)

    def fail(self, witness):
        self.passed = False
        if len(self.witnesses) < 5:
            self.witnesses.append(witness)


def _fmt(state):
    return [sorted(str(a) for a in c) for c in state]


@dataclass
class PropReport:
    checks: dict
    equilibria: int
    grounded: int
    wfs: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "equilibria": self.equilibria,
            "grounded_equilibria": self.grounded,
            "wfs": _fmt(self.wfs),
            "checks": {
                k: {"passed": c.passed, "checked": c.checked,
                    "witnesses": [[_fmt(s) for s in w] for w in c.witnesses]}
                for k, c in self.checks.items()
            },
        }


def verify_props(system: Emcs, bound: int = DEFAULT_BOUND, pairs: int = 64,
                 seed: int = 0) -> PropReport:
    """Check the three structural properties of grounded and well-founded
    semantics against exhaustive enumeration.

    ``minimality``: each grounded equilibrium is a minimal equilibrium.
    ``antimonotone``: S <= S' implies gamma(S') <= gamma(S), on sampled pairs.
    ``wfs_below``: the well-founded state is below every grounded equilibrium.
    Also reported: monotonicity of gamma squared on the same pairs, growth
    of the well-founded iteration, and the uniqueness corollary on acyclic
    systems.
    """
    check_wfs_preconditions(system)
    rng = random.Random(seed)
    cands = list(candidates(system, bound))
    eqs = {s for s in cands if is_static_equilibrium(system, s)}
    mins = minimal_elements(eqs)
    grounded = {s for s in eqs if is_grounded_equilibrium(system, s)}
    seq = wfs_sequence(system)
    w = seq[-1]

    checks = {k: PropCheck(k) for k in
              ("minimality", "antimonotone", "gamma2_monotone", "wfs_below", "wfs_chain", "acyclic_unique")}

    for g in sorted(grounded, key=_fmt):
        checks["minimality"].checked += 1
        if g not in mins:
            checks["minimality"].fail([g])

    sample = [tuple(c) for c in (rng.choice(cands) for _ in range(pairs))] if cands else []
    for big in sample:
        small = tuple(frozenset(a for a in comp if rng.random() < 0.5) for comp in big)
        ga, gb = gamma(system, small), gamma(system, big)
        checks["antimonotone"].checked += 1
        if not state_leq(gb, ga):
            checks["antimonotone"].fail([small, big])
        checks["gamma2_monotone"].checked += 1
        if not state_leq(gamma(system, ga), gamma(system, gb)):
            checks["gamma2_monotone"].fail([small, big])

    for g in grounded:
        checks["wfs_below"].checked += 1
        if not state_leq(w, g):
            checks["wfs_below"].fail([w, g])

    for a, b in zip(seq, seq[1:]):
        checks["wfs_chain"].checked += 1
        if not (state_leq(a, b) and a != b):
            checks["wfs_chain"].fail([a, b])

    if check_acyclic(system):
        checks["acyclic_unique"].checked += 1
        if grounded != {w}:
            checks["acyclic_unique"].fail([w, *grounded])

    return PropReport(checks, len(eqs), len(grounded), w)


# random instances

ATOMS = ("p", "q", "r", "s")


def _prop(name):
    return Atom(name)


def _random_program(rng: random.Random, atoms, negation: bool):
    while True:
        rules = set()
        for a in atoms:
            if rng.random() < 0.3:
                rules.add(Rule(_prop(a)))
        for _ in range(rng.randint(0, 4)):
            head = _prop(rng.choice(atoms))
            body = rng.sample(atoms, rng.randint(1, min(2, len(atoms))))
            pos_b, neg_b = [], []
            for b in body:
                (neg_b if negation and rng.random() < 0.4 else pos_b).append(_prop(b))
            rules.add(Rule(head, tuple(pos_b), tuple(neg_b)))
        if not negation_cycle(rules):
            return frozenset(rules)


def random_system(rng: random.Random, max_contexts: int = 3, max_atoms: int = 4,
                  neg_prob: float = 0.35, observations: int = 0, next_prob: float = 0.0) -> Emcs:
    """A seeded random propositional system.

    Reasoning contexts use the identity, datalog or (stratified) normal
    program logic.  With ``observations`` > 0, that many observation contexts
    come first, and bridge heads are ``next``-wrapped with ``next_prob``.
    """
    n_reason = rng.randint(1, max_contexts)
    specs = []
    for k in range(observations):
        atoms = ATOMS[: rng.randint(1, max_atoms)]
        specs.append(("obs", [f"o{a}" for a in atoms]))
    for k in range(n_reason):
        specs.append((rng.choice(("identity", "datalog", "normal-lp")), list(ATOMS[: rng.randint(1, max_atoms)])))
    n = len(specs)
    contexts = []
    for i, (kind, atoms) in enumerate(specs, start=1):
        vocab = {(a, 0) for a in atoms}
        if kind == "obs":
            contexts.append(EvolvingContext(f"C{i}", ObservationLogic(), frozenset(),
                                            observation=True, vocabulary=vocab))
            continue
        if kind == "identity":
            logic, kb = ObservationLogic(), frozenset(_prop(a) for a in atoms if rng.random() < 0.2)
        elif kind == "datalog":
            logic, kb = DatalogLogic(), _random_program(rng, atoms, False)
        else:
            logic, kb = NormalLogic(), _random_program(rng, atoms, True)
        rules = []
        for _ in range(rng.randint(0, 3)):
            head_atom = _prop(rng.choice(atoms))
            head = next_add(head_atom) if rng.random() < next_prob else add(head_atom)
            body = []
            for _ in range(rng.randint(1, 2)):
                r = rng.randint(1, n)
                b = _prop(rng.choice(specs[r - 1][1]))
                body.append(neg(r, b) if rng.random() < neg_prob else pos(r, b))
            rules.append(BridgeRule(head, tuple(body)))
        contexts.append(EvolvingContext(f"C{i}", logic, kb, tuple(rules), vocabulary=vocab))
    return Emcs(tuple(contexts))


def random_stream(rng: random.Random, system: Emcs, length: int) -> list[tuple]:
    out = []
    for _ in range(length):
        instant = []
        for ctx in system.contexts[: system.obs_count]:
            atoms = sorted(Atom(p) for p, _ in ctx.vocabulary)
            instant.append(frozenset(a for a in atoms if rng.random() < 0.5))
        out.append(tuple(instant))
    return out


def evolving_equilibria(system: Emcs, obs, s: Optional[int] = None, limit: int = 64,
                        bound: int = DEFAULT_BOUND) -> list[list]:
    """Evolving equilibria of size ``s`` found by depth-first enumeration.

    At each instant every oracle equilibrium of the instantiated system is
    tried in turn; at most ``limit`` complete sequences are returned.
    """
    s = len(obs) if s is None else s
    system = _prepare(system, obs)
    found: list[list] = []

    def go(j, kbs, prefix):
        if len(found) >= limit:
            return
        if j > s:
            found.append(list(prefix))
            return
        mj = instantiate(system, obs[j - 1], kbs)
        for state in sorted(enumerate_equilibria(mj, bound), key=_fmt):
            go(j + 1, step_kbs(mj, mj.kbs, state), prefix + [state])

    go(1, system.kbs, [])
    return found
