"""Evolution over an observation sequence.

An observation sequence is a list of instants; an instant is a tuple with
one knowledge base (a frozenset of ground atoms) per observation context.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from .bridge import applicable_heads, split_now_next, state_index
from .equilibria import check_acyclic, gamma, is_grounded_equilibrium, is_static_equilibrium, wfs
from .kernel import Diagnostic, Emcs, EmcsError, VocabularyError
from .syntax import ObservationError, check_instant, state_record

log = logging.getLogger(__name__)


class GroundedEquilibriumError(EmcsError):
    """An instant has no grounded equilibrium, or more than one."""

    def __init__(self, instant, orbit, kind="none"):
        self.instant, self.orbit, self.kind = instant, orbit, kind
        what = "no grounded equilibrium" if kind == "none" else "several grounded equilibria"
        super().__init__(f"instant {instant}: {what}")


def observation_pool(obs) -> frozenset:
    return frozenset(t for instant in obs for o in instant for a in o for t in a.args)


def step_kbs(system: Emcs, kbs, state) -> tuple:
    """Thread reasoning-context kbs to the next instant via the next-heads fired in ``state``."""
    index = state_index(state)
    pool = system.pool
    out = list(kbs)
    for i, ctx in enumerate(system.contexts):
        if ctx.observation:
            continue
        nxt_rules = [r for r in ctx.bridge_rules if r.head.next]
        if not nxt_rules:
            continue
        heads = applicable_heads(nxt_rules, index, state, pool)
        _, nxt = split_now_next(heads)
        if nxt:
            out[i] = ctx.mng(nxt, kbs[i])
    return tuple(out)


def instantiate(system: Emcs, instant, kbs=None) -> Emcs:
    """The system at one instant: observation contexts hold ``instant``,
    reasoning contexts hold ``kbs`` (default: their current kbs)."""
    ell = system.obs_count
    if len(instant) != ell:
        raise ObservationError(f"instant has {len(instant)} observations, system has {ell}")
    kbs = system.kbs if kbs is None else kbs
    contexts = []
    for i, ctx in enumerate(system.contexts):
        if i < ell:
            o = frozenset(instant[i])
            extra = {a.signature for a in o} - ctx.vocabulary
            if extra:
                p, a = sorted(extra)[0]
                raise VocabularyError(f"{ctx.name}: {p}/{a} outside the context vocabulary")
            contexts.append(ctx.replace_kb(o))
        else:
            contexts.append(ctx.replace_kb(kbs[i]))
    out = Emcs(tuple(contexts), system.constants)
    return out


def _prepare(system: Emcs, obs) -> Emcs:
    """Fix the grounding pool once for the whole run."""
    return system.with_constants(system.pool | observation_pool(obs))


@dataclass(frozen=True)
class InstantRecord:
    instant: int
    kbs: tuple
    state: tuple
    app_now: tuple
    app_next: tuple

    def to_dict(self, system: Emcs) -> dict:
        names = system.names
        from .syntax import format_kb_item

        return state_record(
            self.instant, self.state, system,
            kbs={n: sorted(format_kb_item(x) for x in getattr(kb, "rules", kb)) for n, kb in zip(names, self.kbs)},
            app_now={n: sorted(str(h) for h in hs) for n, hs in zip(names, self.app_now)},
            app_next={n: sorted(str(h) for h in hs) for n, hs in zip(names, self.app_next)},
        )


@dataclass
class EvolutionTrace:
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def states(self) -> list:
        return [r.state for r in self.records]


def _heads_split(system: Emcs, state):
    index = state_index(state)
    pool = system.pool
    now, nxt = [], []
    for ctx in system.contexts:
        n, x = split_now_next(applicable_heads(ctx.bridge_rules, index, state, pool))
        now.append(frozenset(n))
        nxt.append(frozenset(x))
    return tuple(now), tuple(nxt)


def _evolve(system: Emcs, obs, s, solve) -> tuple[list, EvolutionTrace]:
    if s > len(obs):
        raise ValueError(f"size {s} exceeds the {len(obs)} observed instants")
    system = _prepare(system, obs)
    kbs = system.kbs
    states, trace = [], EvolutionTrace()
    for j in range(1, s + 1):
        mj = instantiate(system, obs[j - 1], kbs)
        state = solve(mj, j)
        now, nxt = _heads_split(mj, state)
        trace.records.append(InstantRecord(j, mj.kbs, state, now, nxt))
        states.append(state)
        kbs = step_kbs(mj, mj.kbs, state)
    return states, trace


def evolving_wfs(system: Emcs, obs, s: Optional[int] = None) -> tuple[list, EvolutionTrace]:
    """Evolving well-founded semantics of size ``s`` (default: every instant)."""
    s = len(obs) if s is None else s
    return _evolve(system, obs, s, lambda mj, j: wfs(mj))


def grounded_at(mj: Emcs, j: int = 1, search_bound: int = 1 << 16) -> tuple:
    """The unique grounded equilibrium of one instantiated system.

    Every grounded equilibrium lies between the well-founded state W and
    gamma(W); when they coincide it is W.  Otherwise the interval is searched.
    """
    w = wfs(mj)
    g = gamma(mj, w)
    if g == w:
        if not is_static_equilibrium(mj, w):
            raise GroundedEquilibriumError(j, [w], "none")
        return w
    if check_acyclic(mj):
        log.warning("instant %d: acyclic system whose well-founded state is not gamma-stable", j)
    gaps = [sorted(gc - wc) for wc, gc in zip(w, g)]
    if not all(wc <= gc for wc, gc in zip(w, g)):
        raise GroundedEquilibriumError(j, [w, g], "none")
    flat = [(i, a) for i, gap in enumerate(gaps) for a in gap]
    if 1 << len(flat) > search_bound:
        raise EmcsError(f"instant {j}: {len(flat)} undecided beliefs, too many to search")
    found = []
    for mask in range(1 << len(flat)):
        cand = [set(c) for c in w]
        for k, (i, a) in enumerate(flat):
            if mask >> k & 1:
                cand[i].add(a)
        cand = tuple(frozenset(c) for c in cand)
        if is_grounded_equilibrium(mj, cand):
            found.append(cand)
    if len(found) == 1:
        return found[0]
    raise GroundedEquilibriumError(j, [w, g], "none" if not found else "ambiguous")


def evolving_grounded_equilibrium(system: Emcs, obs, s: Optional[int] = None) -> tuple[list, EvolutionTrace]:
    s = len(obs) if s is None else s
    return _evolve(system, obs, s, lambda mj, j: grounded_at(mj, j))


def first_violation(system: Emcs, obs, states) -> Optional[int]:
    """1-based index of the first instant whose state is not an equilibrium, else None."""
    if len(states) > len(obs):
        return len(obs) + 1
    system = _prepare(system, obs)
    kbs = system.kbs
    for j, state in enumerate(states, start=1):
        mj = instantiate(system, obs[j - 1], kbs)
        if not is_static_equilibrium(mj, state):
            return j
        kbs = step_kbs(mj, mj.kbs, state)
    return None


def check_evolving_equilibrium(system: Emcs, obs, states) -> bool:
    return first_violation(system, obs, states) is None


class StreamDriver:
    """Incremental evaluation of the evolving well-founded semantics.

    Holds only the current reasoning kbs.  ``pool`` fixes the constants the
    stream may mention; it defaults to the system's own pool.
    """

    def __init__(self, system: Emcs, pool=None):
        self.system = system.with_constants(system.pool | frozenset(pool or ()))
        self.pool = self.system.pool
        self.kbs = self.system.kbs
        self.instant = 0
        self.last = None
        self.diagnostics: list[Diagnostic] = []

    def feed(self, instant) -> tuple:
        j = self.instant + 1
        instant = tuple(frozenset(o) for o in instant)
        check_instant(self.system, instant, pool=self.pool, j=j)
        mj = instantiate(self.system, instant, self.kbs)
        state = wfs(mj)
        self.kbs = step_kbs(mj, mj.kbs, state)
        self.instant, self.last = j, state
        return state


def stream_driver(system: Emcs, source: Iterable, pool=None,
                  on_error: Optional[Callable[[Diagnostic], None]] = None) -> Iterator[tuple]:
    """Yield ``(j, S^j)`` per consumed instant; stop at the first malformed one."""
    driver = StreamDriver(system, pool)
    for instant in source:
        try:
            state = driver.feed(instant)
        except (ObservationError, VocabularyError) as e:
            d = Diagnostic("malformed-instant", str(e), rule=f"instant {driver.instant + 1}")
            driver.diagnostics.append(d)
            log.error("%s", d)
            if on_error is not None:
                on_error(d)
            return
        yield driver.instant, state
