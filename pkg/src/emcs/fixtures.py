"""Small named systems and the shipped cargo scenario."""
from __future__ import annotations

import warnings
from importlib import resources

from .kernel import Atom, BridgeRule, Emcs, EvolvingContext, add, neg, next_add, pos
from .logics import DatalogLogic, ObservationLogic
from .syntax import VocabularyInferenceWarning, parse_observations, parse_system

P, Q, R, O = Atom("p"), Atom("q"), Atom("r"), Atom("o")


def _identity(name, rules=(), vocab=None, kb=frozenset()):
    return EvolvingContext(name, ObservationLogic(), kb, tuple(rules), vocabulary=vocab)


def m2() -> Emcs:
    """Two identity contexts: ``add(p) <- (2:q)`` and ``add(q) <- not (1:r)``."""
    return Emcs((
        _identity("C1", [BridgeRule(add(P), (pos(2, Q),))], vocab={("p", 0), ("r", 0)}),
        _identity("C2", [BridgeRule(add(Q), (neg(1, R),))], vocab={("q", 0)}),
    ))


def msj() -> Emcs:
    """Self-justification: ``add(p) <- (1:p)``."""
    return Emcs((_identity("C1", [BridgeRule(add(P), (pos(1, P),))]),))


def mol() -> Emcs:
    """Odd loop: ``add(p) <- not (1:p)``."""
    return Emcs((_identity("C1", [BridgeRule(add(P), (neg(1, P),))]),))


def me() -> Emcs:
    """Observation context C1 feeding ``next(add(p)) <- (1:o)`` in C2."""
    return Emcs((
        EvolvingContext("C1", ObservationLogic(), frozenset(), observation=True, vocabulary={("o", 0)}),
        EvolvingContext("C2", DatalogLogic(), frozenset(), (BridgeRule(next_add(P), (pos(1, O),)),)),
    ))


def cargo_text() -> str:
    return resources.files("emcs.data").joinpath("cargo.emcs").read_text()


def cargo_obs_text() -> str:
    return resources.files("emcs.data").joinpath("cargo.obs").read_text()


def cargo() -> tuple[Emcs, list]:
    """The cargo system and its three-instant observation sequence."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", VocabularyInferenceWarning)
        system = parse_system(cargo_text())
    return system, parse_observations(cargo_obs_text(), system)


SCALING_SPEC = """
context Gate : observation { vocab Arrive/1, Flag/1, Link/2; }
context Registry : datalog {
  vocab Known/1, Seen/1, Linked/2, Reach/2;
  kb {
    Reach(x, y) :- Linked(x, y).
    Reach(x, z) :- Reach(x, y), Linked(y, z).
  }
  bridge {
    add(Known(x)) <- (1:Arrive(x)).
    add(Linked(x, y)) <- (1:Link(x, y)).
    next(add(Seen(x))) <- (1:Flag(x)).
  }
}
context Policy : normal-lp {
  vocab Item/1, Risky/1, Cleared/1, Hold/1;
  kb {
    Hold(x) :- Item(x), not Cleared(x).
    Cleared(x) :- Item(x), not Risky(x).
  }
  bridge {
    add(Item(x)) <- (2:Known(x)).
    add(Risky(x)) <- (2:Seen(x)).
    add(Risky(y)) <- (2:Seen(x)), (2:Reach(x, y)), (1:Arrive(y)).
  }
}
"""


def scaling_system() -> Emcs:
    """Fixed rule schema whose cost is driven by the constant pool alone."""
    return parse_system(SCALING_SPEC)


def scaling_stream(n: int, length: int, seed: int = 0) -> tuple[frozenset, list]:
    """``length`` instants over ``n`` constants ``k0..k{n-1}``.

    Each instant has about ``n`` atoms: every constant arrives, a few are
    flagged, and a sparse random link chain is observed.
    """
    import random

    rng = random.Random(seed)
    consts = [f"k{i}" for i in range(n)]
    pool = frozenset(consts)
    obs = []
    for _ in range(length):
        atoms = {Atom("Arrive", (c,)) for c in consts}
        atoms |= {Atom("Flag", (c,)) for c in rng.sample(consts, max(1, n // 50))}
        for _ in range(max(1, n // 10)):
            a, b = rng.sample(consts, 2)
            atoms.add(Atom("Link", (a, b)))
        obs.append((frozenset(atoms),))
    return pool, obs
