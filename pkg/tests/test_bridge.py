import itertools

import pytest
from hypothesis import given, strategies as st

from emcs import Atom, BridgeRule, Emcs, EvolvingContext, Var, add, app, app_next, app_now, atom, ground, neg, next_add, pos
from emcs.bridge import UnsafeRuleError, applicable_heads, satisfies, state_index
from emcs.fixtures import m2
from emcs.kernel import belief_state
from emcs.logics import ObservationLogic

x, y = Var("x"), Var("y")


def test_app_on_m2():
    s = m2()
    assert app(s, 1, belief_state([], ["q"])) == {add(Atom("p"))}
    assert app(s, 1, belief_state([], [])) == set()
    assert app(s, 2, belief_state(["r"], [])) == set()
    assert app(s, 2, belief_state([], [])) == {add(Atom("q"))}


def test_now_next_split():
    c = EvolvingContext("C", ObservationLogic(), frozenset(), (
        BridgeRule(add(Atom("a")), (pos(1, Atom("t")),)),
        BridgeRule(next_add(Atom("b")), (pos(1, Atom("t")),)),
    ), vocabulary={("a", 0), ("b", 0), ("t", 0)})
    s = Emcs((c,))
    st_ = belief_state(["t"])
    assert app_now(s, 1, st_) == {add(Atom("a"))}
    assert app_next(s, 1, st_) == {add(Atom("b"))}


def test_join_across_contexts():
    rule = BridgeRule(add(atom("R", x, y)), (pos(1, atom("E", x, "k")), pos(2, atom("F", "k", y))))
    state = (frozenset({atom("E", "a", "k"), atom("E", "b", "j")}), frozenset({atom("F", "k", "c")}))
    assert applicable_heads([rule], state_index(state), state) == {add(atom("R", "a", "c"))}


def test_ground_rejects_unsafe():
    with pytest.raises(UnsafeRuleError):
        ground([BridgeRule(add(atom("P", x)), (neg(1, atom("Q", x)),))], {"a"})


def test_ground_enumerates_pool():
    r = BridgeRule(add(atom("P", x)), (pos(1, atom("Q", x)),))
    assert len(ground([r], {"a", "b", "c"})) == 3


POOL = ("a", "b")
ATOMS = [atom("P", c) for c in POOL] + [atom("Q", c, d) for c in POOL for d in POOL]


@st.composite
def rules_and_state(draw):
    terms = st.sampled_from([x, y, "a", "b"])
    lits = []
    for _ in range(draw(st.integers(1, 3))):
        ctx = draw(st.integers(1, 2))
        if draw(st.booleans()):
            a = atom("P", draw(terms))
        else:
            a = atom("Q", draw(terms), draw(terms))
        lits.append((ctx, a, draw(st.booleans())))
    body = tuple(neg(c, a) if n else pos(c, a) for c, a, n in lits)
    head = add(atom("H", draw(terms)))
    state = tuple(frozenset(draw(st.sets(st.sampled_from(ATOMS)))) for _ in range(2))
    return BridgeRule(head, body), state


@given(rules_and_state())
def test_join_matches_full_grounding(data):
    rule, state = data
    expected = set()
    vs = sorted(rule.variables(), key=lambda v: v.name)
    for combo in itertools.product(POOL, repeat=len(vs)):
        g = rule.substitute(dict(zip(vs, combo)))
        if all(satisfies(state, lit) for lit in g.body):
            expected.add(g.head)
    assert applicable_heads([rule], state_index(state), state, frozenset(POOL)) == expected
