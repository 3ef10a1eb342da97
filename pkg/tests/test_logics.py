import itertools

import pytest
from hypothesis import given, strategies as st

from emcs import Atom, PreconditionError, Var, atom
from emcs.logics import DatalogLogic, NormalLogic, Reduct, Rule, gl_reduct, least_model, program, well_founded
from emcs.logics.programs import ground_rules, negation_cycle, well_founded_model

x, y, z = Var("x"), Var("y"), Var("z")
P, Q, R, S = (Atom(n) for n in "pqrs")


def test_transitive_closure():
    rules = program(
        Rule(atom("T", x, y), (atom("E", x, y),)),
        Rule(atom("T", x, z), (atom("T", x, y), atom("E", y, z))),
        atom("E", "a", "b"), atom("E", "b", "c"), atom("E", "c", "d"),
    )
    model = least_model(rules)
    assert {a for a in model if a.pred == "T"} == {
        atom("T", u, v) for u, v in [("a", "b"), ("b", "c"), ("c", "d"), ("a", "c"), ("b", "d"), ("a", "d")]
    }


def test_least_model_rejects_negation():
    with pytest.raises(PreconditionError):
        least_model(program(Rule(P, (), (Q,))))


def test_unbound_variables_range_over_pool():
    rules = program(Rule(atom("F", x), (), (atom("C", x),)), atom("C", "a"))
    assert well_founded(rules, {"a", "b"}) == {atom("C", "a"), atom("F", "b")}


def test_well_founded_three_valued():
    # p :- not q.  q :- not p.  r :- not r.  s.
    rules = program(Rule(P, (), (Q,)), Rule(Q, (), (P,)), Rule(R, (), (R,)), S)
    true, possible = well_founded_model(rules)
    assert true == {S}
    assert possible == {P, Q, R, S}


def test_stratified_negation():
    rules = program(Rule(P, (), (Q,)), Rule(R, (P,)), Rule(S, (), (R,)))
    assert well_founded(rules) == {P, R}
    assert not negation_cycle(rules)
    assert negation_cycle(program(Rule(P, (), (Q,)), Rule(Q, (), (P,))))


def test_gl_reduct_examples():
    kb = program(Rule(P, (Q,), (R,)), Rule(S, (), (P,)), Q)
    assert gl_reduct(kb, {R}) == program(Rule(S), Q)
    assert gl_reduct(kb, {P}) == program(Rule(P, (Q,)), Q)
    assert gl_reduct(kb, set()) == program(Rule(P, (Q,)), Rule(S), Q)


def test_lazy_reduct_agrees_with_materialized():
    kb = program(Rule(atom("F", x), (atom("I", x),), (atom("C", x),)), atom("I", "a"), atom("I", "b"), atom("C", "a"))
    belief = {atom("C", "b")}
    lp = NormalLogic()
    lazy = lp.reduce(kb, belief, {"a", "b"})
    assert isinstance(lazy, Reduct) and lp.is_reduced(lazy)
    assert lp.acc(lazy, {"a", "b"}) == least_model(gl_reduct(kb, belief, {"a", "b"}))


def test_normal_logic_reduction_on_definite_is_identity():
    kb = program(Rule(P, (Q,)), Q)
    assert NormalLogic().reduce(kb, {P}) is kb
    assert DatalogLogic().reduce(kb, {P}) is kb


LETTERS = [Atom(c) for c in "abcd"]


@st.composite
def ground_programs(draw, negation=True):
    rules = set()
    for _ in range(draw(st.integers(0, 7))):
        head = draw(st.sampled_from(LETTERS))
        pos_ = tuple(draw(st.lists(st.sampled_from(LETTERS), max_size=2)))
        neg_ = tuple(draw(st.lists(st.sampled_from(LETTERS), max_size=2))) if negation else ()
        rules.add(Rule(head, pos_, neg_))
    return frozenset(rules)


def naive_least_model(rules):
    model = set()
    while True:
        new = {r.head for r in rules if all(p in model for p in r.pos)} | model
        if new == model:
            return frozenset(model)
        model = new


@given(ground_programs(negation=False))
def test_semi_naive_equals_naive(rules):
    assert least_model(rules) == naive_least_model(rules)


def stable_models(rules):
    atoms = sorted({a for r in rules for a in r.atoms()})
    out = []
    for k in range(len(atoms) + 1):
        for cand in itertools.combinations(atoms, k):
            m = frozenset(cand)
            if naive_least_model(gl_reduct(rules, m)) == m:
                out.append(m)
    return out


@given(ground_programs())
def test_well_founded_below_every_stable_model(rules):
    w = well_founded(rules)
    for m in stable_models(rules):
        assert w <= m


@given(ground_programs())
def test_stratified_programs_have_one_stable_model_equal_to_wfs(rules):
    if negation_cycle(rules):
        return
    assert stable_models(rules) == [well_founded(rules)]


@given(ground_programs(), st.sets(st.sampled_from(LETTERS)), st.sets(st.sampled_from(LETTERS)))
def test_reduct_is_antitone(rules, s1, s2):
    small, big = frozenset(s1), frozenset(s1 | s2)
    assert gl_reduct(rules, big) <= gl_reduct(rules, small)


@given(ground_programs(), st.sets(st.sampled_from(LETTERS)))
def test_reducibility_law_on_stratified_programs(rules, s):
    # S is accepted iff it is the belief set of the reduct w.r.t. S
    if negation_cycle(rules):
        return
    lp = NormalLogic()
    s = frozenset(s)
    assert (lp.acc(rules) == s) == (lp.acc(lp.reduce(rules, s)) == s)


def test_ground_rules_instantiates_every_variable():
    rules = ground_rules([Rule(atom("P", x), (atom("Q", x, y),))], {"a", "b"})
    assert len(rules) == 4 and all(r.is_ground() for r in rules)


def test_normal_lp_examples():
    lp = NormalLogic()
    assert lp.acc(program(Rule(P, (), (Q,)))) == {P}
    assert lp.acc(program(Rule(P, (), (Q,)), Rule(Q, (), (P,)))) == frozenset()
    kb = program(Rule(atom("AdmissibleImporter", x), (), (atom("SuspectedBadGuy", x),)), atom("SuspectedBadGuy", "i1"))
    out = lp.acc(kb, {"i1", "i2"})
    assert atom("AdmissibleImporter", "i2") in out and atom("AdmissibleImporter", "i1") not in out


def test_datalog_examples():
    assert DatalogLogic().acc(program(Rule(Q, (P,)), P)) == {P, Q}
    assert DatalogLogic().acc(frozenset()) == frozenset()


def test_gl_reduct_spec_cases():
    assert gl_reduct(program(Rule(P, (), (Q,))), set()) == program(P)
    assert gl_reduct(program(Rule(P, (), (Q,))), {Q}) == frozenset()


@given(ground_programs(negation=False), ground_programs(negation=False))
def test_datalog_is_monotone(a, b):
    assert DatalogLogic().acc(a) <= DatalogLogic().acc(a | b)


@given(ground_programs(negation=False))
def test_normal_lp_agrees_with_datalog_without_negation(rules):
    assert NormalLogic().acc(rules) == DatalogLogic().acc(rules)


@given(ground_programs())
def test_accepted_set_is_stable_under_its_reduct(rules):
    if negation_cycle(rules):
        return
    s = NormalLogic().acc(rules)
    assert DatalogLogic().acc(gl_reduct(rules, s)) == s
