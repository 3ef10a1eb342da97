import random

import pytest
from hypothesis import given, settings, strategies as st

from emcs import wfs
from emcs.fixtures import m2, mol, msj
from emcs.kernel import belief_state, state_leq
from emcs.oracle import (
    OracleBoundError, belief_universe, candidates, enumerate_equilibria, evolving_equilibria, grounded_equilibria,
    minimal_equilibria, random_stream, random_system, verify_props,
)
from emcs import check_evolving_equilibrium


def test_fixture_equilibria():
    assert enumerate_equilibria(msj()) == {belief_state([]), belief_state(["p"])}
    assert enumerate_equilibria(mol()) == set()
    assert enumerate_equilibria(m2()) == {belief_state(["p"], ["q"])}


def test_candidate_counts():
    assert len(list(candidates(msj()))) == 2
    assert len(list(candidates(m2()))) == 8


def test_minimal_equilibria():
    assert minimal_equilibria(msj()) == {belief_state([])}
    assert minimal_equilibria(mol()) == set()
    assert minimal_equilibria(m2()) == {belief_state(["p"], ["q"])}


def test_bound_refusal_reports_size():
    with pytest.raises(OracleBoundError) as e:
        enumerate_equilibria(m2(), bound=4)
    assert e.value.total == 8 and sorted(e.value.sizes) == [1, 2]


def test_verify_props_fixtures():
    r = verify_props(msj())
    assert r.passed and r.grounded == 1 and r.equilibria == 2
    r = verify_props(mol())
    assert r.passed and r.grounded == 0 and r.checks["wfs_below"].checked == 0
    d = verify_props(m2()).to_dict()
    assert d["passed"] and d["checks"]["acyclic_unique"]["checked"] == 1


def test_universe_of_m2():
    u = belief_universe(m2())
    assert [str(a) for a in u[0]] == ["p", "r"]


seeds = st.integers(0, 10_000)


@settings(max_examples=30)
@given(seeds)
def test_enumeration_order_does_not_matter(seed):
    s = random_system(random.Random(seed))
    from emcs.equilibria import is_static_equilibrium
    cands = list(candidates(s))
    random.Random(seed).shuffle(cands)
    assert {c for c in cands if is_static_equilibrium(s, c)} == enumerate_equilibria(s)


@settings(max_examples=30)
@given(seeds)
def test_wfs_below_grounded_equilibria(seed):
    s = random_system(random.Random(seed))
    w = wfs(s)
    for g in grounded_equilibria(s):
        assert state_leq(w, g)
        assert g in minimal_equilibria(s)


@settings(max_examples=15)
@given(seeds)
def test_evolving_equilibria_verify(seed):
    rng = random.Random(seed)
    s = random_system(rng, observations=1, next_prob=0.4)
    obs = random_stream(rng, s, 3)
    for e in evolving_equilibria(s, obs, limit=4):
        assert check_evolving_equilibrium(s, obs, e)
