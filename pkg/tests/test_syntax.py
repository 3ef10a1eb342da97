import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from emcs import Atom, ParseError, atom, parse_observations, parse_system, serialize_observations, serialize_system, validate
from emcs.fixtures import cargo_text, m2, me, mol, msj
from emcs.logics import Name, Rule, Sub
from emcs.oracle import random_stream, random_system
from emcs.syntax import ObservationError, VocabularyInferenceWarning, parse_atom, parse_states, state_record
from emcs import Var


def test_minimal_document():
    s = parse_system("context C : identity { kb { a. } }")
    assert len(s.contexts) == 1 and s.contexts[0].kb == {Atom("a")}
    assert validate(s) == []


@pytest.mark.parametrize("make", [m2, msj, mol, me])
def test_round_trip_is_bit_identical(make):
    text = serialize_system(make())
    again = parse_system(text)
    assert again == make()
    assert serialize_system(again) == text


def test_cargo_document(cargo_fixture):
    system, _ = cargo_fixture
    assert system.names == ["C1", "C2", "C3", "C4"] and system.obs_count == 2
    c3, c4 = system.contexts[2], system.contexts[3]
    assert Sub(Name("Tomato"), Name("EdibleVegetable")) in c3.kb
    x = Var("x")
    assert Rule(atom("FullInspection", x), (), (atom("CompliantShpmt", x),)) in c4.kb
    assert validate(system) == []
    heads = [str(r.head) for r in c4.bridge_rules]
    assert "next(add(SuspectedBadGuy(x)))" in heads


def test_cargo_vocabulary_inference_warns():
    with pytest.warns(VocabularyInferenceWarning, match="Random/1"):
        system = parse_system(cargo_text())
    assert ("Random", 1) in system.contexts[1].vocabulary


def test_cargo_round_trip(cargo_fixture):
    system, _ = cargo_fixture
    text = serialize_system(system)
    assert parse_system(text) == system


def test_parse_error_positions():
    with pytest.raises(ParseError) as e:
        parse_system("context C : identity {\n  kb { a( }\n}")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_system("context C : weird { }")
    with pytest.raises(ParseError) as e:
        parse_system("context C : identity { bridge { add(p) <- (D:q). } }")
    assert "unknown context" in str(e.value)


def test_context_reference_by_name():
    s = parse_system("context A : identity { vocab q/0; }\ncontext B : identity { bridge { add(p) <- (A:q). } }")
    assert s.contexts[1].bridge_rules[0].body[0].context == 1


def test_observations(cargo_fixture):
    system, obs = cargo_fixture
    assert len(obs) == 3
    assert obs[1][1] == {atom("Misfiling", "i3")}
    assert parse_observations("", system) == []
    assert parse_observations(serialize_observations(obs, system), system) == obs


def test_observation_errors(cargo_fixture):
    system, _ = cargo_fixture
    with pytest.raises(ObservationError) as e:
        parse_observations('{}\n{"C9": []}\n', system)
    assert e.value.line == 2
    with pytest.raises(ObservationError) as e:
        parse_observations('{"C1": ["Bogus(s1)"]}', system)
    assert e.value.line == 1
    with pytest.raises(ObservationError):
        parse_observations("not json", system)
    with pytest.raises(ObservationError):
        parse_observations('{"C1": ["ShpmtCommod(x, c1)"]}', system)


def test_state_records_round_trip(cargo_fixture):
    from emcs import evolving_wfs
    system, obs = cargo_fixture
    states, _ = evolving_wfs(system, obs)
    text = "\n".join(json.dumps(state_record(j, s, system)) for j, s in enumerate(states, 1))
    assert parse_states(text, system) == states


def test_parse_atom():
    assert parse_atom("HTSCode(c1, '07020020')") == atom("HTSCode", "c1", "07020020")
    with pytest.raises(ParseError):
        parse_atom("P(x)")


@settings(max_examples=50)
@given(st.integers(0, 10_000))
def test_round_trip_random_systems(seed):
    s = random_system(random.Random(seed), observations=1, next_prob=0.3)
    text = serialize_system(s)
    assert parse_system(text, infer_vocabulary=False) == s
    assert serialize_system(parse_system(text, infer_vocabulary=False)) == text


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_round_trip_random_streams(seed):
    rng = random.Random(seed)
    s = random_system(rng, observations=2)
    obs = random_stream(rng, s, 4)
    assert parse_observations(serialize_observations(obs, s), s) == obs
