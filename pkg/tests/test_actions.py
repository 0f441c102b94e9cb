import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coprimelie import instances as I
from coprimelie.actions import (
    ActionSetup,
    Automorphism,
    commutator_with_action,
    dump_setup,
    fixed_points,
    load_setup,
    verify_coprime_facts,
)
from coprimelie.catalog import cyclic, elementary_abelian, matrix_map, power_map
from coprimelie.errors import NotCoprime
from coprimelie.groups import is_normal, save_cayley


def _c5_inversion():
    return ActionSetup.from_generators(cyclic(2), cyclic(5), {1: power_map(cyclic(5), -1)})


def _c5sq_flip():
    G = elementary_abelian(5, 2)
    return ActionSetup.from_generators(cyclic(2), G, {1: matrix_map(G, [[1, 0], [0, -1]])})


def test_fixed_points_examples():
    s = _c5_inversion()
    assert fixed_points(s, [0]).order == 5
    assert fixed_points(s).order == 1
    f = _c5sq_flip()
    C = fixed_points(f, [1])
    assert sorted(f.target.labels[x] for x in C.elements) == [(x, 0) for x in range(5)]


def test_commutator_with_action_examples():
    G = cyclic(5)
    triv = ActionSetup.from_generators(cyclic(2), G, {1: list(range(5))})
    assert commutator_with_action(triv).order == 1
    assert commutator_with_action(_c5_inversion()).order == 5
    f = _c5sq_flip()
    GA = commutator_with_action(f)
    assert sorted(f.target.labels[x] for x in GA.elements) == [(0, y) for y in range(5)]


def test_coprime_facts_examples():
    rep = verify_coprime_facts(_c5_inversion())
    assert rep["i_centralizer_times_commutator"].status == "pass"
    assert rep["ii_commutator_stable"].status == "pass"
    rep = verify_coprime_facts(I.coprime_setup("c5sq_by_v4_signs"))
    assert rep["v_product_of_centralizers"].status == "pass"
    assert rep["v_product_of_centralizers"].observed["centralizer_orders"] == [5, 5, 1]


def test_trivial_actor_passes_degenerately():
    s = ActionSetup.from_generators(cyclic(1), cyclic(5), {})
    assert verify_coprime_facts(s).status == "pass"


def test_non_coprime_refused():
    s = ActionSetup.from_generators(cyclic(2), cyclic(2), {1: [0, 1]})
    assert not s.coprime
    with pytest.raises(NotCoprime):
        verify_coprime_facts(s)


def test_rep_must_be_homomorphism():
    G = cyclic(7)
    with pytest.raises(ValueError):
        ActionSetup(cyclic(2), G, [list(range(7)), power_map(G, 2)])


def test_automorphism_checks():
    with pytest.raises(Exception):
        Automorphism(cyclic(5), [0, 1, 3, 2, 4])
    a = Automorphism(cyclic(5), power_map(cyclic(5), 2))
    assert a.order == 4 and a.fixed() == [0]


@pytest.mark.parametrize("name", list(I.COPRIME_SETUPS))
def test_every_registered_setup_satisfies_the_facts(name):
    s = I.coprime_setup(name)
    assert s.coprime
    rep = verify_coprime_facts(s)
    assert all(c.status in ("pass", "skip") for c in rep.checks), rep.to_dict()
    GA = commutator_with_action(s)
    assert is_normal(s.target, GA)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(I.COPRIME_SETUPS)), st.data())
def test_fixed_points_antitone(name, data):
    s = I.coprime_setup(name)
    n = s.actor.order
    S1 = data.draw(st.sets(st.integers(0, n - 1), max_size=3))
    S2 = S1 | data.draw(st.sets(st.integers(0, n - 1), max_size=3))
    assert fixed_points(s, S2) <= fixed_points(s, S1)


def test_setup_json_round_trip(tmp_path):
    s = I.coprime_setup("c7sq_by_s3")
    save_cayley(s.actor, tmp_path / "a.tbl")
    save_cayley(s.target, tmp_path / "g.tbl")
    (tmp_path / "setup.json").write_text(dump_setup(s, "a.tbl", "g.tbl"))
    t = load_setup(tmp_path / "setup.json")
    assert (t.perms == s.perms).all()
    doc = json.loads((tmp_path / "setup.json").read_text())
    assert set(doc) == {"actor_file", "target_file", "images"}
