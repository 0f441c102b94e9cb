import json
from pathlib import Path

import pytest

from coprimelie import instances as I
from coprimelie.actions import ActionSetup, dump_setup
from coprimelie.catalog import cyclic
from coprimelie.errors import ConfigError
from coprimelie.groups import save_cayley
from coprimelie.harness import (
    KINDS,
    LEMMAS,
    ScenarioConfig,
    lemma_configs,
    load_config,
    parse_config,
    run_batch,
    run_scenario,
)
from coprimelie.report import emit_report, exit_code


@pytest.mark.parametrize("doc", [
    [],
    {"kind": "nope"},
    {"kind": "lemma_regularity", "groups": "five_groups"},  # q missing
    {"kind": "coprime_facts"},
    {"kind": "order16_search", "cap": 0},
    {"kind": "order16_search", "cap": True},
    {"scenarios": {"kind": "order16_search"}},
])
def test_config_errors(doc):
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_unknown_names_raise_config_error():
    for doc in ({"kind": "coprime_facts", "setup": "missing"},
                {"kind": "lemma_metacyclic", "groups": "no_such_list"},
                {"kind": "lemma_metacyclic", "groups": ["cyclic("]}):
        cfg = parse_config(doc)[0]
        with pytest.raises(ConfigError):
            run_scenario(cfg)


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "bad.json")


def test_echo_and_cap():
    cfg = ScenarioConfig.from_dict({"kind": "lemma_q_cube", "groups": "five_groups", "q": 5, "name": "x", "cap": 7})
    assert cfg.echo() == {"kind": "lemma_q_cube", "name": "x", "groups": "five_groups", "q": 5, "cap": 7}
    assert cfg.with_cap(None) is cfg and cfg.with_cap(3).cap == 3


SMALL = {
    "coprime_facts": {"setup": "c7sq_by_s3"},
    "lemma_metacyclic": {"groups": ["cyclic(25)", "elementary_abelian(5, 3)"]},
    "lemma_regularity": {"groups": ["extraspecial_exponent_q(5)"], "q": 5},
    "lemma_q_cube": {"groups": ["cyclic(125)", "elementary_abelian(5, 3)"], "q": 5},
    "lemma_submet": {"groups": [I.frobenius_spec(5, 2)]},
    "frobenius_generation": {"instance": "s3_on_c7sq"},
    "grading_criterion": {"instances": ["heisenberg_gf11", "heisenberg_gf16"]},
    "decomposition_L0": {"instances": ["free2_rank4_c5sq_c2_gf11"]},
    "theorem_main1_hypotheses": {"setup": "c5cube_on_c11cube"},
    "theorem_main2_pipeline": {"pipeline": "c11sq_by_c5sq_c2"},
    "order16_search": {},
}


@pytest.mark.parametrize("kind", KINDS)
def test_every_kind_runs(kind):
    rep = run_scenario(parse_config({"kind": kind, **SMALL[kind]})[0])
    assert rep.checks and rep.status == "pass", rep.to_dict()


def test_reports_are_byte_identical():
    cfgs = parse_config({"scenarios": [{"kind": k, **SMALL[k]} for k in ("lemma_q_cube", "grading_criterion")]})
    a = emit_report(run_batch(cfgs))
    b = emit_report(run_batch(cfgs))
    assert a == b
    assert emit_report(run_batch(cfgs), "text") == emit_report(run_batch(cfgs), "text")


def test_batch_keeps_config_order():
    cfgs = parse_config({"scenarios": [{"kind": "order16_search", "name": "slow"},
                                       {"kind": "lemma_metacyclic", "groups": ["cyclic(5)"], "name": "fast"}]})
    reps = run_batch(cfgs, workers=2)
    assert [r.title for r in reps] == ["slow", "fast"]
    assert emit_report(reps) == emit_report(run_batch(cfgs, workers=1))


def test_main1_controls_skip_conclusions():
    rep = run_scenario(parse_config({"kind": "theorem_main1_hypotheses", "setup": "c5cube_on_s3_trivial"})[0])
    assert rep["centralizers_nilpotent"].status == "fail"
    assert all(c.status == "skip" for c in rep.checks if c.role == "conclusion")
    rep = run_scenario(parse_config({"kind": "theorem_main1_hypotheses", "setup": "c25xc5_on_c11sq"})[0])
    assert rep["A_non_metacyclic"].status == "fail"
    assert all(c.status == "skip" for c in rep.checks if c.role == "conclusion")
    assert exit_code(rep) == 1


def test_main1_positive_observations():
    rep = run_scenario(parse_config({"kind": "theorem_main1_hypotheses", "setup": "c5cube_on_ut3_11"})[0])
    assert rep.status == "pass"
    assert rep["i_G_nilpotent"].observed["class"] == 2


def test_generation_hypothesis_failure_is_recorded():
    rep = run_scenario(parse_config({"kind": "frobenius_generation", "instance": "s3_on_c7sq_trivial_kernel"})[0])
    statuses = {c.role: c.status for c in rep.checks}
    assert statuses == {"hypothesis": "fail", "conclusion": "skip"}


def test_trivial_pipeline_is_a_config_error(tmp_path):
    fs = I.frobenius_group(5, 2)
    G = cyclic(3)
    s = ActionSetup.from_generators(fs.whole, G, {g: list(range(3)) for g in fs.whole.generators})
    save_cayley(fs.whole, tmp_path / "fh.tbl")
    save_cayley(G, tmp_path / "g.tbl")
    (tmp_path / "s.json").write_text(dump_setup(s, "fh.tbl", "g.tbl"))
    cfg = {"kind": "theorem_main2_pipeline", "setup_file": "s.json",
           "kernel": list(fs.kernel.sorted), "complement": list(fs.complement.sorted)}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    with pytest.raises(ConfigError):
        run_scenario(load_config(tmp_path / "cfg.json")[0])


def test_grading_criterion_abstains_on_non_nilpotent():
    rep = run_scenario(parse_config({"kind": "grading_criterion", "instances": ["nonnilpotent_gf11"], "cap": 5})[0])
    assert rep.status == "abstain" and exit_code(rep) == 2


def test_lemma_ids():
    assert set(LEMMAS) >= {"metacyclic", "q-cube", "main1", "main2"}
    assert [c.name for c in lemma_configs("main2")] == [f"main2:{n}" for n in I.GROUP_PIPELINES]
    with pytest.raises(ConfigError):
        lemma_configs("nope")


@pytest.mark.parametrize("path", sorted((Path(__file__).parents[1] / "configs").glob("*.json")))
def test_shipped_configs_parse(path):
    cfgs = load_config(path)
    assert cfgs and all(c.kind in KINDS for c in cfgs)


def test_empty_report_skeleton():
    assert json.loads(emit_report([])) == {"reports": [], "status": "pass"}


def test_coprime_report_has_five_named_checks():
    rep = run_scenario(parse_config({"kind": "coprime_facts", "setup": "c5_by_c2_inversion"})[0])
    doc = json.loads(emit_report(rep))
    assert len(doc["reports"][0]["checks"]) == 5


@pytest.mark.parametrize("doc", [
    {"kind": "theorem_main1_hypotheses", "setup": "c25xc5_on_c11sq"},
    {"kind": "theorem_main1_hypotheses", "setup": "c5cube_on_s3_trivial"},
    {"kind": "frobenius_generation", "instance": "s3_on_c7sq_trivial_kernel"},
    {"kind": "grading_criterion", "instances": ["nonnilpotent_gf11", "nonnilpotent_gf16"], "cap": 4},
    {"kind": "coprime_facts", "setup": "he5_by_c2", "cap": 10},
])
def test_fail_has_witness_and_abstain_has_note(doc):
    rep = run_scenario(parse_config(doc)[0])
    assert rep.status != "pass"
    for c in rep.checks:
        if c.status == "fail":
            assert c.witnesses, c.name
        if c.status == "abstain":
            assert "cap" in c.note.lower(), c.name
    hyp_failed = any(c.role == "hypothesis" and c.status == "fail" for c in rep.checks)
    if hyp_failed:
        assert all(c.status == "skip" for c in rep.checks if c.role == "conclusion")
