import pytest

from epiresolve.kripke import (
    Model,
    Partition,
    PreModel,
    all_groups,
    as_premodel,
    common_relation,
    group_relation,
    is_pseudo,
    iterated_relation,
    load_model,
    model_from_dict,
    model_to_dict,
    resolve,
    resolve_pre,
    restrict,
    save_model,
    validate,
)
from epiresolve.syntax import delta

from conftest import model_list


def grp(csv):
    return frozenset(csv.split(","))


def blocks(part):
    return part.sorted_blocks()


class TestValidate:
    def test_fig1_is_sound(self, FIG1):
        assert validate(FIG1) == []

    def test_missing_cover_reported(self, FIG1):
        broken = Model(
            states=FIG1.states,
            agents=FIG1.agents,
            relations={"1": Partition(frozenset([frozenset(["u"])])), "2": FIG1.relations["2"]},
            valuation=FIG1.valuation,
        )
        assert any("agent 1 partition does not cover" in v and "s" in v for v in validate(broken))

    def test_pseudo_monotonicity_violation(self):
        pre = PreModel.make(
            states=["a", "b"],
            relations={"1": [["a"], ["b"]], "2": [["a"], ["b"]]},
            group_relations={"1": [["a"], ["b"]], "2": [["a"], ["b"]], "1,2": [["a", "b"]]},
        )
        assert "pseudo: monotonicity violated for {1}⊆{1,2}" in validate(pre)
        assert not is_pseudo(pre)

    def test_pseudo_singleton_violation(self):
        pre = PreModel.make(
            states=["a", "b"],
            relations={"1": [["a", "b"]], "2": [["a"], ["b"]]},
            group_relations={"1": [["a"], ["b"]], "2": [["a"], ["b"]], "1,2": [["a"], ["b"]]},
        )
        assert any(v.startswith("pseudo: singleton relation for agent 1") for v in validate(pre))


class TestDerivedRelations:
    def test_group_relation_is_the_core(self, FIG1):
        assert blocks(group_relation(FIG1, grp("1,2"))) == [["s"], ["t", "v"], ["u"], ["w"]]

    def test_singleton_group_is_the_agent_relation(self, FIG1):
        assert group_relation(FIG1, grp("1")) == FIG1.relations["1"]
        assert blocks(group_relation(FIG1, grp("1"))) == [["s", "t", "v", "w"], ["u"]]

    def test_common_relation_merges_everything(self, FIG1):
        assert blocks(common_relation(FIG1, grp("1,2"))) == [["s", "t", "u", "v", "w"]]

    def test_common_relation_after_collapse(self, CORE):
        assert blocks(common_relation(CORE, grp("1,2"))) == [["s"], ["t", "v"], ["u"], ["w"]]

    def test_common_relation_singleton(self, FIG1):
        assert common_relation(FIG1, grp("2")) == FIG1.relations["2"]

    def test_group_relation_is_antitone(self):
        for m in model_list(3, ("1", "2", "3"), ()):
            parts = {g: group_relation(m, g) for g in all_groups(m.agents)}
            for small in parts:
                for big in parts:
                    if small < big:
                        assert parts[big].refines(parts[small])


class TestResolve:
    def test_fig1_resolves_to_core(self, FIG1, CORE):
        assert resolve(FIG1, grp("1,2")) == CORE

    def test_singleton_resolution_is_identity(self, FIG1):
        assert resolve(FIG1, grp("1")) == FIG1

    def test_idempotent_on_fig1(self, FIG1, CORE):
        assert resolve(resolve(FIG1, grp("1,2")), grp("1,2")) == CORE

    def test_idempotent_and_disjoint_commute(self):
        groups = all_groups(["1", "2", "3"])
        for m in model_list(4, ("1", "2", "3"), ()):
            for g in groups:
                once = resolve(m, g)
                assert resolve(once, g) == once
            for g in groups:
                for h in groups:
                    if not (g & h):
                        assert resolve(resolve(m, g), h) == resolve(resolve(m, h), g)

    def test_grand_coalition_levels_all_relations(self):
        everyone = grp("1,2")
        for m in model_list(3, ("1", "2"), ()):
            core = group_relation(m, everyone)
            updated = resolve(m, everyone)
            assert all(updated.relations[a] == core for a in updated.agents)
            assert common_relation(updated, everyone) == core


class TestResolvePre:
    def test_embedding_matches_model_update(self, FIG1, CORE):
        assert resolve_pre(as_premodel(FIG1), grp("1,2")) == as_premodel(CORE)

    def test_singleton_is_identity_on_pseudo_models(self, FIG1):
        pre = as_premodel(FIG1)
        assert resolve_pre(pre, grp("2")) == pre

    def test_update_commutes_with_the_embedding(self):
        for m in model_list(3, ("1", "2"), ("p",))[:120]:
            for g in all_groups(m.agents):
                assert as_premodel(resolve(m, g)) == resolve_pre(as_premodel(m), g)

    def test_update_preserves_pseudo_validation(self):
        for m in model_list(3, ("1", "2"), ()):
            pre = as_premodel(m)
            for g in all_groups(m.agents):
                assert validate(resolve_pre(pre, g)) == []


class TestAsPremodel:
    def test_group_entry_is_the_core(self, FIG1):
        pre = as_premodel(FIG1)
        assert blocks(pre.group_relations[grp("1,2")]) == [["s"], ["t", "v"], ["u"], ["w"]]

    def test_is_pseudo_for_enumerated_models(self):
        for m in model_list(3, ("1", "2"), ()):
            assert validate(as_premodel(m)) == []

    def test_singleton_entries_match_agent_relations(self, FIG1):
        pre = as_premodel(FIG1)
        for a in FIG1.agents:
            assert pre.group_relations[frozenset([a])] == FIG1.relations[a]


class TestIteratedRelation:
    def test_fig1_single_step(self, FIG1):
        part = iterated_relation(FIG1, [grp("1,2")], "1")
        assert blocks(part) == [["s"], ["t", "v"], ["u"], ["w"]]

    def test_empty_sequence(self, FIG1):
        assert iterated_relation(FIG1, [], "2") == FIG1.relations["2"]
        assert iterated_relation(FIG1, [], grp("1,2")) == group_relation(FIG1, grp("1,2"))

    def test_matches_sequential_update_for_group_target(self):
        seq = [grp("1,2"), grp("1,3")]
        for m in model_list(3, ("1", "2", "3"), ())[:400]:
            pre = as_premodel(m)
            for g in seq:
                pre = resolve_pre(pre, g)
            assert iterated_relation(m, seq, grp("2")) == pre.group_relations[grp("2")]


def triple_update_case(m, sequence, agent):
    """Per-agent closed form of a triple update, via the index function."""
    return group_relation(m, delta(frozenset([agent]), sequence))


def test_triple_update_case_analysis():
    # all triples of groups over three agents against three actual resolves
    groups = all_groups(["1", "2", "3"])
    for m in model_list(2, ("1", "2", "3"), ()):
        for g1 in groups:
            m1 = resolve(m, g1)
            for g2 in groups:
                m2 = resolve(m1, g2)
                for g3 in groups:
                    m3 = resolve(m2, g3)
                    for agent in m.agents:
                        assert m3.relations[agent] == triple_update_case(m, [g1, g2, g3], agent)


def test_triple_update_couples_through_later_groups():
    # agent 1 sits out G2={2,3} but G3={1,3} drags G2's refinement in:
    # the result intersects all three relations, not just those of 1 and 3
    m = Model.make(
        states=["a", "b"],
        relations={"1": [["a", "b"]], "2": [["a"], ["b"]], "3": [["a", "b"]]},
    )
    out = resolve(resolve(resolve(m, grp("1")), grp("2,3")), grp("1,3"))
    assert out.relations["1"] == group_relation(m, grp("1,2,3"))
    assert delta(grp("1"), [grp("1"), grp("2,3"), grp("1,3")]) == grp("1,2,3")


class TestRestrict:
    def test_blockwise_restriction(self, FIG1):
        sub = restrict(FIG1, {"t", "v"})
        assert sub.states == {"t", "v"}
        assert blocks(sub.relations["1"]) == [["t", "v"]]
        assert blocks(sub.relations["2"]) == [["t", "v"]]
        assert sub.valuation["p"] == {"t", "v"}

    def test_full_restriction_is_identity(self, FIG1):
        assert restrict(FIG1, FIG1.states) == FIG1

    def test_single_state(self, FIG1):
        sub = restrict(FIG1, {"s"})
        assert blocks(sub.relations["1"]) == [["s"]]
        assert sub.valuation["p"] == frozenset()

    def test_empty_keep_rejected(self, FIG1):
        with pytest.raises(ValueError, match="empty"):
            restrict(FIG1, set())


class TestJson:
    def test_round_trip(self, FIG1, tmp_path):
        path = tmp_path / "m.json"
        save_model(FIG1, path)
        assert load_model(path) == FIG1

    def test_round_trip_premodel(self, FIG1, tmp_path):
        pre = as_premodel(FIG1)
        path = tmp_path / "pre.json"
        save_model(pre, path)
        again = load_model(path)
        assert isinstance(again, PreModel)
        assert again == pre

    def test_singleton_blocks_may_be_omitted(self):
        data = {
            "agents": ["1", "2"],
            "props": ["p"],
            "states": ["s", "t", "u", "v", "w"],
            "relations": {"1": [["s", "t", "v", "w"]], "2": [["t", "u", "v"]]},
            "valuation": {"p": ["t", "v", "w"]},
        }
        m = model_from_dict(data)
        assert m.relations["1"].block_of("u") == frozenset(["u"])
        assert m.relations["2"].block_of("s") == frozenset(["s"])

    def test_group_relations_marker_makes_premodel(self, FIG1):
        data = model_to_dict(as_premodel(FIG1))
        assert isinstance(model_from_dict(data), PreModel)

    def test_missing_group_rejected(self, FIG1):
        data = model_to_dict(as_premodel(FIG1))
        del data["group_relations"]["1,2"]
        with pytest.raises(ValueError, match="group 1,2: missing relation"):
            model_from_dict(data)

    def test_undeclared_valuation_atom_rejected(self):
        data = {
            "agents": ["1"], "props": [], "states": ["s"],
            "relations": {"1": []}, "valuation": {"q": ["s"]},
        }
        with pytest.raises(ValueError, match="undeclared atom 'q'"):
            model_from_dict(data)

    def test_missing_field_named(self):
        with pytest.raises(ValueError, match="missing the 'states' field"):
            model_from_dict({"agents": ["1"], "relations": {}})

    def test_not_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("not json", encoding="utf-8")
        with pytest.raises(ValueError, match="not valid JSON"):
            load_model(path)

    def test_bundled_files_match_fixtures(self, FIG1, CORE):
        from epiresolve.fixtures import fixture_path

        assert load_model(fixture_path("fig1.json")) == FIG1
        assert load_model(fixture_path("core.json")) == CORE
