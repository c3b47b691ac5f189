"""Instance file round-trips, schema strictness, gzip support."""

from fractions import Fraction

import pytest

from diverse_match import (
    FairGroup,
    FairInstance,
    FairPlatform,
    LbGroup,
    LbInstance,
    LbPlatform,
)
from diverse_match.acceptance import random_fair_instance, random_lb_instance, worked_example
from diverse_match.generators import gen_tree
from diverse_match.jsonio import SchemaError, load_instance, load_solution, save_instance, save_lb_solution


@pytest.mark.parametrize("suffix", [".json", ".json.gz"])
def test_lb_round_trip(tmp_path, suffix):
    inst = random_lb_instance(3)
    path = tmp_path / f"inst{suffix}"
    save_instance(path, inst)
    assert load_instance(path) == inst


@pytest.mark.parametrize("suffix", [".json", ".json.gz"])
def test_fair_round_trip(tmp_path, suffix):
    inst = random_fair_instance(5)
    path = tmp_path / f"inst{suffix}"
    save_instance(path, inst)
    assert load_instance(path) == inst


def test_tree_round_trip(tmp_path):
    for inst in (worked_example(), gen_tree(9, 2, seed=4)):
        path = tmp_path / "tree.json"
        save_instance(path, inst)
        assert load_instance(path) == inst


def test_alpha_beta_survive_exactly(tmp_path):
    g = FairGroup({0}, Fraction(1, 3), Fraction(123456, 1000003))
    inst = FairInstance(1, (FairPlatform({0}, 1, 1, (g,)),))
    path = tmp_path / "f.json"
    save_instance(path, inst)
    loaded = load_instance(path)
    assert loaded.platforms[0].groups[0].alpha == Fraction(1, 3)
    assert loaded.platforms[0].groups[0].beta == Fraction(123456, 1000003)


def test_unknown_field_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        '{"problem": "lb", "items": 1, "platforms": [], "comment": "nope"}'
    )
    with pytest.raises(SchemaError, match="unknown fields"):
        load_instance(path)


def test_missing_field_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"problem": "tree", "k": 1, "nodes": []}')
    with pytest.raises(SchemaError, match="missing fields"):
        load_instance(path)


def test_unknown_problem_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"problem": "matching"}')
    with pytest.raises(SchemaError, match="unknown problem"):
        load_instance(path)


def test_tree_needs_exactly_one_root(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        '{"problem": "tree", "k": 1, "budget": [1], "total": 1,'
        ' "nodes": [{"parent": null, "l": [0], "lb": 0, "reward": 0},'
        ' {"parent": null, "l": [0], "lb": 0, "reward": 0}]}'
    )
    with pytest.raises(SchemaError, match="exactly one root"):
        load_instance(path)


def test_bad_fraction_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(
        '{"problem": "fair", "items": 1, "platforms": [{"neighbors": [0],'
        ' "lb": 1, "ub": 1, "groups": [{"members": [0], "alpha": [1, 0],'
        ' "beta": [1, 1]}]}]}'
    )
    with pytest.raises(SchemaError, match="denominator"):
        load_instance(path)


def test_solution_round_trip(tmp_path):
    from diverse_match import Assignment

    path = tmp_path / "sol.json"
    a = Assignment((0, None, 0))
    save_lb_solution(path, a, {0})
    doc = load_solution(path)
    assert doc["problem"] == "lb"
    assert doc["assignment"] == a
    assert doc["satisfied"] == [0]


def test_save_is_deterministic(tmp_path):
    inst = random_lb_instance(12)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_instance(p1, inst)
    save_instance(p2, inst)
    assert p1.read_bytes() == p2.read_bytes()
