"""Exact oracles: limits, witnesses, and the minimal-set reduction."""

import pytest

from diverse_match import (
    Assignment,
    LbGroup,
    LbInstance,
    LbPlatform,
    exact_fair,
    exact_lb,
    exact_tree,
    fair_score,
    gen_tree,
    satisfied_lb_platforms,
)
from diverse_match.acceptance import random_fair_instance, random_lb_instance
from diverse_match.model import LimitError
from diverse_match.oracle import OracleLimits


def test_exact_lb_zero_platforms():
    opt, witness = exact_lb(LbInstance(5, ()))
    assert opt == 0 and witness == Assignment.empty(5)


def test_exact_lb_refuses_large_instances():
    inst = LbInstance(17, (LbPlatform(set(range(17)), 1),))
    with pytest.raises(LimitError, match="items"):
        exact_lb(inst)


def test_exact_lb_candidate_limit():
    inst = LbInstance(16, (LbPlatform(set(range(16)), 3),))
    with pytest.raises(LimitError, match="candidate"):
        exact_lb(inst, OracleLimits(max_candidates=10))


def test_exact_lb_from_disjoint_triple_family():
    # platforms built over a 3-uniform edge family that contains a perfect
    # matching of size m: the optimum is exactly m
    m = 4
    items = 3 * m
    edges = [tuple(range(3 * i, 3 * i + 3)) for i in range(m)]
    # overlapping distractor edges reuse earlier vertices
    edges += [(0, 3, 6), (1, 4, 7), (2, 5, 8), (0, 4, 8)]
    platforms = tuple(LbPlatform(set(e), 3) for e in edges)
    inst = LbInstance(items, platforms)
    opt, witness = exact_lb(inst)
    assert opt == m
    assert len(satisfied_lb_platforms(inst, witness)) == m


def test_exact_lb_witness_passes_evaluator():
    for seed in range(150):
        inst = random_lb_instance(seed)
        opt, witness = exact_lb(inst)
        assert len(satisfied_lb_platforms(inst, witness)) == opt


def test_minimal_set_reduction_matches_full_search():
    # tiny instances: restricting the search to inclusion-minimal satisfying
    # sets does not change the optimum
    checked = 0
    for seed in range(400):
        inst = random_lb_instance(seed)
        if inst.item_count > 8:
            continue
        checked += 1
        opt_min, _ = exact_lb(inst, minimal_only=True)
        opt_full, _ = exact_lb(inst, minimal_only=False)
        assert opt_min == opt_full, seed
    assert checked >= 50


def test_exact_fair_simple():
    from fractions import Fraction

    from diverse_match import FairGroup, FairInstance, FairPlatform

    groups = (FairGroup({0, 1}, Fraction(0), Fraction(1)),)
    inst = FairInstance(2, (FairPlatform({0, 1}, 2, 2, groups),))
    opt, witness = exact_fair(inst)
    assert opt == 2
    assert fair_score(inst, witness, "strict") == (frozenset({0}), 2)


def test_exact_fair_infeasible_everywhere():
    from fractions import Fraction

    from diverse_match import FairGroup, FairInstance, FairPlatform

    # the only group demands everything and forbids anything: window empty
    groups = (
        FairGroup({0, 1}, Fraction(1, 2), Fraction(1, 2)),
        FairGroup({2}, Fraction(1, 2), Fraction(1, 2)),
    )
    inst = FairInstance(3, (FairPlatform({0, 1, 2}, 3, 3, groups),))
    opt, _ = exact_fair(inst)
    assert opt == 0


def test_exact_fair_witness_passes_evaluator():
    for seed in range(150):
        inst = random_fair_instance(seed)
        opt, witness = exact_fair(inst)
        _, matched = fair_score(inst, witness, "strict")
        assert matched == opt


def test_exact_fair_dominates_strict_part_of_block_solver():
    from diverse_match import solve_fair

    for seed in range(150):
        inst = random_fair_instance(seed)
        a, _, _ = solve_fair(inst)
        _, matched_strict = fair_score(inst, a, "strict")
        opt, _ = exact_fair(inst)
        assert opt >= matched_strict


def test_exact_tree_refuses_large():
    inst = gen_tree(21, 1, seed=0)
    with pytest.raises(LimitError, match="nodes"):
        exact_tree(inst)


def test_exact_tree_zero_budget_zero_bound_leaves():
    from diverse_match import tree_instance

    inst = tree_instance([None, 0, 0], [(0,), (0,), (0,)], [0, 0, 0], [2, 1, 3], (0,), 0)
    opt, witness = exact_tree(inst)
    assert opt == 4  # both leaves open at zero cost
    assert witness == {1, 2}


def test_oracles_deterministic():
    inst = random_lb_instance(9)
    assert exact_lb(inst) == exact_lb(inst)
    finst = random_fair_instance(9)
    assert exact_fair(finst) == exact_fair(finst)
    tinst = gen_tree(8, 2, seed=9)
    assert exact_tree(tinst) == exact_tree(tinst)
