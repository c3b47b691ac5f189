"""Tree pipeline: reductions, binarization, the DP, and extraction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diverse_match import (
    exact_tree,
    gen_tree,
    solve_tree,
    tree_instance,
    validate_tree_solution,
)
from diverse_match.acceptance import worked_example
from diverse_match.model import LimitError
from diverse_match.tree import (
    SteinerInstance,
    binarize,
    dp_solve,
    dp_value,
    extract_solution,
    reduce_base_to_intermediate,
    reduce_intermediate_to_steiner,
)


def _augmented(node):
    return tuple(node.group_lbs) + (max(node.lb, sum(node.group_lbs)),)


# ---------------------------------------------------------------------------
# base -> intermediate
# ---------------------------------------------------------------------------


def test_reduction_rejects_invalid_instance():
    bad = tree_instance([None, 0, 0], [(9,), (4,), (4,)], [9, 4, 4], [0, 1, 1], (9,), 9)
    with pytest.raises(ValueError, match="invalid tree instance"):
        reduce_base_to_intermediate(bad)


def test_intermediate_split_invariants_worked_example():
    inst = worked_example()
    it = reduce_base_to_intermediate(inst)
    n = len(inst.nodes)
    # virtual root is id n with zero bounds
    assert it.root == n
    assert it.bounds[n] == (0, 0) and it.rewards[n] == 0
    # old root keeps its full bounds (its parent contributes nothing)
    assert it.bounds[0] == _augmented(inst.nodes[0])
    # every family: shares are nonnegative, within the child's own bound,
    # and sum exactly to the parent's original bound, per coordinate
    for j, nd in enumerate(inst.nodes):
        if not nd.children:
            continue
        parent_vec = _augmented(nd)
        for c in range(len(parent_vec)):
            shares = [
                _augmented(inst.nodes[i])[c] - it.bounds[i][c] for i in nd.children
            ]
            assert all(s >= 0 for s in shares)
            assert all(
                it.bounds[i][c] >= 0 for i in nd.children
            )
            assert sum(shares) == parent_vec[c]
        reward_shares = [inst.nodes[i].reward - it.rewards[i] for i in nd.children]
        assert all(s >= 0 for s in reward_shares)
        assert sum(reward_shares) == nd.reward
    # the canonical greedy split pours the parent bound into earlier children:
    # node 1 absorbs all of the root's 6, leaving node 2 with 2
    assert it.bounds[1][0] == 0 and it.bounds[2][0] == 2
    assert it.bounds[3][0] == 0 and it.bounds[4][0] == 2


def test_intermediate_split_invariants_random():
    for seed in range(150):
        inst = gen_tree(1 + seed % 10, 1 + seed % 2, seed)
        it = reduce_base_to_intermediate(inst)
        for j, nd in enumerate(inst.nodes):
            if not nd.children:
                continue
            vec = _augmented(nd)
            for c in range(len(vec)):
                shares = [_augmented(inst.nodes[i])[c] - it.bounds[i][c] for i in nd.children]
                assert sum(shares) == vec[c] and min(shares) >= 0


def test_single_node_becomes_two_node_chain():
    inst = tree_instance([None], [(5,)], [5], [3], (9,), 9)
    it = reduce_base_to_intermediate(inst)
    assert it.children[1] == (0,)  # virtual root id 1 over the lone node
    assert it.bounds[0] == (5, 5)  # node keeps its bounds, nothing below
    assert it.rewards[0] == 3


# ---------------------------------------------------------------------------
# intermediate -> budgeted Steiner tree
# ---------------------------------------------------------------------------


def test_steiner_leaves_are_zeroed():
    inst = worked_example()
    st_inst = reduce_intermediate_to_steiner(reduce_base_to_intermediate(inst))
    for j, nd in enumerate(inst.nodes):
        if not nd.children:
            assert st_inst.costs[j] == (0, 0)
            assert st_inst.rewards[j] == 0


def test_steiner_chain_of_three():
    inst = tree_instance([None, 0, 1], [(2,), (2,), (2,)], [2, 2, 2], [1, 1, 1], (6,), 6)
    it = reduce_base_to_intermediate(inst)
    st_inst = reduce_intermediate_to_steiner(it)
    # each node's cost equals its single child's rewritten bound
    assert st_inst.costs[3] == it.bounds[0]
    assert st_inst.costs[0] == it.bounds[1]
    assert st_inst.costs[1] == it.bounds[2]
    assert st_inst.costs[2] == (0, 0)


def test_telescoping_chosen_cost_equals_frontier_bounds():
    # summed Steiner cost of the chosen subtree equals the summed original
    # (augmented) bounds over the satisfied frontier, coordinate-wise
    for seed in range(120):
        inst = gen_tree(1 + seed % 10, 1 + seed % 2, seed * 3 + 1)
        it = reduce_base_to_intermediate(inst)
        st_inst = reduce_intermediate_to_steiner(it)
        bt, back = binarize(st_inst)
        _, chosen_bin = dp_solve(bt)
        chosen = frozenset(back[j] for j in chosen_bin if back[j] is not None)
        sol = extract_solution(inst, chosen)
        dims = inst.group_count + 1
        cost = tuple(
            sum(st_inst.costs[j][c] for j in chosen) for c in range(dims)
        )
        frontier_cost = tuple(
            sum(_augmented(inst.nodes[j])[c] for j in sol.satisfied_nodes)
            for c in range(dims)
        )
        assert cost == frontier_cost


def test_worked_example_steiner_cost_is_ten():
    inst = worked_example()
    st_inst = reduce_intermediate_to_steiner(reduce_base_to_intermediate(inst))
    bt, back = binarize(st_inst)
    value, chosen_bin = dp_solve(bt)
    chosen = [back[j] for j in chosen_bin if back[j] is not None]
    assert sum(st_inst.costs[j][0] for j in chosen) == 10


# ---------------------------------------------------------------------------
# binarize
# ---------------------------------------------------------------------------


def _star(children: int) -> SteinerInstance:
    parents = (None,) + (0,) * children
    kids = (tuple(range(1, children + 1)),) + ((),) * children
    costs = ((0,),) + tuple((i,) for i in range(1, children + 1))
    rewards = (0,) + tuple(range(1, children + 1))
    return SteinerInstance(parents, kids, costs, rewards, (sum(range(children + 1)),), 0)


def test_binarize_two_children_unchanged():
    s = _star(2)
    b, back = binarize(s)
    assert b == s
    assert back == (0, 1, 2)


def test_binarize_four_children_gadget():
    s = _star(4)
    b, back = binarize(s)
    assert len(b.parents) == 5 + 2  # two zero-cost fillers
    assert all(len(k) <= 2 for k in b.children)
    assert back[:5] == (0, 1, 2, 3, 4) and back[5:] == (None, None)
    # original children are the gadget leaves: two hops below the root
    for c in (1, 2, 3, 4):
        assert b.parents[c] in (5, 6)
        assert b.parents[b.parents[c]] == 0
    assert dp_value(s) == dp_value(b)


def test_binarize_preserves_value_random():
    for seed in range(150):
        inst = gen_tree(1 + seed % 12, 1 + seed % 2, seed * 7 + 3)
        st_inst = reduce_intermediate_to_steiner(reduce_base_to_intermediate(inst))
        bt, _ = binarize(st_inst)
        assert dp_value(st_inst) == dp_value(bt), seed


# ---------------------------------------------------------------------------
# the DP itself
# ---------------------------------------------------------------------------


def test_dp_single_unaffordable_leaf():
    s = SteinerInstance((None,), ((),), ((2,),), (5,), (1,), 0)
    value, chosen = dp_solve(s)
    assert value == 0 and chosen == frozenset()


def test_dp_rejects_unbinarized():
    with pytest.raises(ValueError, match="binarized"):
        dp_solve(_star(3))


def test_dp_cell_limit():
    s = SteinerInstance((None,), ((),), ((0, 0),), (1,), (1000, 1000),  0)
    with pytest.raises(LimitError, match="lattice"):
        dp_solve(s, cell_limit=1000)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5000))
def test_dp_tables_monotone(seed):
    # the root table never decreases along any budget coordinate
    from diverse_match.tree import _lattice_shape, _tables

    inst = gen_tree(1 + seed % 8, 1 + seed % 2, seed)
    st_inst = reduce_intermediate_to_steiner(reduce_base_to_intermediate(inst))
    bt, _ = binarize(st_inst)
    shape = _lattice_shape(bt.budget, 10**8)
    table = _tables(bt, shape)[bt.root]
    for ax in range(table.ndim):
        assert (np.diff(table, axis=ax) >= 0).all()


# ---------------------------------------------------------------------------
# extraction and the full pipeline
# ---------------------------------------------------------------------------


def test_extract_root_only_is_empty_solution():
    inst = tree_instance([None], [(5,)], [5], [3], (1,), 1)  # unaffordable
    sol = solve_tree(inst)
    assert sol.satisfied_nodes == frozenset()
    assert sol.total_reward == 0 and sol.allocation == ()
    assert validate_tree_solution(inst, sol) == []


def test_worked_example_full_pipeline():
    inst = worked_example()
    sol = solve_tree(inst)
    assert sol.total_reward == 7
    assert sol.satisfied_nodes == {2, 3, 4}
    assert sum(sum(v) for _, v in sol.allocation) == 10 <= inst.total_items
    assert validate_tree_solution(inst, sol) == []


def test_overall_bound_above_group_sum_consumes_supply():
    # the leaves' group bounds fit the group budget easily, but their overall
    # top-ups blow the item supply; only the root cover is affordable, and a
    # group-budget-only solver would wrongly claim reward 4
    inst = tree_instance(
        parents=[None, 0, 0],
        group_lbs=[(2,), (1,), (1,)],
        lbs=[4, 2, 8],
        rewards=[3, 2, 2],
        budget=(10,),
        total_items=6,
    )
    sol = solve_tree(inst)
    opt, _ = exact_tree(inst)
    assert sol.total_reward == opt == 3
    assert sol.satisfied_nodes == {0}


def test_pipeline_matches_oracle_random():
    for seed in range(200):
        inst = gen_tree(1 + seed % 10, 1 + seed % 2, seed * 11 + 5)
        sol = solve_tree(inst)
        opt, witness = exact_tree(inst)
        assert sol.total_reward == opt, seed
        assert validate_tree_solution(inst, sol) == [], seed
        if witness:
            # the oracle witness is itself a valid cover
            reward = sum(inst.nodes[j].reward for j in witness)
            assert reward == opt
