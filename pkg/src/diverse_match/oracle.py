"""Exhaustive small-instance solvers.

These are the ground truth for every approximation and equivalence claim in
the test suite and in sweep ratio columns. They refuse (raising
:class:`~diverse_match.model.LimitError`) rather than silently approximate
when an instance exceeds the configured search limits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .model import (
    Assignment,
    FairInstance,
    LbInstance,
    LbPlatform,
    LimitError,
    TreeInstance,
)


@dataclass(frozen=True)
class OracleLimits:
    max_items: int = 16
    max_candidates: int = 1_000_000
    max_tree_nodes: int = 20
    max_antichains: int = 1_000_000


DEFAULT_LIMITS = OracleLimits()


def _satisfies_lb(p: LbPlatform, chosen: tuple[int, ...]) -> bool:
    if len(chosen) < p.lb:
        return False
    cs = set(chosen)
    return all(len(cs & g.members) >= g.lb for g in p.groups)


def _mask(items) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def _minimal_satisfying_masks(p: LbPlatform) -> list[tuple[int, tuple[int, ...]]]:
    """Inclusion-minimal satisfying subsets of N(p), as (mask, items) pairs.

    Minimal sets never exceed max(lb, sum of group lbs) items: in a minimal
    set either the overall bound is tight or every item sits in some tight
    group, so enumeration stops at that size.
    """
    neigh = sorted(p.neighbors)
    out: list[tuple[int, tuple[int, ...]]] = []
    for size in range(0, p.demand + 1):
        for combo in itertools.combinations(neigh, size):
            if not _satisfies_lb(p, combo):
                continue
            m = _mask(combo)
            if any(prev & m == prev for prev, _ in out):
                continue  # a kept subset is contained in this one
            out.append((m, combo))
    return out


def _all_satisfying_masks(p: LbPlatform) -> list[tuple[int, tuple[int, ...]]]:
    """Every satisfying subset of N(p); only usable on tiny neighborhoods."""
    neigh = sorted(p.neighbors)
    out = []
    for size in range(0, len(neigh) + 1):
        for combo in itertools.combinations(neigh, size):
            if _satisfies_lb(p, combo):
                out.append((_mask(combo), combo))
    return out


def _search_lb(
    item_count: int,
    candidates: list[list[tuple[int, tuple[int, ...]]]],
) -> tuple[int, list[tuple[int, ...] | None]]:
    memo: dict[tuple[int, int], int] = {}

    def best(idx: int, free: int) -> int:
        if idx == len(candidates):
            return 0
        key = (idx, free)
        if key in memo:
            return memo[key]
        value = best(idx + 1, free)
        for m, _ in candidates[idx]:
            if m & free == m:
                value = max(value, 1 + best(idx + 1, free & ~m))
        memo[key] = value
        return value

    full = (1 << item_count) - 1
    opt = best(0, full)
    # walk the memo to recover one witness, preferring "skip" then id order
    picks: list[tuple[int, ...] | None] = []
    free = full
    for idx in range(len(candidates)):
        target = best(idx, free)
        if best(idx + 1, free) == target:
            picks.append(None)
            continue
        for m, items in candidates[idx]:
            if m & free == m and 1 + best(idx + 1, free & ~m) == target:
                picks.append(items)
                free &= ~m
                break
    return opt, picks


def exact_lb(
    inst: LbInstance, limits: OracleLimits = DEFAULT_LIMITS, minimal_only: bool = True
) -> tuple[int, Assignment]:
    """Exact maximum number of simultaneously satisfiable platforms + witness.

    ``minimal_only=False`` searches over all satisfying subsets instead of the
    inclusion-minimal ones; it exists to cross-check the reduction on tiny
    instances.
    """
    if inst.item_count > limits.max_items:
        raise LimitError(
            f"exact lb solver limited to {limits.max_items} items, "
            f"instance has {inst.item_count}"
        )
    enum = _minimal_satisfying_masks if minimal_only else _all_satisfying_masks
    candidates = []
    total = 0
    for p in inst.platforms:
        cand = enum(p)
        total += len(cand)
        if total > limits.max_candidates:
            raise LimitError(f"candidate sets exceed limit {limits.max_candidates}")
        candidates.append(cand)
    opt, picks = _search_lb(inst.item_count, candidates)
    assign: list[int | None] = [None] * inst.item_count
    for j, items in enumerate(picks):
        if items:
            for i in items:
                assign[i] = j
    return opt, Assignment(tuple(assign))


# ---------------------------------------------------------------------------
# Fairness
# ---------------------------------------------------------------------------


def _fair_candidates(p: FairPlatform, limit_counter: list[int], limit: int):
    """All strictly satisfying subsets of N(p), grouped generation.

    Enumerates (size, per-group counts) with exact windows, then all concrete
    member choices per count vector.
    """
    members = [sorted(g.members) for g in p.groups]
    out: list[tuple[int, int]] = []  # (mask, size)
    for s in range(p.lb, p.ub + 1):
        lows = [math.ceil(g.alpha * s) for g in p.groups]
        highs = [min(math.floor(g.beta * s), len(m)) for g, m in zip(p.groups, members)]
        if any(lo > hi for lo, hi in zip(lows, highs)):
            continue

        def vectors(gi: int, left: int):
            if gi == len(p.groups):
                if left == 0:
                    yield ()
                return
            tail_max = sum(highs[gi + 1 :])
            tail_min = sum(lows[gi + 1 :])
            for c in range(max(lows[gi], left - tail_max), min(highs[gi], left - tail_min) + 1):
                for rest in vectors(gi + 1, left - c):
                    yield (c,) + rest

        for vec in vectors(0, s):
            pools = [itertools.combinations(members[gi], c) for gi, c in enumerate(vec)]
            for pick in itertools.product(*pools):
                mask = 0
                for part in pick:
                    mask |= _mask(part)
                out.append((mask, s))
                limit_counter[0] += 1
                if limit_counter[0] > limit:
                    raise LimitError(f"candidate sets exceed limit {limit}")
    return out


def exact_fair(
    inst: FairInstance, limits: OracleLimits = DEFAULT_LIMITS
) -> tuple[int, Assignment]:
    """Exact optimum of items matched to strictly satisfied platforms."""
    if inst.item_count > limits.max_items:
        raise LimitError(
            f"exact fair solver limited to {limits.max_items} items, "
            f"instance has {inst.item_count}"
        )
    counter = [0]
    candidates = [_fair_candidates(p, counter, limits.max_candidates) for p in inst.platforms]

    memo: dict[tuple[int, int], int] = {}

    def best(idx: int, free: int) -> int:
        if idx == len(candidates):
            return 0
        key = (idx, free)
        if key in memo:
            return memo[key]
        value = best(idx + 1, free)
        for m, s in candidates[idx]:
            if m & free == m:
                value = max(value, s + best(idx + 1, free & ~m))
        memo[key] = value
        return value

    full = (1 << inst.item_count) - 1
    opt = best(0, full)
    assign: list[int | None] = [None] * inst.item_count
    free = full
    for idx in range(len(candidates)):
        target = best(idx, free)
        if best(idx + 1, free) == target:
            continue
        for m, s in candidates[idx]:
            if m & free == m and s + best(idx + 1, free & ~m) == target:
                for i in range(inst.item_count):
                    if m >> i & 1:
                        assign[i] = idx
                free &= ~m
                break
    return opt, Assignment(tuple(assign))


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------


def _antichain_covers(inst: TreeInstance, cap: int) -> list[frozenset[int]]:
    """All antichains meeting every root-leaf path exactly once."""

    def covers(j: int) -> list[frozenset[int]]:
        out = [frozenset([j])]
        kids = inst.nodes[j].children
        if kids:
            for combo in itertools.product(*(covers(c) for c in kids)):
                out.append(frozenset().union(*combo))
                if len(out) > cap:
                    raise LimitError(f"antichain count exceeds limit {cap}")
        return out

    return covers(inst.root)


def _frontier_feasible(inst: TreeInstance, frontier: frozenset[int]) -> bool:
    """Can the frontier be allocated within the group budgets and item total?

    Needs: per-group sums within budget, total consumption within the item
    supply, and enough aggregate group slack to host the overall top-ups.
    """
    k = inst.group_count
    group_need = [0] * k
    topup = 0
    for j in frontier:
        nd = inst.nodes[j]
        for c in range(k):
            group_need[c] += nd.group_lbs[c]
        topup += max(0, nd.lb - sum(nd.group_lbs))
    if any(g > b for g, b in zip(group_need, inst.budget)):
        return False
    if sum(group_need) + topup > inst.total_items:
        return False
    slack = sum(b - g for b, g in zip(inst.budget, group_need))
    return topup <= slack


def exact_tree(
    inst: TreeInstance, limits: OracleLimits = DEFAULT_LIMITS
) -> tuple[int, frozenset[int]]:
    """Exact maximum reward over budget-feasible frontiers, with a witness.

    Returns reward 0 with an empty frontier when nothing is affordable.
    """
    if len(inst.nodes) > limits.max_tree_nodes:
        raise LimitError(
            f"exact tree solver limited to {limits.max_tree_nodes} nodes, "
            f"instance has {len(inst.nodes)}"
        )
    best_reward = 0
    best: frozenset[int] = frozenset()
    for frontier in _antichain_covers(inst, limits.max_antichains):
        if not _frontier_feasible(inst, frontier):
            continue
        reward = sum(inst.nodes[j].reward for j in frontier)
        if reward > best_reward:
            best_reward, best = reward, frontier
    return best_reward, best
