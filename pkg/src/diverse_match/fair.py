"""Solvers for proportional-fairness matching.

Two algorithms:

* :func:`solve_fair_naive` satisfies the proportional windows exactly, one
  set per platform, by scanning candidate sizes from lb upward.
* :func:`solve_fair` matches each platform a union of disjoint *blocks* of
  size exactly lb. Each block keeps every group count inside an additively
  widened window (plus/minus 3 around the proportional target), so the union
  of t' blocks violates each window by at most 3/lb of the matched total.
  At most floor(ub / lb) blocks are built per platform, which keeps the
  matched size inside [lb, ub] whenever it is nonzero.

Groups must partition each platform's neighborhood (see the instance
validator); the block construction's feasibility test is exact only then.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    Assignment,
    FairInstance,
    FairPlatform,
    canonical_order,
)


@dataclass(frozen=True)
class BlockSpec:
    """Per-group count windows for one block of size exactly ``size``.

    lo_i = max(0, ceil(alpha_i * size - 3)), hi_i = floor(beta_i * size + 3),
    computed in exact rational arithmetic before rounding.
    """

    platform: int
    size: int
    windows: tuple[tuple[int, int], ...]


def block_spec(platform_id: int, p: FairPlatform) -> BlockSpec:
    windows = []
    for g in p.groups:
        lo = max(0, math.ceil(g.alpha * p.lb - 3))
        hi = math.floor(g.beta * p.lb + 3)
        windows.append((lo, hi))
    return BlockSpec(platform=platform_id, size=p.lb, windows=tuple(windows))


def construct_block(
    p: FairPlatform, free: set[int] | frozenset[int], spec: BlockSpec
) -> frozenset[int] | None:
    """One block of size exactly spec.size with group counts in the windows.

    Fills every group to its window floor in declaration order, then tops up
    across groups in ascending item id while respecting the window ceilings.
    For disjoint groups this succeeds if and only if some such block exists:
    sum(lo) <= size <= sum(min(hi, available)) with every lo available.
    """
    chosen: set[int] = set()
    counts = [0] * len(p.groups)
    avail = [sorted(g.members & free) for g in p.groups]
    for gi, g in enumerate(p.groups):
        lo, _ = spec.windows[gi]
        if lo > len(avail[gi]):
            return None
        chosen.update(avail[gi][:lo])
        counts[gi] = lo
    if len(chosen) > spec.size:
        return None
    if len(chosen) < spec.size:
        rest = []
        for gi in range(len(p.groups)):
            rest.extend((i, gi) for i in avail[gi][counts[gi] :])
        rest.sort()
        for i, gi in rest:
            if len(chosen) == spec.size:
                break
            if counts[gi] < spec.windows[gi][1]:
                chosen.add(i)
                counts[gi] += 1
        if len(chosen) < spec.size:
            return None
    return frozenset(chosen)


def _check_order(inst: FairInstance, order) -> tuple[int, ...]:
    order = tuple(order)
    m = len(inst.platforms)
    if sorted(order) != list(range(m)):
        raise ValueError(f"order must be a permutation of 0..{m - 1}")
    return order


def solve_fair(
    inst: FairInstance, order=None
) -> tuple[Assignment, int, tuple[int, ...]]:
    """Block algorithm. Returns (assignment, matched-to-satisfied, block counts).

    A platform counts as satisfied when it received at least one block; its
    matched set then has size in [lb, ub], is a multiple of lb, and meets the
    additively relaxed windows.
    """
    order = canonical_order(inst) if order is None else _check_order(inst, order)
    free = set(range(inst.item_count))
    assign: list[int | None] = [None] * inst.item_count
    blocks = [0] * len(inst.platforms)
    for j in order:
        p = inst.platforms[j]
        spec = block_spec(j, p)
        cap = p.ub // p.lb
        while blocks[j] < cap:
            s = construct_block(p, free, spec)
            if s is None:
                break
            for i in s:
                assign[i] = j
                free.discard(i)
            blocks[j] += 1
    score = sum(blocks[j] * inst.platforms[j].lb for j in range(len(inst.platforms)))
    return Assignment(tuple(assign)), score, tuple(blocks)


def solve_fair_naive(inst: FairInstance, order=None) -> tuple[Assignment, int]:
    """Exact-window greedy: per platform, the first feasible size gets one set.

    For each candidate size s in lb..ub the group windows are
    [ceil(alpha*s), floor(beta*s)] clipped by availability; s is feasible when
    every window is nonempty and the window sums straddle s.
    """
    order = canonical_order(inst) if order is None else _check_order(inst, order)
    free = set(range(inst.item_count))
    assign: list[int | None] = [None] * inst.item_count
    score = 0
    for j in order:
        p = inst.platforms[j]
        avail = [sorted(g.members & free) for g in p.groups]
        for s in range(p.lb, p.ub + 1):
            lows = [math.ceil(g.alpha * s) for g in p.groups]
            highs = [min(math.floor(g.beta * s), len(a)) for g, a in zip(p.groups, avail)]
            if any(lo > hi for lo, hi in zip(lows, highs)):
                continue
            if not sum(lows) <= s <= sum(highs):
                continue
            counts = list(lows)
            remainder = s - sum(lows)
            for gi in range(len(p.groups)):
                if remainder == 0:
                    break
                extra = min(highs[gi] - counts[gi], remainder)
                counts[gi] += extra
                remainder -= extra
            for gi, c in enumerate(counts):
                for i in avail[gi][:c]:
                    assign[i] = j
                    free.discard(i)
            score += s
            break
    return Assignment(tuple(assign)), score


def relaxed_window_bounds(p: FairPlatform, group_index: int, matched: int) -> tuple[Fraction, Fraction]:
    """The additive relaxed window for a matched set of the given size."""
    g = p.groups[group_index]
    slack = Fraction(3, p.lb)
    return (g.alpha - slack) * matched, (g.beta + slack) * matched
