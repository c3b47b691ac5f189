"""Hierarchical platform-opening pipeline.

The solve is a chain of value-preserving reductions followed by a dynamic
program over the vector budget lattice:

1. :func:`reduce_base_to_intermediate` - prepend a zero-cost virtual root and
   rewrite every node's bounds against its parent's, so that choosing a
   sibling-closed subtree of the rewritten tree costs exactly what satisfying
   the subtree's leaves costs in the original instance (the sums telescope).
2. :func:`reduce_intermediate_to_steiner` - push each node's rewritten bounds
   and rewards onto its parent, turning sibling-closure into plain subtree
   connectivity: picking a node now means paying for all its children.
3. :func:`binarize` - standard gadget expansion to maximum degree 2 with
   zero-cost filler nodes.
4. :func:`dp_solve` - bottom-up table per node over the budget lattice.
5. :func:`extract_solution` - map the chosen subtree back to the satisfied
   frontier and emit per-group allocations.

The overall lower bound of a node is folded in as one extra cost coordinate
carrying the node's total minimal consumption max(lb, sum of group bounds),
bounded by min(total item supply, sum of group budgets). That single
coordinate enforces both the grand-total constraint and the fact that
overall top-ups consume group budget slack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (
    LimitError,
    TreeInstance,
    TreeSolution,
    validate_tree_instance,
)

DEFAULT_CELL_LIMIT = 100_000_000


@dataclass(frozen=True)
class IntermediateTree:
    """Rewritten bounds over the augmented coordinate space.

    Node ids 0..N-1 are the original nodes; id N is the virtual root.
    """

    parents: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    bounds: tuple[tuple[int, ...], ...]
    rewards: tuple[int, ...]
    budget: tuple[int, ...]
    root: int


@dataclass(frozen=True)
class SteinerInstance:
    """Budgeted rooted Steiner tree on a tree: pick a connected subtree
    containing the root whose cost vectors sum within the budget, maximizing
    the summed rewards."""

    parents: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    costs: tuple[tuple[int, ...], ...]
    rewards: tuple[int, ...]
    budget: tuple[int, ...]
    root: int


def _augmented_vec(node) -> tuple[int, ...]:
    return tuple(node.group_lbs) + (node.demand,)


def reduce_base_to_intermediate(inst: TreeInstance) -> IntermediateTree:
    """Prepend the virtual root and split every parent's bounds among its
    children (greedily in child order, per coordinate). Each node is rewritten
    exactly once, against its original parent's original bounds."""
    violations = validate_tree_instance(inst)
    if violations:
        raise ValueError("invalid tree instance: " + "; ".join(violations))
    n = len(inst.nodes)
    vroot = n
    dims = inst.group_count + 1
    parents: list[int | None] = [nd.parent for nd in inst.nodes] + [None]
    parents[inst.root] = vroot
    children: list[tuple[int, ...]] = [nd.children for nd in inst.nodes] + [(inst.root,)]

    bounds: list[tuple[int, ...] | None] = [None] * (n + 1)
    rewards: list[int | None] = [None] * (n + 1)
    bounds[vroot] = (0,) * dims
    rewards[vroot] = 0
    order = [vroot]
    for j in order:
        order.extend(children[j])
    for j in order:
        kids = children[j]
        if not kids:
            continue
        parent_vec = (0,) * dims if j == vroot else _augmented_vec(inst.nodes[j])
        parent_reward = 0 if j == vroot else inst.nodes[j].reward
        kid_vecs = [list(_augmented_vec(inst.nodes[c])) for c in kids]
        for c in range(dims):
            remaining = parent_vec[c]
            for kv in kid_vecs:
                share = min(kv[c], remaining)
                kv[c] -= share
                remaining -= share
            if remaining:  # ruled out by the monotonicity validation
                raise RuntimeError(f"internal: could not split bounds below node {j}")
        remaining = parent_reward
        new_rewards = []
        for c in kids:
            share = min(inst.nodes[c].reward, remaining)
            new_rewards.append(inst.nodes[c].reward - share)
            remaining -= share
        if remaining:
            raise RuntimeError(f"internal: could not split rewards below node {j}")
        for c, kv, nr in zip(kids, kid_vecs, new_rewards):
            bounds[c] = tuple(kv)
            rewards[c] = nr

    budget = inst.budget + (min(inst.total_items, sum(inst.budget)),)
    return IntermediateTree(
        parents=tuple(parents),
        children=tuple(children),
        bounds=tuple(bounds),  # type: ignore[arg-type]
        rewards=tuple(rewards),  # type: ignore[arg-type]
        budget=budget,
        root=vroot,
    )


def reduce_intermediate_to_steiner(it: IntermediateTree) -> SteinerInstance:
    """Each node's cost and reward become the sums over its children's
    rewritten values; leaves end up at zero."""
    dims = len(it.budget)
    costs = []
    rewards = []
    for j in range(len(it.parents)):
        kids = it.children[j]
        costs.append(tuple(sum(it.bounds[c][d] for c in kids) for d in range(dims)))
        rewards.append(sum(it.rewards[c] for c in kids))
    return SteinerInstance(
        parents=it.parents,
        children=it.children,
        costs=tuple(costs),
        rewards=tuple(rewards),
        budget=it.budget,
        root=it.root,
    )


def binarize(s: SteinerInstance) -> tuple[SteinerInstance, tuple[int | None, ...]]:
    """Expand nodes with more than two children into balanced gadgets of
    zero-cost, zero-reward fillers. Original node ids are preserved; the
    returned back map sends gadget fillers to None."""
    dims = len(s.budget)
    zero = (0,) * dims
    parents: list[int | None] = list(s.parents)
    children: list[list[int]] = [[] for _ in s.parents]
    costs = list(s.costs)
    rewards = list(s.rewards)
    back: list[int | None] = list(range(len(s.parents)))

    def attach(parent: int, kids: tuple[int, ...]) -> None:
        if len(kids) <= 2:
            for c in kids:
                children[parent].append(c)
                parents[c] = parent
            return
        half = (len(kids) + 1) // 2
        for part in (kids[:half], kids[half:]):
            if len(part) == 1:
                children[parent].append(part[0])
                parents[part[0]] = parent
            else:
                filler = len(parents)
                parents.append(parent)
                children.append([])
                costs.append(zero)
                rewards.append(0)
                back.append(None)
                children[parent].append(filler)
                attach(filler, part)

    for j, kids in enumerate(s.children):
        attach(j, kids)
    return (
        SteinerInstance(
            parents=tuple(parents),
            children=tuple(tuple(c) for c in children),
            costs=tuple(costs),
            rewards=tuple(rewards),
            budget=s.budget,
            root=s.root,
        ),
        tuple(back),
    )


# ---------------------------------------------------------------------------
# Dynamic program
# ---------------------------------------------------------------------------


def _lattice_shape(budget: tuple[int, ...], cell_limit: int) -> tuple[int, ...]:
    shape = tuple(b + 1 for b in budget)
    cells = 1
    for s in shape:
        cells *= s
    if cells > cell_limit:
        raise LimitError(
            f"budget lattice has {cells} cells, exceeding the limit {cell_limit}"
        )
    return shape


def _jump_points(x: np.ndarray) -> list[tuple[tuple[int, ...], int]]:
    """Cells where the monotone table strictly exceeds all predecessors.

    Every cell's value is attained at some jump point below it, so a max-plus
    convolution only needs these.
    """
    strict = np.ones(x.shape, dtype=bool)
    for ax in range(x.ndim):
        shifted = np.full_like(x, -1)
        src = [slice(None)] * x.ndim
        dst = [slice(None)] * x.ndim
        src[ax] = slice(0, -1)
        dst[ax] = slice(1, None)
        shifted[tuple(dst)] = x[tuple(src)]
        strict &= x > shifted
    return [(tuple(int(v) for v in p), int(x[tuple(p)])) for p in np.argwhere(strict)]


def _maxplus(xa: np.ndarray, xb: np.ndarray) -> np.ndarray:
    """out[c] = max over c' <= c of xa[c'] + xb[c - c'] (both tables >= 0)."""
    out = np.full(xa.shape, -1, dtype=np.int64)
    for point, value in _jump_points(xa):
        dst = tuple(slice(p, None) for p in point)
        src = tuple(slice(0, s - p) for s, p in zip(xa.shape, point))
        np.maximum(out[dst], xb[src] + value, out=out[dst])
    return out


def _node_table(cost: tuple[int, ...], reward: int, conv: np.ndarray | None, shape) -> np.ndarray:
    x = np.zeros(shape, dtype=np.int64)
    if any(c >= s for c, s in zip(cost, shape)):
        return x  # never affordable
    dst = tuple(slice(c, None) for c in cost)
    src = tuple(slice(0, s - c) for s, c in zip(shape, cost))
    x[dst] = reward if conv is None else reward + conv[src]
    return x


def _post_order(s: SteinerInstance) -> list[int]:
    order: list[int] = []
    stack: list[tuple[int, bool]] = [(s.root, False)]
    while stack:
        j, expanded = stack.pop()
        if expanded:
            order.append(j)
        else:
            stack.append((j, True))
            for c in s.children[j]:
                stack.append((c, False))
    return order


def _tables(s: SteinerInstance, shape) -> dict[int, np.ndarray]:
    tables: dict[int, np.ndarray] = {}
    for j in _post_order(s):
        kids = s.children[j]
        if not kids:
            conv = None
        elif len(kids) == 1:
            conv = tables[kids[0]]
        else:
            conv = tables[kids[0]]
            for c in kids[1:]:
                conv = _maxplus(conv, tables[c])
        tables[j] = _node_table(s.costs[j], s.rewards[j], conv, shape)
    return tables


def dp_value(s: SteinerInstance, cell_limit: int = DEFAULT_CELL_LIMIT) -> int:
    """Optimal reward only; handles any degree by folding children pairwise."""
    shape = _lattice_shape(s.budget, cell_limit)
    tables = _tables(s, shape)
    return int(tables[s.root][tuple(b for b in s.budget)])


def _best_split(
    xa: np.ndarray, xb: np.ndarray, rem: tuple[int, ...]
) -> tuple[tuple[int, ...], int]:
    """argmax over c' <= rem of xa[c'] + xb[rem - c'].

    Ties keep the last candidate in ascending lattice order, i.e. the first
    child receives the lexicographically largest share. That pushes budget
    into earlier subtrees, opening nodes deeper in the hierarchy on ties.
    """
    best_val = -1
    best_point: tuple[int, ...] = ()
    for point in np.ndindex(tuple(r + 1 for r in rem)):
        value = int(xa[point]) + int(xb[tuple(r - p for r, p in zip(rem, point))])
        if value >= best_val:
            best_val = value
            best_point = point
    return best_point, best_val


def dp_solve(
    s: SteinerInstance, cell_limit: int = DEFAULT_CELL_LIMIT
) -> tuple[int, frozenset[int]]:
    """Optimal reward and the chosen subtree (node ids of ``s``).

    Requires maximum degree 2 (run :func:`binarize` first). The chosen
    subtree is empty when even the root is unaffordable or nothing has
    positive reward; a child subtree is entered only when it contributes
    strictly positive reward.
    """
    if any(len(k) > 2 for k in s.children):
        raise ValueError("dp_solve requires a binarized instance")
    shape = _lattice_shape(s.budget, cell_limit)
    tables = _tables(s, shape)
    budget_cell = tuple(int(b) for b in s.budget)
    value = int(tables[s.root][budget_cell])
    if value <= 0:
        return value, frozenset()

    chosen: set[int] = set()
    stack: list[tuple[int, tuple[int, ...]]] = [(s.root, budget_cell)]
    while stack:
        j, cell = stack.pop()
        chosen.add(j)
        rem = tuple(c - k for c, k in zip(cell, s.costs[j]))
        kids = s.children[j]
        if not kids:
            continue
        if len(kids) == 1:
            if tables[kids[0]][rem] > 0:
                stack.append((kids[0], rem))
            continue
        a, b = kids
        point, best = _best_split(tables[a], tables[b], rem)
        assert best == int(tables[j][cell]) - s.rewards[j], "split does not recover table value"
        if tables[a][point] > 0:
            stack.append((a, point))
        rest = tuple(r - p for r, p in zip(rem, point))
        if tables[b][rest] > 0:
            stack.append((b, rest))
    return value, frozenset(chosen)


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------


def extract_solution(inst: TreeInstance, chosen: frozenset[int]) -> TreeSolution:
    """Map a chosen subtree (original ids plus the virtual root id N) back to
    the satisfied frontier and allocate items greedily.

    The frontier consists of the nodes whose parent was paid for but who were
    not paid for themselves: children of chosen nodes that are not chosen.
    Every satisfied node receives its group bounds plus a top-up to its
    overall bound, charged to groups with remaining budget in ascending order.
    Infeasibility here would mean a reduction bug, so it raises RuntimeError.
    """
    n = len(inst.nodes)
    vroot = n
    children_aug = [nd.children for nd in inst.nodes] + [(inst.root,)]
    reached = {vroot}
    for j in chosen:
        reached.update(children_aug[j])
    frontier = reached - set(chosen)
    if frontier == {vroot}:
        return TreeSolution(frozenset(), (), 0)
    if vroot in frontier:
        raise RuntimeError("internal: virtual root in a nonempty frontier")

    cover = sorted(frontier)
    k = inst.group_count
    # reserve every node's group bounds first; top-ups then fill leftover slack
    counts = {j: list(inst.nodes[j].group_lbs) for j in cover}
    used = [sum(counts[j][gi] for j in cover) for gi in range(k)]
    grand = sum(sum(c) for c in counts.values())
    for j in cover:
        nd = inst.nodes[j]
        need = max(0, nd.lb - sum(nd.group_lbs))
        for gi in range(k):
            if need == 0:
                break
            room = inst.budget[gi] - used[gi]
            if room > 0:
                take = min(room, need)
                counts[j][gi] += take
                used[gi] += take
                grand += take
                need -= take
        if need:
            raise RuntimeError(f"internal: cannot top up node {j} within group budgets")
    allocation = [(j, tuple(counts[j])) for j in cover]
    if any(u > b for u, b in zip(used, inst.budget)) or grand > inst.total_items:
        raise RuntimeError("internal: extracted allocation exceeds the budget")
    reward = sum(inst.nodes[j].reward for j in cover)
    sol = TreeSolution(frozenset(cover), tuple(allocation), reward)
    return sol


def solve_tree(inst: TreeInstance, cell_limit: int = DEFAULT_CELL_LIMIT) -> TreeSolution:
    """Full pipeline: reduce, binarize, solve the DP, extract the frontier."""
    it = reduce_base_to_intermediate(inst)
    st = reduce_intermediate_to_steiner(it)
    bt, back = binarize(st)
    value, chosen_bin = dp_solve(bt, cell_limit)
    chosen = frozenset(back[j] for j in chosen_bin if back[j] is not None)
    sol = extract_solution(inst, chosen)
    if sol.total_reward != value:
        raise RuntimeError(
            f"internal: extracted reward {sol.total_reward} != table value {value}"
        )
    return sol
