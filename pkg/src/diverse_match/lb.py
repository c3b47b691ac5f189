"""Greedy solver for the lower-bound satisfaction problem.

Platforms are processed in a fixed order (or as an online arrival stream) and
each one greedily receives a satisfying set drawn from the free item pool:
groups are filled in declaration order, then the set is topped up to the
overall bound. A set built this way never exceeds max(lb, sum of group lbs)
items, which is what drives the competitive factor ``max_demand + 2``.

Three variants:

* ``base`` - items in ascending id order.
* ``min_degree`` - items in ascending remaining-degree order, where the
  remaining degree counts adjacent platforms not yet processed.
* ``augmenting`` - like ``base``, but when a platform cannot be satisfied
  from the free pool, items are pulled from already-satisfied platforms,
  either surplus items (removal keeps the donor satisfied) or via a swap
  with a free replacement. No previously satisfied platform is ever
  unsatisfied; on failure all moves are rolled back.

For disjoint groups the greedy set construction is complete: it finds a
satisfying set whenever one exists in the pool. With overlapping groups an
item counts toward every group containing it, which maximizes progress but is
only best-effort; the construction may miss a feasible set there.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    Assignment,
    LbInstance,
    LbPlatform,
    canonical_order,
)

VARIANTS = ("base", "min_degree", "augmenting")


@dataclass(frozen=True)
class LbStrategy:
    """Solver variant plus a seed recorded for reproducibility.

    Every tie in this solver is broken by a total order (ascending item id),
    so the seed does not influence the output; it is carried so result files
    can record the full configuration.
    """

    variant: str = "base"
    rng_seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")


@dataclass(frozen=True)
class OnlineState:
    """Solver state between platform arrivals."""

    free_items: frozenset[int]
    assignment: Assignment
    satisfied: frozenset[int]
    processed: frozenset[int]


class _Run:
    """Mutable working state shared by the offline loop and the online step."""

    def __init__(self, inst: LbInstance, state: OnlineState | None = None):
        self.inst = inst
        if state is None:
            self.free = set(range(inst.item_count))
            self.assign: list[int | None] = [None] * inst.item_count
            self.satisfied: set[int] = set()
            self.processed: set[int] = set()
        else:
            self.free = set(state.free_items)
            self.assign = list(state.assignment.item_to_platform)
            self.satisfied = set(state.satisfied)
            self.processed = set(state.processed)
        self.msets: list[set[int]] = [set() for _ in inst.platforms]
        for i, j in enumerate(self.assign):
            if j is not None:
                self.msets[j].add(i)

    def remaining_degree(self) -> list[int]:
        deg = [0] * self.inst.item_count
        for j, p in enumerate(self.inst.platforms):
            if j in self.processed:
                continue
            for i in p.neighbors:
                deg[i] += 1
        return deg

    def to_state(self) -> OnlineState:
        return OnlineState(
            free_items=frozenset(self.free),
            assignment=Assignment(tuple(self.assign)),
            satisfied=frozenset(self.satisfied),
            processed=frozenset(self.processed),
        )


def construct_satisfying_set(
    platform: LbPlatform,
    free: set[int] | frozenset[int],
    strategy: LbStrategy = LbStrategy(),
    remaining_degree: list[int] | None = None,
) -> frozenset[int] | None:
    """Greedily build S from the free pool, or return None.

    Groups are filled in declaration order; an item already picked counts
    toward every group containing it. Afterwards S is topped up with free
    neighbors until it reaches the overall bound. The result always satisfies
    lb <= |S| <= max(lb, sum of group lbs).
    """
    if strategy.variant == "min_degree" and remaining_degree is not None:
        key = lambda i: (remaining_degree[i], i)  # noqa: E731
    else:
        key = lambda i: i  # noqa: E731

    chosen: set[int] = set()
    for g in platform.groups:
        need = g.lb - len(chosen & g.members)
        if need <= 0:
            continue
        candidates = sorted((g.members & free) - chosen, key=key)
        if len(candidates) < need:
            return None
        chosen.update(candidates[:need])
    if len(chosen) < platform.lb:
        extra = sorted((platform.neighbors & free) - chosen, key=key)
        need = platform.lb - len(chosen)
        if len(extra) < need:
            return None
        chosen.update(extra[:need])
    return frozenset(chosen)


def _removal_keeps_satisfied(p: LbPlatform, mset: set[int], item: int) -> bool:
    if len(mset) - 1 < p.lb:
        return False
    for g in p.groups:
        if item in g.members and len(mset & g.members) - 1 < g.lb:
            return False
    return True


def _swap_keeps_satisfied(p: LbPlatform, mset: set[int], out_item: int, in_item: int) -> bool:
    m = (mset - {out_item}) | {in_item}
    if len(m) < p.lb:
        return False
    return all(len(m & g.members) >= g.lb for g in p.groups)


def _augmented_construct(run: _Run, j: int, strategy: LbStrategy) -> frozenset[int] | None:
    """Retry construction while freeing donor items from satisfied platforms.

    Donors are released one at a time in ascending id order: surplus items
    directly, otherwise via a swap with the smallest free replacement that
    keeps the donor platform satisfied. Unused releases are undone after
    success; everything is undone on failure.
    """
    inst, platform = run.inst, run.inst.platforms[j]
    undo: list[tuple[int, int, int | None]] = []  # (item, donor platform, swap-in or None)
    released: set[int] = set()  # never reused as swap-ins, so undo stays sound

    donors = sorted(i for i in platform.neighbors if run.assign[i] is not None)
    for a in donors:
        q = run.assign[a]
        mq = run.msets[q]
        if _removal_keeps_satisfied(inst.platforms[q], mq, a):
            run.assign[a] = None
            mq.discard(a)
            run.free.add(a)
            released.add(a)
            undo.append((a, q, None))
        else:
            swap_in = None
            for b in sorted((run.free - released) & inst.platforms[q].neighbors):
                if _swap_keeps_satisfied(inst.platforms[q], mq, a, b):
                    swap_in = b
                    break
            if swap_in is None:
                continue
            run.free.discard(swap_in)
            run.assign[swap_in] = q
            mq.add(swap_in)
            run.assign[a] = None
            mq.discard(a)
            run.free.add(a)
            released.add(a)
            undo.append((a, q, swap_in))
        s = construct_satisfying_set(platform, run.free, strategy)
        if s is not None:
            for a2, q2, b2 in reversed(undo):
                if a2 in s:
                    continue
                # unused release: give the donor back (supersets stay satisfied)
                run.free.discard(a2)
                run.assign[a2] = q2
                run.msets[q2].add(a2)
                if b2 is not None:
                    run.assign[b2] = None
                    run.msets[q2].discard(b2)
                    run.free.add(b2)
            return s
    for a2, q2, b2 in reversed(undo):
        run.free.discard(a2)
        run.assign[a2] = q2
        run.msets[q2].add(a2)
        if b2 is not None:
            run.assign[b2] = None
            run.msets[q2].discard(b2)
            run.free.add(b2)
    return None


def _process_platform(
    run: _Run, j: int, strategy: LbStrategy, remaining_degree: list[int] | None
) -> str:
    platform = run.inst.platforms[j]
    s = construct_satisfying_set(platform, run.free, strategy, remaining_degree)
    if s is None and strategy.variant == "augmenting":
        s = _augmented_construct(run, j, strategy)
    run.processed.add(j)
    if s is None:
        return "skipped"
    for i in s:
        run.assign[i] = j
        run.free.discard(i)
    run.msets[j] = set(s)
    run.satisfied.add(j)
    return "satisfied"


def _check_order(inst: LbInstance, order) -> tuple[int, ...]:
    order = tuple(order)
    m = len(inst.platforms)
    if sorted(order) != list(range(m)):
        raise ValueError(f"order must be a permutation of 0..{m - 1}")
    return order


def solve_lb(
    inst: LbInstance,
    order=None,
    strategy: LbStrategy = LbStrategy(),
) -> tuple[Assignment, frozenset[int]]:
    """Run the greedy over all platforms; returns (assignment, satisfied set)."""
    order = canonical_order(inst) if order is None else _check_order(inst, order)
    run = _Run(inst)
    deg = run.remaining_degree() if strategy.variant == "min_degree" else None
    for j in order:
        _process_platform(run, j, strategy, deg)
        if deg is not None:
            for i in inst.platforms[j].neighbors:
                deg[i] -= 1
    return Assignment(tuple(run.assign)), frozenset(run.satisfied)


def initial_state(inst: LbInstance) -> OnlineState:
    return OnlineState(
        free_items=frozenset(range(inst.item_count)),
        assignment=Assignment.empty(inst.item_count),
        satisfied=frozenset(),
        processed=frozenset(),
    )


def online_new_platform(
    inst: LbInstance,
    state: OnlineState,
    platform_id: int,
    strategy: LbStrategy = LbStrategy(),
) -> tuple[OnlineState, str]:
    """One arrival. Decisions are irrevocable for base/min_degree; the
    augmenting variant may move items but never unsatisfies a platform."""
    if not 0 <= platform_id < len(inst.platforms):
        raise ValueError(f"unknown platform {platform_id}")
    if platform_id in state.processed:
        raise ValueError(f"platform {platform_id} already arrived")
    run = _Run(inst, state)
    deg = run.remaining_degree() if strategy.variant == "min_degree" else None
    decision = _process_platform(run, platform_id, strategy, deg)
    return run.to_state(), decision
