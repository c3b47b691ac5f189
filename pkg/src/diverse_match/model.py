"""Core data model shared by every solver.

Instance and solution types are immutable after construction, and the
evaluators here are pure functions, so everything in this module is safe to
call from concurrent code.

Proportional-fairness windows are stored as exact rationals
(:class:`fractions.Fraction`), never as binary floats, so satisfaction checks
reduce to exact integer comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence


class LimitError(RuntimeError):
    """An exact method refused to run because its search limits were exceeded."""


def _ids(xs: Iterable[int]) -> frozenset[int]:
    return frozenset(int(x) for x in xs)


# ---------------------------------------------------------------------------
# Lower-bound instances (satisfy as many platforms as possible)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LbGroup:
    """A designated subset of a platform's neighbors with a lower bound."""

    members: frozenset[int]
    lb: int

    def __post_init__(self):
        object.__setattr__(self, "members", _ids(self.members))
        object.__setattr__(self, "lb", int(self.lb))


@dataclass(frozen=True)
class LbPlatform:
    neighbors: frozenset[int]
    lb: int
    groups: tuple[LbGroup, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "neighbors", _ids(self.neighbors))
        object.__setattr__(self, "lb", int(self.lb))
        object.__setattr__(self, "groups", tuple(self.groups))

    @property
    def demand(self) -> int:
        """Largest number of items one satisfying set may need."""
        return max(self.lb, sum(g.lb for g in self.groups))


@dataclass(frozen=True)
class LbInstance:
    item_count: int
    platforms: tuple[LbPlatform, ...]

    def __post_init__(self):
        object.__setattr__(self, "item_count", int(self.item_count))
        object.__setattr__(self, "platforms", tuple(self.platforms))


# ---------------------------------------------------------------------------
# Proportional-fairness instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FairGroup:
    members: frozenset[int]
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "members", _ids(self.members))
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))


@dataclass(frozen=True)
class FairPlatform:
    neighbors: frozenset[int]
    lb: int
    ub: int
    groups: tuple[FairGroup, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "neighbors", _ids(self.neighbors))
        object.__setattr__(self, "lb", int(self.lb))
        object.__setattr__(self, "ub", int(self.ub))
        object.__setattr__(self, "groups", tuple(self.groups))


@dataclass(frozen=True)
class FairInstance:
    item_count: int
    platforms: tuple[FairPlatform, ...]

    def __post_init__(self):
        object.__setattr__(self, "item_count", int(self.item_count))
        object.__setattr__(self, "platforms", tuple(self.platforms))


# ---------------------------------------------------------------------------
# Tree (platform-opening) instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeNode:
    parent: Optional[int]
    children: tuple[int, ...]
    group_lbs: tuple[int, ...]
    lb: int
    reward: int

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(int(c) for c in self.children))
        object.__setattr__(self, "group_lbs", tuple(int(x) for x in self.group_lbs))
        object.__setattr__(self, "lb", int(self.lb))
        object.__setattr__(self, "reward", int(self.reward))

    @property
    def demand(self) -> int:
        """Total items a minimal satisfying allocation uses at this node."""
        return max(self.lb, sum(self.group_lbs))


@dataclass(frozen=True)
class TreeInstance:
    nodes: tuple[TreeNode, ...]
    root: int
    group_count: int
    budget: tuple[int, ...]
    total_items: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "budget", tuple(int(b) for b in self.budget))


def tree_instance(
    parents: Sequence[Optional[int]],
    group_lbs: Sequence[Sequence[int]],
    lbs: Sequence[int],
    rewards: Sequence[int],
    budget: Sequence[int],
    total_items: int,
) -> TreeInstance:
    """Build a TreeInstance from parent links, deriving children and the root."""
    n = len(parents)
    kids: list[list[int]] = [[] for _ in range(n)]
    root = -1
    for j, p in enumerate(parents):
        if p is None:
            root = j
        else:
            kids[int(p)].append(j)
    nodes = tuple(
        TreeNode(
            parent=parents[j],
            children=tuple(kids[j]),
            group_lbs=tuple(group_lbs[j]),
            lb=lbs[j],
            reward=rewards[j],
        )
        for j in range(n)
    )
    return TreeInstance(
        nodes=nodes,
        root=root,
        group_count=len(budget),
        budget=tuple(budget),
        total_items=total_items,
    )


# ---------------------------------------------------------------------------
# Assignments and tree solutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    """Maps each item to at most one platform (None = unmatched)."""

    item_to_platform: tuple[Optional[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "item_to_platform", tuple(self.item_to_platform))

    @staticmethod
    def empty(item_count: int) -> "Assignment":
        return Assignment((None,) * item_count)

    @property
    def matched_count(self) -> int:
        return sum(1 for p in self.item_to_platform if p is not None)


@dataclass(frozen=True)
class TreeSolution:
    """An antichain of satisfied nodes with per-node group allocations.

    ``satisfied_nodes`` may be empty: that is the explicit "nothing can be
    opened within budget" outcome, with zero reward and no allocation.
    """

    satisfied_nodes: frozenset[int]
    allocation: tuple[tuple[int, tuple[int, ...]], ...]
    total_reward: int

    def __post_init__(self):
        object.__setattr__(self, "satisfied_nodes", frozenset(self.satisfied_nodes))
        object.__setattr__(
            self,
            "allocation",
            tuple(sorted((int(j), tuple(int(c) for c in v)) for j, v in self.allocation)),
        )

    @property
    def allocation_map(self) -> dict[int, tuple[int, ...]]:
        return dict(self.allocation)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_lb_instance(inst: LbInstance) -> list[str]:
    """Return every well-formedness violation; an empty list means valid."""
    out: list[str] = []
    if inst.item_count < 0:
        out.append(f"item count {inst.item_count} is negative")
    for j, p in enumerate(inst.platforms):
        if p.lb < 0:
            out.append(f"platform {j}: negative lower bound {p.lb}")
        bad = sorted(i for i in p.neighbors if not 0 <= i < inst.item_count)
        if bad:
            out.append(f"platform {j}: neighbors {bad} out of range")
        for gi, g in enumerate(p.groups):
            if g.lb < 0:
                out.append(f"platform {j} group {gi}: negative lower bound {g.lb}")
            extra = sorted(g.members - p.neighbors)
            if extra:
                out.append(
                    f"platform {j} group {gi}: members {extra} are not neighbors"
                )
            if g.lb > len(g.members):
                out.append(
                    f"platform {j} group {gi}: lower bound {g.lb} exceeds "
                    f"group size {len(g.members)}"
                )
    return out


def lb_warnings(inst: LbInstance) -> list[str]:
    """Non-fatal oddities: platforms that are satisfied even when unmatched."""
    out = []
    for j, p in enumerate(inst.platforms):
        if p.lb == 0 and all(g.lb == 0 for g in p.groups):
            out.append(f"platform {j}: all bounds are zero, satisfied when unmatched")
    return out


def validate_fair_instance(inst: FairInstance) -> list[str]:
    out: list[str] = []
    if inst.item_count < 0:
        out.append(f"item count {inst.item_count} is negative")
    for j, p in enumerate(inst.platforms):
        if not 1 <= p.lb <= p.ub:
            out.append(f"platform {j}: bounds must satisfy 1 <= lb <= ub, got [{p.lb}, {p.ub}]")
        bad = sorted(i for i in p.neighbors if not 0 <= i < inst.item_count)
        if bad:
            out.append(f"platform {j}: neighbors {bad} out of range")
        seen: set[int] = set()
        union: set[int] = set()
        for gi, g in enumerate(p.groups):
            if not 0 <= g.alpha <= 1 or not 0 <= g.beta <= 1:
                out.append(f"platform {j} group {gi}: window outside [0, 1]")
            if g.alpha > g.beta:
                out.append(f"platform {j} group {gi}: alpha {g.alpha} > beta {g.beta}")
            overlap = sorted(g.members & seen)
            if overlap:
                out.append(f"platform {j} group {gi}: members {overlap} appear in an earlier group")
            extra = sorted(g.members - p.neighbors)
            if extra:
                out.append(f"platform {j} group {gi}: members {extra} are not neighbors")
            seen |= g.members
            union |= g.members
        uncovered = sorted(p.neighbors - union)
        if uncovered:
            out.append(f"platform {j}: neighbors {uncovered} belong to no group")
    return out


def validate_tree_instance(inst: TreeInstance) -> list[str]:
    """Structural checks plus the parent/children monotonicity constraints."""
    out: list[str] = []
    n = len(inst.nodes)
    k = inst.group_count
    if len(inst.budget) != k:
        out.append(f"budget has {len(inst.budget)} coordinates, expected {k}")
    if any(b < 0 for b in inst.budget) or inst.total_items < 0:
        out.append("negative budget entries")
    if not 0 <= inst.root < n:
        out.append(f"root {inst.root} out of range")
        return out
    roots = [j for j, nd in enumerate(inst.nodes) if nd.parent is None]
    if roots != [inst.root]:
        out.append(f"expected exactly one parentless node, the root; got {roots}")
    for j, nd in enumerate(inst.nodes):
        if nd.parent is not None and not 0 <= nd.parent < n:
            out.append(f"node {j}: parent {nd.parent} out of range")
        if len(nd.group_lbs) != k:
            out.append(f"node {j}: {len(nd.group_lbs)} group bounds, expected {k}")
        if any(x < 0 for x in nd.group_lbs) or nd.lb < 0 or nd.reward < 0:
            out.append(f"node {j}: negative bound or reward")
    if out:
        return out
    # children arrays must mirror parent links
    derived: list[list[int]] = [[] for _ in range(n)]
    for j, nd in enumerate(inst.nodes):
        if nd.parent is not None:
            derived[nd.parent].append(j)
    for j, nd in enumerate(inst.nodes):
        if sorted(nd.children) != sorted(derived[j]):
            out.append(f"node {j}: children {nd.children} do not match parent links")
    # reachability rules out parent cycles
    seen = {inst.root}
    stack = [inst.root]
    while stack:
        for c in inst.nodes[stack.pop()].children:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    if len(seen) != n:
        out.append(f"nodes {sorted(set(range(n)) - seen)} unreachable from root (cycle?)")
    if out:
        return out
    # monotonicity: a parent's bounds and reward never exceed its children's sums
    for j, nd in enumerate(inst.nodes):
        if not nd.children:
            continue
        for c in range(k):
            child_sum = sum(inst.nodes[i].group_lbs[c] for i in nd.children)
            if nd.group_lbs[c] > child_sum:
                out.append(
                    f"node {j}: group {c} lower bound {nd.group_lbs[c]} exceeds "
                    f"children sum {child_sum}"
                )
        lb_sum = sum(inst.nodes[i].lb for i in nd.children)
        if nd.lb > lb_sum:
            out.append(f"node {j}: overall lower bound {nd.lb} exceeds children sum {lb_sum}")
        r_sum = sum(inst.nodes[i].reward for i in nd.children)
        if nd.reward > r_sum:
            out.append(f"node {j}: reward {nd.reward} exceeds children sum {r_sum}")
    return out


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def matched_sets(inst, assignment: Assignment) -> list[frozenset[int]]:
    """Per-platform matched item sets; rejects assignments using non-edges."""
    if len(assignment.item_to_platform) != inst.item_count:
        raise ValueError(
            f"assignment covers {len(assignment.item_to_platform)} items, "
            f"instance has {inst.item_count}"
        )
    sets: list[set[int]] = [set() for _ in inst.platforms]
    for i, j in enumerate(assignment.item_to_platform):
        if j is None:
            continue
        if not 0 <= j < len(inst.platforms):
            raise ValueError(f"item {i} assigned to unknown platform {j}")
        if i not in inst.platforms[j].neighbors:
            raise ValueError(f"item {i} is not a neighbor of platform {j}")
        sets[j].add(i)
    return [frozenset(s) for s in sets]


def satisfied_lb_platforms(inst: LbInstance, assignment: Assignment) -> frozenset[int]:
    """Platforms whose overall and per-group lower bounds are met."""
    sets = matched_sets(inst, assignment)
    sat = set()
    for j, p in enumerate(inst.platforms):
        m = sets[j]
        if len(m) >= p.lb and all(len(m & g.members) >= g.lb for g in p.groups):
            sat.add(j)
    return frozenset(sat)


def _fair_platform_ok(p: FairPlatform, m: frozenset[int], mode: str) -> bool:
    s = len(m)
    if not p.lb <= s <= p.ub:
        return False
    for g in p.groups:
        c = len(m & g.members)
        if mode == "strict":
            lo, hi = g.alpha * s, g.beta * s
        elif mode == "relaxed":
            slack = Fraction(3, p.lb)
            lo, hi = (g.alpha - slack) * s, (g.beta + slack) * s
        else:  # relaxed-mult: the multiplicative form of the same slack
            slack = Fraction(3, p.lb)
            lo, hi = g.alpha * s * (1 - slack), g.beta * s * (1 + slack)
        if not lo <= c <= hi:
            return False
    return True


def fair_score(
    inst: FairInstance, assignment: Assignment, mode: str = "strict"
) -> tuple[frozenset[int], int]:
    """Satisfied platforms and the number of items matched to them.

    ``strict`` checks the proportional windows exactly; ``relaxed`` widens
    each group window additively by 3/lb of the platform. Both use rational
    arithmetic, so there is no floating-point rounding anywhere.
    """
    if mode not in ("strict", "relaxed"):
        raise ValueError(f"unknown mode {mode!r}")
    sets = matched_sets(inst, assignment)
    sat = {j for j, p in enumerate(inst.platforms) if _fair_platform_ok(p, sets[j], mode)}
    matched = sum(len(sets[j]) for j in sat)
    return frozenset(sat), matched


def multiplicative_relaxed_satisfied(
    inst: FairInstance, assignment: Assignment
) -> tuple[frozenset[int], int]:
    """Same as relaxed ``fair_score`` but with the multiplicative slack form.

    Reported alongside the additive form by the harness; the additive form is
    the contractual check.
    """
    sets = matched_sets(inst, assignment)
    sat = {
        j
        for j, p in enumerate(inst.platforms)
        if _fair_platform_ok(p, sets[j], "relaxed-mult")
    }
    matched = sum(len(sets[j]) for j in sat)
    return frozenset(sat), matched


def canonical_order(inst) -> tuple[int, ...]:
    """Fixed instance-independent processing order: ascending platform id."""
    return tuple(range(len(inst.platforms)))


def max_demand(inst: LbInstance) -> int:
    """max over platforms of max(lb, sum of group lbs): the worst-case size
    of a single satisfying set, which drives the lb competitive factor."""
    return max((p.demand for p in inst.platforms), default=0)


def max_lower_bound(inst) -> int:
    """max over platforms of the overall lower bound; drives the fairness
    competitive factor. Distinct from :func:`max_demand` by design."""
    return max((p.lb for p in inst.platforms), default=0)


# ---------------------------------------------------------------------------
# Tree solution checking
# ---------------------------------------------------------------------------


def _path_cover_violations(inst: TreeInstance, satisfied: frozenset[int]) -> list[str]:
    out = []

    def walk(j: int, seen: int) -> None:
        seen += 1 if j in satisfied else 0
        if not inst.nodes[j].children:
            if seen != 1:
                out.append(f"root-leaf path ending at {j} has {seen} satisfied nodes")
            return
        for c in inst.nodes[j].children:
            walk(c, seen)

    walk(inst.root, 0)
    return out


def validate_tree_solution(inst: TreeInstance, sol: TreeSolution) -> list[str]:
    """Check a TreeSolution against its instance; empty list means valid."""
    out: list[str] = []
    if not sol.satisfied_nodes:
        if sol.allocation or sol.total_reward != 0:
            out.append("empty satisfied set must carry no allocation and zero reward")
        return out
    bad = sorted(j for j in sol.satisfied_nodes if not 0 <= j < len(inst.nodes))
    if bad:
        return [f"satisfied nodes {bad} out of range"]
    out.extend(_path_cover_violations(inst, sol.satisfied_nodes))
    alloc = sol.allocation_map
    if set(alloc) != set(sol.satisfied_nodes):
        out.append("allocation keys differ from the satisfied set")
        return out
    used = [0] * inst.group_count
    grand = 0
    for j in sorted(sol.satisfied_nodes):
        counts = alloc[j]
        nd = inst.nodes[j]
        if len(counts) != inst.group_count:
            out.append(f"node {j}: allocation has wrong arity")
            continue
        if any(c < g for c, g in zip(counts, nd.group_lbs)):
            out.append(f"node {j}: allocation {counts} below group bounds {nd.group_lbs}")
        if sum(counts) < nd.lb:
            out.append(f"node {j}: allocation total {sum(counts)} below overall bound {nd.lb}")
        used = [u + c for u, c in zip(used, counts)]
        grand += sum(counts)
    if any(u > b for u, b in zip(used, inst.budget)):
        out.append(f"group usage {used} exceeds budget {list(inst.budget)}")
    if grand > inst.total_items:
        out.append(f"total usage {grand} exceeds item supply {inst.total_items}")
    if sol.total_reward != sum(inst.nodes[j].reward for j in sol.satisfied_nodes):
        out.append("total_reward does not equal the sum of satisfied rewards")
    return out
