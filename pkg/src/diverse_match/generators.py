"""Seeded random instance generators.

All randomness flows through :class:`SplitMix64`, a named 64-bit splittable
generator that is trivial to reimplement elsewhere, so instance streams are
reproducible bit for bit from (parameters, seed) alone. The derived draws
(uniform ints by rejection, floats from the top 53 bits, partial Fisher-Yates
sampling) are defined in this module and documented in the README.
"""

from __future__ import annotations

from fractions import Fraction

from .model import (
    FairGroup,
    FairInstance,
    FairPlatform,
    LbGroup,
    LbInstance,
    LbPlatform,
    TreeInstance,
    tree_instance,
)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    """SplitMix64: state advances by the golden-gamma, output is the mixed state.

    Reference constants; first output for seed 0 is 0xE220A8397B1DCDAF.
    """

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def split(self) -> "SplitMix64":
        """Independent child stream seeded from the next output."""
        return SplitMix64(self.next_u64())

    def random(self) -> float:
        """Float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (2.0**-53)

    def randrange(self, n: int) -> int:
        """Unbiased integer in [0, n) by rejection sampling."""
        if n <= 0:
            raise ValueError(f"randrange bound must be positive, got {n}")
        # reject draws from the final partial block of size 2**64 % n
        threshold = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next_u64()
            if r < threshold:
                return r % n

    def randint(self, a: int, b: int) -> int:
        """Inclusive uniform integer in [a, b]."""
        return a + self.randrange(b - a + 1)

    def bernoulli(self, p: float) -> bool:
        return self.random() < p

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct ints from range(n), partial Fisher-Yates order."""
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} from {n}")
        arr = list(range(n))
        for t in range(k):
            j = t + self.randrange(n - t)
            arr[t], arr[j] = arr[j], arr[t]
        return arr[:k]

    def shuffle(self, xs: list) -> None:
        for t in range(len(xs) - 1, 0, -1):
            j = self.randrange(t + 1)
            xs[t], xs[j] = xs[j], xs[t]


def _partition_bounds(items: int, groups: int) -> list[tuple[int, int]]:
    """Near-equal contiguous blocks: group g covers [start, end)."""
    base, rem = divmod(items, groups)
    bounds = []
    start = 0
    for g in range(groups):
        size = base + (1 if g < rem else 0)
        bounds.append((start, start + size))
        start += size
    return bounds


def _group_of(bounds: list[tuple[int, int]], item: int) -> int:
    for g, (a, b) in enumerate(bounds):
        if a <= item < b:
            return g
    raise ValueError(item)


def _lb_platforms(
    neighbors_per_platform: list[list[int]],
    bounds: list[tuple[int, int]],
    group_lb: int,
    overall_lb: int,
) -> list[LbPlatform]:
    """Each platform carries every global group intersected with its neighbors.

    The group lower bound is kept even when the intersection is smaller, since
    that is exactly what makes a sparse platform unsatisfiable; the validator
    flags such platforms.
    """
    out = []
    for neigh in neighbors_per_platform:
        per_group: list[list[int]] = [[] for _ in bounds]
        for i in neigh:
            per_group[_group_of(bounds, i)].append(i)
        groups = tuple(LbGroup(m, group_lb) for m in per_group)
        out.append(LbPlatform(neigh, overall_lb, groups))
    return out


def gen_er_partition(
    n_per_group: int,
    groups: int,
    rho: float,
    platform_count: int,
    group_lb: int,
    seed: int,
    overall_lb: int = 0,
) -> LbInstance:
    """Erdos-Renyi bipartite graph over a global item partition.

    Each of the groups*n_per_group items joins each platform's neighborhood
    independently with probability rho (item-major draw order). Every platform
    sees all groups, each with lower bound ``group_lb``.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    rng = SplitMix64(seed)
    n = n_per_group * groups
    neigh: list[list[int]] = [[] for _ in range(platform_count)]
    for i in range(n):
        for p in range(platform_count):
            if rng.bernoulli(rho):
                neigh[p].append(i)
    bounds = _partition_bounds(n, groups)
    return LbInstance(n, tuple(_lb_platforms(neigh, bounds, group_lb, overall_lb)))


def gen_degree_capped(
    items: int,
    platforms: int,
    max_degree: int,
    groups: int,
    group_lb: int,
    seed: int,
    overall_lb: int = 0,
) -> LbInstance:
    """Degree-capped bipartite graph: each item picks Uniform{1..max_degree}
    platforms without replacement. Items are partitioned into near-equal
    global groups; platform groups are the intersections with its neighbors.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    if max_degree > platforms:
        raise ValueError(f"max_degree {max_degree} exceeds platform count {platforms}")
    rng = SplitMix64(seed)
    neigh: list[list[int]] = [[] for _ in range(platforms)]
    scratch = list(range(platforms))
    for i in range(items):
        d = rng.randint(1, max_degree)
        for t in range(d):
            j = t + rng.randrange(platforms - t)
            scratch[t], scratch[j] = scratch[j], scratch[t]
            neigh[scratch[t]].append(i)
    bounds = _partition_bounds(items, groups)
    return LbInstance(items, tuple(_lb_platforms(neigh, bounds, group_lb, overall_lb)))


def gen_fair(
    items: int = 2000,
    platforms: int = 100,
    max_degree: int = 40,
    groups: int = 20,
    lb: int = 10,
    ub: int = 25,
    alpha: Fraction = Fraction(1, 40),
    beta: Fraction = Fraction(1, 10),
    seed: int = 0,
) -> FairInstance:
    """Degree-capped fairness instance; groups partition each neighborhood."""
    if max_degree < 1 or max_degree > platforms:
        raise ValueError("max_degree out of range")
    rng = SplitMix64(seed)
    neigh: list[list[int]] = [[] for _ in range(platforms)]
    scratch = list(range(platforms))
    for i in range(items):
        d = rng.randint(1, max_degree)
        for t in range(d):
            j = t + rng.randrange(platforms - t)
            scratch[t], scratch[j] = scratch[j], scratch[t]
            neigh[scratch[t]].append(i)
    bounds = _partition_bounds(items, groups)
    plats = []
    for nb in neigh:
        per_group: list[list[int]] = [[] for _ in range(groups)]
        for i in nb:
            per_group[_group_of(bounds, i)].append(i)
        fg = tuple(FairGroup(m, alpha, beta) for m in per_group)
        plats.append(FairPlatform(nb, lb, ub, fg))
    return FairInstance(items, tuple(plats))


def gen_tree(
    nodes: int,
    group_count: int,
    seed: int,
    max_leaf_bound: int = 3,
    max_leaf_reward: int = 5,
    budget_cap: int = 12,
) -> TreeInstance:
    """Random monotone tree, built bottom-up so validation always passes.

    Node j > 0 attaches to a uniform parent among 0..j-1, so children always
    have larger ids and a reversed-id sweep sees children before parents.
    Internal bounds and rewards are drawn at or below their children's sums.
    Leaf overall bounds may exceed the sum of their group bounds, which forces
    the solver to track total consumption as well as per-group consumption.
    """
    if nodes < 1:
        raise ValueError("need at least one node")
    rng = SplitMix64(seed)
    parents: list[int | None] = [None] + [rng.randrange(j) for j in range(1, nodes)]
    kids: list[list[int]] = [[] for _ in range(nodes)]
    for j in range(1, nodes):
        kids[parents[j]].append(j)

    glbs: list[tuple[int, ...]] = [()] * nodes
    lbs = [0] * nodes
    rewards = [0] * nodes
    for j in range(nodes - 1, -1, -1):
        if not kids[j]:
            glbs[j] = tuple(rng.randint(0, max_leaf_bound) for _ in range(group_count))
            lbs[j] = rng.randint(0, sum(glbs[j]) + 2)
            rewards[j] = rng.randint(0, max_leaf_reward)
        else:
            sums = [sum(glbs[c][g] for c in kids[j]) for g in range(group_count)]
            glbs[j] = tuple(rng.randint(0, s) for s in sums)
            lbs[j] = rng.randint(0, sum(lbs[c] for c in kids[j]))
            rewards[j] = rng.randint(0, sum(rewards[c] for c in kids[j]))
    budget = tuple(rng.randint(0, budget_cap) for _ in range(group_count))
    total = rng.randint(0, sum(budget) + 2)
    return tree_instance(parents, glbs, lbs, rewards, budget, total)
