"""Bipartite matching under diversity constraints.

Solvers for three related problems on items, platforms, and item groups:

* lower-bound satisfaction: maximize the number of platforms whose overall
  and per-group lower bounds are met (:mod:`diverse_match.lb`),
* proportional fairness: maximize items matched to platforms whose group
  shares stay inside per-group windows (:mod:`diverse_match.fair`),
* hierarchical opening: pick one node per root-leaf path of a platform tree
  to maximize reward within vector budgets (:mod:`diverse_match.tree`),

plus exact small-instance oracles (:mod:`diverse_match.oracle`), seeded
generators (:mod:`diverse_match.generators`), JSON instance files
(:mod:`diverse_match.jsonio`), and the ``diverse-match`` CLI
(:mod:`diverse_match.cli`).
"""

from .model import (
    Assignment,
    FairGroup,
    FairInstance,
    FairPlatform,
    LbGroup,
    LbInstance,
    LbPlatform,
    LimitError,
    TreeInstance,
    TreeNode,
    TreeSolution,
    canonical_order,
    fair_score,
    max_demand,
    max_lower_bound,
    multiplicative_relaxed_satisfied,
    satisfied_lb_platforms,
    tree_instance,
    validate_fair_instance,
    validate_lb_instance,
    validate_tree_instance,
    validate_tree_solution,
)
from .lb import LbStrategy, OnlineState, construct_satisfying_set, initial_state, online_new_platform, solve_lb
from .fair import BlockSpec, block_spec, construct_block, solve_fair, solve_fair_naive
from .tree import solve_tree
from .oracle import OracleLimits, exact_fair, exact_lb, exact_tree
from .generators import SplitMix64, gen_degree_capped, gen_er_partition, gen_fair, gen_tree

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "BlockSpec",
    "FairGroup",
    "FairInstance",
    "FairPlatform",
    "LbGroup",
    "LbInstance",
    "LbPlatform",
    "LbStrategy",
    "LimitError",
    "OnlineState",
    "OracleLimits",
    "SplitMix64",
    "TreeInstance",
    "TreeNode",
    "TreeSolution",
    "block_spec",
    "canonical_order",
    "construct_block",
    "construct_satisfying_set",
    "exact_fair",
    "exact_lb",
    "exact_tree",
    "fair_score",
    "gen_degree_capped",
    "gen_er_partition",
    "gen_fair",
    "gen_tree",
    "initial_state",
    "max_demand",
    "max_lower_bound",
    "multiplicative_relaxed_satisfied",
    "online_new_platform",
    "satisfied_lb_platforms",
    "solve_fair",
    "solve_fair_naive",
    "solve_lb",
    "solve_tree",
    "tree_instance",
    "validate_fair_instance",
    "validate_lb_instance",
    "validate_tree_instance",
    "validate_tree_solution",
]
