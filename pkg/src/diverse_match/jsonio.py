"""Instance and solution files.

One JSON document per instance, dispatched on the top-level ``problem`` field
(``lb``, ``fair``, or ``tree``). Ids are array indices. Unknown fields are
rejected so that typos fail loudly. Any path ending in ``.gz`` is transparently
gzip-compressed.
"""

from __future__ import annotations

import gzip
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .model import (
    Assignment,
    FairGroup,
    FairInstance,
    FairPlatform,
    LbGroup,
    LbInstance,
    LbPlatform,
    TreeInstance,
    TreeSolution,
    tree_instance,
)


class SchemaError(ValueError):
    """The file parsed as JSON but does not match the instance schema."""


def _open(path, mode: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def _check_keys(obj: dict, required: set[str], where: str, optional: set[str] = frozenset()):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    missing = required - obj.keys()
    if missing:
        raise SchemaError(f"{where}: missing fields {sorted(missing)}")
    unknown = obj.keys() - required - optional
    if unknown:
        raise SchemaError(f"{where}: unknown fields {sorted(unknown)}")


def _int(x, where: str) -> int:
    if not isinstance(x, int) or isinstance(x, bool):
        raise SchemaError(f"{where}: expected an integer, got {x!r}")
    return x


def _id_list(x, where: str) -> list[int]:
    if not isinstance(x, list):
        raise SchemaError(f"{where}: expected an array")
    return [_int(v, where) for v in x]


def _fraction(x, where: str) -> Fraction:
    if not isinstance(x, list) or len(x) != 2:
        raise SchemaError(f"{where}: expected [numerator, denominator]")
    num, den = _int(x[0], where), _int(x[1], where)
    if den <= 0:
        raise SchemaError(f"{where}: denominator must be positive")
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------


def _decode_lb(doc: dict) -> LbInstance:
    _check_keys(doc, {"problem", "items", "platforms"}, "instance")
    platforms = []
    if not isinstance(doc["platforms"], list):
        raise SchemaError("platforms: expected an array")
    for j, p in enumerate(doc["platforms"]):
        where = f"platform {j}"
        _check_keys(p, {"neighbors", "lb", "groups"}, where)
        groups = []
        for gi, g in enumerate(p["groups"]):
            gw = f"{where} group {gi}"
            _check_keys(g, {"members", "lb"}, gw)
            groups.append(LbGroup(_id_list(g["members"], gw), _int(g["lb"], gw)))
        platforms.append(
            LbPlatform(_id_list(p["neighbors"], where), _int(p["lb"], where), tuple(groups))
        )
    return LbInstance(_int(doc["items"], "items"), tuple(platforms))


def _decode_fair(doc: dict) -> FairInstance:
    _check_keys(doc, {"problem", "items", "platforms"}, "instance")
    platforms = []
    for j, p in enumerate(doc["platforms"]):
        where = f"platform {j}"
        _check_keys(p, {"neighbors", "lb", "ub", "groups"}, where)
        groups = []
        for gi, g in enumerate(p["groups"]):
            gw = f"{where} group {gi}"
            _check_keys(g, {"members", "alpha", "beta"}, gw)
            groups.append(
                FairGroup(
                    _id_list(g["members"], gw),
                    _fraction(g["alpha"], gw),
                    _fraction(g["beta"], gw),
                )
            )
        platforms.append(
            FairPlatform(
                _id_list(p["neighbors"], where),
                _int(p["lb"], where),
                _int(p["ub"], where),
                tuple(groups),
            )
        )
    return FairInstance(_int(doc["items"], "items"), tuple(platforms))


def _decode_tree(doc: dict) -> TreeInstance:
    _check_keys(doc, {"problem", "k", "budget", "total", "nodes"}, "instance")
    k = _int(doc["k"], "k")
    budget = _id_list(doc["budget"], "budget")
    if len(budget) != k:
        raise SchemaError(f"budget has {len(budget)} entries, expected k={k}")
    parents: list[int | None] = []
    glbs, lbs, rewards = [], [], []
    for j, nd in enumerate(doc["nodes"]):
        where = f"node {j}"
        _check_keys(nd, {"parent", "l", "lb", "reward"}, where)
        parents.append(None if nd["parent"] is None else _int(nd["parent"], where))
        glbs.append(_id_list(nd["l"], where))
        lbs.append(_int(nd["lb"], where))
        rewards.append(_int(nd["reward"], where))
    roots = [j for j, p in enumerate(parents) if p is None]
    if len(roots) != 1:
        raise SchemaError(f"expected exactly one root (parent null), got {roots}")
    return tree_instance(parents, glbs, lbs, rewards, budget, _int(doc["total"], "total"))


_DECODERS = {"lb": _decode_lb, "fair": _decode_fair, "tree": _decode_tree}


def load_instance(path) -> LbInstance | FairInstance | TreeInstance:
    with _open(path, "r") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "problem" not in doc:
        raise SchemaError("top level must be an object with a 'problem' field")
    kind = doc["problem"]
    if kind not in _DECODERS:
        raise SchemaError(f"unknown problem kind {kind!r}")
    return _DECODERS[kind](doc)


def _encode_instance(inst) -> dict[str, Any]:
    if isinstance(inst, LbInstance):
        return {
            "problem": "lb",
            "items": inst.item_count,
            "platforms": [
                {
                    "neighbors": sorted(p.neighbors),
                    "lb": p.lb,
                    "groups": [
                        {"members": sorted(g.members), "lb": g.lb} for g in p.groups
                    ],
                }
                for p in inst.platforms
            ],
        }
    if isinstance(inst, FairInstance):
        return {
            "problem": "fair",
            "items": inst.item_count,
            "platforms": [
                {
                    "neighbors": sorted(p.neighbors),
                    "lb": p.lb,
                    "ub": p.ub,
                    "groups": [
                        {
                            "members": sorted(g.members),
                            "alpha": [g.alpha.numerator, g.alpha.denominator],
                            "beta": [g.beta.numerator, g.beta.denominator],
                        }
                        for g in p.groups
                    ],
                }
                for p in inst.platforms
            ],
        }
    if isinstance(inst, TreeInstance):
        return {
            "problem": "tree",
            "k": inst.group_count,
            "budget": list(inst.budget),
            "total": inst.total_items,
            "nodes": [
                {
                    "parent": nd.parent,
                    "l": list(nd.group_lbs),
                    "lb": nd.lb,
                    "reward": nd.reward,
                }
                for nd in inst.nodes
            ],
        }
    raise TypeError(f"not an instance type: {type(inst)!r}")


def save_instance(path, inst) -> None:
    doc = _encode_instance(inst)
    with _open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def instance_kind(inst) -> str:
    return _encode_instance(inst)["problem"]


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------


def _assignment_doc(assignment: Assignment) -> list[int | None]:
    return list(assignment.item_to_platform)


def save_lb_solution(path, assignment: Assignment, satisfied) -> None:
    doc = {
        "problem": "lb",
        "assignment": _assignment_doc(assignment),
        "satisfied": sorted(satisfied),
    }
    with _open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_fair_solution(path, assignment: Assignment, summary: dict) -> None:
    doc = {"problem": "fair", "assignment": _assignment_doc(assignment)}
    doc.update(summary)
    with _open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_tree_solution(path, sol: TreeSolution) -> None:
    doc = {
        "problem": "tree",
        "satisfied": sorted(sol.satisfied_nodes),
        "allocation": [[j, list(v)] for j, v in sol.allocation],
        "total_reward": sol.total_reward,
    }
    with _open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_solution(path) -> dict:
    with _open(path, "r") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "problem" not in doc:
        raise SchemaError("solution file must be an object with a 'problem' field")
    if doc["problem"] in ("lb", "fair"):
        doc["assignment"] = Assignment(
            tuple(None if x is None else int(x) for x in doc["assignment"])
        )
    elif doc["problem"] == "tree":
        doc["solution"] = TreeSolution(
            frozenset(doc["satisfied"]),
            tuple((j, tuple(v)) for j, v in doc["allocation"]),
            doc["total_reward"],
        )
    return doc
