"""Spatial branch-and-bound over the variable box.

Best-first search using the relaxation as bounding oracle.  Bound
constraints are regenerated per node from the node box (big-M shrinks
with the box) while the exponents and covers stay fixed from the root,
so only the model constants change between nodes.  Incumbents come from
seeded sampling plus the box corners and center.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass

from . import status as st
from .pipeline import PipelineOptions, prepare_root, solve_on_box
from .poly import PopInstance, evaluate

WIDTH_EPS = 1e-9  # boxes thinner than this are leaves
SAMPLES_PER_NODE = 200
ERROR_DEPTH_CAP = 20  # nodes without a usable bound stop branching here

GAP_REACHED = "gap-reached"
NODE_LIMIT = "node-limit"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class BnbNode:
    node_id: int
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    depth: int
    parent_bound: float  # effective bound inherited from the parent


@dataclass(frozen=True)
class NodeRecord:
    node_id: int
    depth: int
    parent_bound: float
    computed_bound: float | None  # this node's own certified bound
    effective_bound: float  # max(parent_bound, computed_bound)
    status: str


@dataclass(frozen=True)
class BnbResult:
    lower_bound: float
    incumbent_value: float
    incumbent_point: tuple[float, ...] | None
    nodes: int
    status: str
    error_nodes: int = 0
    records: tuple[NodeRecord, ...] = ()


def branch(node: BnbNode) -> tuple[BnbNode, BnbNode] | None:
    """Bisect the widest coordinate; None when the box is a point."""
    widths = [hi - lo for lo, hi in zip(node.lower, node.upper)]
    widest = max(range(len(widths)), key=lambda i: (widths[i], -i))
    if widths[widest] <= WIDTH_EPS:
        return None
    mid = 0.5 * (node.lower[widest] + node.upper[widest])
    left_upper = list(node.upper)
    left_upper[widest] = mid
    right_lower = list(node.lower)
    right_lower[widest] = mid
    left = BnbNode(-1, node.lower, tuple(left_upper), node.depth + 1, node.parent_bound)
    right = BnbNode(-1, tuple(right_lower), node.upper, node.depth + 1, node.parent_bound)
    return left, right


def _corners(lower, upper, limit: int = 16):
    pts = [[]]
    for lo, hi in zip(lower, upper):
        pts = [p + [v] for p in pts for v in (lo, hi)]
        if len(pts) > limit:
            return []
    return [tuple(p) for p in pts]


def _sample_incumbent(inst: PopInstance, node: BnbNode, seed: int):
    """Best feasible (value, point) among corners, center and samples."""
    rng = random.Random(seed * 1000003 + node.node_id)
    cands = [tuple((lo + hi) / 2.0 for lo, hi in zip(node.lower, node.upper))]
    cands.extend(_corners(node.lower, node.upper))
    for _ in range(SAMPLES_PER_NODE):
        cands.append(tuple(rng.uniform(lo, hi) for lo, hi in zip(node.lower, node.upper)))
    best_val, best_pt = math.inf, None
    for x in cands:
        if any(evaluate(g, x) < -1e-9 for g in inst.constraints):
            continue
        fx = evaluate(inst.objective, x)
        if fx < best_val:
            best_val, best_pt = fx, x
    return best_val, best_pt


def solve_bnb(
    inst: PopInstance,
    options: PipelineOptions | None = None,
    max_nodes: int = 1000,
    gap_tol: float = 1e-6,
    seed: int = 0,
    log=None,
) -> BnbResult:
    """Best-first branch-and-bound; returns the certified global bound.

    The reported lower bound is the minimum over open and closed leaf
    bounds, so it stays valid whatever stops the search.
    """
    options = options or PipelineOptions()
    root_struct = prepare_root(inst, options)

    incumbent_value = math.inf
    incumbent_point = None
    next_id = 0
    nodes_solved = 0
    error_nodes = 0
    records: list[NodeRecord] = []
    closed_bounds: list[float] = []

    heap: list[tuple[float, int, int, BnbNode]] = []

    def push(node: BnbNode):
        nonlocal next_id
        node = BnbNode(next_id, node.lower, node.upper, node.depth, node.parent_bound)
        next_id += 1
        heapq.heappush(heap, (node.parent_bound, -node.depth, node.node_id, node))

    push(BnbNode(0, inst.lower, inst.upper, 0, -math.inf))
    limit_hit = False

    while heap:
        open_min = heap[0][0]
        global_bound = min([open_min] + closed_bounds) if closed_bounds else open_min
        if incumbent_value - global_bound <= gap_tol:
            break
        if nodes_solved >= max_nodes:
            limit_hit = True
            break
        _, _, _, node = heapq.heappop(heap)
        nodes_solved += 1

        res = solve_on_box(root_struct, node.lower, node.upper)
        if res.status == st.OPTIMAL and res.gamma_certified is not None:
            computed = res.gamma_certified
            effective = max(node.parent_bound, computed)
        else:
            computed = None
            effective = node.parent_bound if math.isfinite(node.parent_bound) else -math.inf
            error_nodes += 1

        val, pt = _sample_incumbent(inst, node, seed)
        if val < incumbent_value:
            incumbent_value, incumbent_point = val, pt

        records.append(
            NodeRecord(node.node_id, node.depth, node.parent_bound, computed, effective,
                       res.status)
        )
        if log is not None:
            log(
                f"node {node.node_id} depth {node.depth} bound {effective:.9g} "
                f"incumbent {incumbent_value:.9g} status {res.status}"
            )

        if effective >= incumbent_value - gap_tol:
            closed_bounds.append(effective)
            continue
        if computed is None and node.depth >= ERROR_DEPTH_CAP:
            closed_bounds.append(effective)
            continue
        children = branch(
            BnbNode(node.node_id, node.lower, node.upper, node.depth, effective)
        )
        if children is None:
            closed_bounds.append(effective)
            continue
        for child in children:
            push(child)

    if heap:
        open_min = heap[0][0]
        global_bound = min([open_min] + closed_bounds) if closed_bounds else open_min
    elif closed_bounds:
        global_bound = min(closed_bounds)
    else:
        global_bound = -math.inf

    if incumbent_value - global_bound <= gap_tol:
        outcome = GAP_REACHED
    elif limit_hit:
        outcome = NODE_LIMIT
    else:
        outcome = EXHAUSTED

    return BnbResult(
        lower_bound=global_bound,
        incumbent_value=incumbent_value,
        incumbent_point=incumbent_point,
        nodes=nodes_solved,
        status=outcome,
        error_nodes=error_nodes,
        records=tuple(records),
    )
