"""Lossy kernelization: reduction rules, size bound, and solution lifting.

Three rewrite rules shrink an instance while keeping any solution of the
reduced instance liftable: long induced degree-2 paths lose an edge, a
vertex with enough false twins disappears, and a large common neighborhood
in the high-degree set is contracted (the only lossy rule, losing at most a
factor alpha).  A trace of applied steps drives the lifting; replaying it
forward on the original instance reproduces the reduced one exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import ceil, comb

from .errors import InputError
from .graph import Edge, Graph, Instance, contract_edges, edge, is_near_tree

MAX_LOSSY_DEGREE = 16  # cap on d = ceil(alpha / (alpha - 1)); rejects alpha too close to 1


# ---------------------------------------------------------------------------
# trace records

@dataclass(frozen=True)
class LongPathContract:
    contracted: Edge
    merged: int


@dataclass(frozen=True)
class TwinDelete:
    vertex: int
    neighborhood: frozenset[int]


@dataclass(frozen=True)
class CommonNbrContract:
    contracted: tuple[Edge, ...]  # the star {v1 h_i}
    d: int
    merged: int


Step = LongPathContract | TwinDelete | CommonNbrContract


@dataclass(frozen=True)
class KernelTrace:
    steps: tuple[Step, ...]
    resolved: str | None = None  # None | "yes" | "no"


# ---------------------------------------------------------------------------
# degree split

@dataclass(frozen=True)
class HIRPartition:
    high: frozenset[int]         # degree >= 2(k+3)(k+2*ell) + 1
    independent: frozenset[int]  # all neighbors high
    rest: frozenset[int]


def degree_threshold(k: int, ell: int) -> int:
    return 2 * (k + 3) * (k + 2 * ell) + 1


def partition_hir(instance: Instance) -> HIRPartition:
    g, k, ell = instance.graph, instance.k, instance.ell
    theta = degree_threshold(k, ell)
    high = frozenset(v for v in g.vertices if g.degree(v) >= theta)
    independent = frozenset(v for v in g.vertices - high if g.neighbors(v) <= high)
    rest = g.vertices - high - independent
    return HIRPartition(high, independent, rest)


# ---------------------------------------------------------------------------
# rule: long induced degree-2 paths

def _degree2_runs(g: Graph):
    """Maximal runs of degree-2 vertices, as (kind, ordered vertices, anchors).

    kind "cycle": the whole graph is a cycle (no anchors).  kind "chain":
    a path of degree-2 vertices whose two outside neighbors (the anchors,
    possibly equal) have other degrees.
    """
    deg2 = frozenset(v for v in g.vertices if g.degree(v) == 2)
    sub = g.subgraph(deg2)
    runs = []
    for comp in sub.components():
        inner_ends = sorted(v for v in comp if len(sub.neighbors(v) & comp) <= 1)
        if not inner_ends:
            # every vertex keeps both neighbors inside: an isolated cycle,
            # which in a connected graph means the graph itself
            start = min(comp)
            nxt = min(g.neighbors(start))
            order = [start, nxt]
            while len(order) < len(comp):
                cand = (g.neighbors(order[-1]) & comp) - {order[-2]}
                order.append(min(cand))
            runs.append(("cycle", order, ()))
            continue
        first = inner_ends[0]
        order = [first]
        while len(order) < len(comp):
            nxt = (sub.neighbors(order[-1]) & comp) - set(order[-2:])
            order.append(min(nxt))
        if len(order) == 1:
            a, b = sorted(g.neighbors(order[0]))
        else:
            # each end of the run has exactly one neighbor outside it
            a = min(g.neighbors(order[0]) - deg2)
            b = min(g.neighbors(order[-1]) - deg2)
            if b < a:
                order.reverse()
                a, b = b, a
        runs.append(("chain", order, (a, b)))
    return runs


def _long_path_target(g: Graph, k: int) -> Edge | None:
    """The edge u_(q-1) u_q of the canonical qualifying path, if any run gives
    an induced path (u_0 .. u_(q+1)) with q > k + 2 interior degree-2
    vertices.  Runs are searched by smallest member id."""
    best = None
    for kind, order, anchors in sorted(_degree2_runs(g), key=lambda r: min(r[1])):
        m = len(order)
        if kind == "cycle":
            q = m - 2
            target = edge(order[q - 1], order[q]) if q >= 2 else None
        else:
            a, b = anchors
            if a != b:
                q = m
                target = edge(order[m - 2], order[m - 1]) if m >= 2 else None
            else:
                # the run closes a cycle through one anchor; the distinct-vertex
                # path can use only one anchor endpoint
                q = m - 1
                target = edge(order[m - 3], order[m - 2]) if m >= 3 else None
        if target is not None and q > k + 2:
            best = target
            break
    return best


def reduce_long_paths(instance: Instance) -> tuple[Instance, LongPathContract | None]:
    g, k = instance.graph, instance.k
    target = _long_path_target(g, k)
    if target is None:
        return instance, None
    contracted, _ = contract_edges(g, [target])
    step = LongPathContract(target, min(target))
    return Instance(contracted, k, instance.ell), step


# ---------------------------------------------------------------------------
# rule: false twins in the independent part

def reduce_false_twins(instance: Instance) -> tuple[Instance, TwinDelete | None]:
    g, k, ell = instance.graph, instance.k, instance.ell
    part = partition_hir(instance)
    groups: dict[frozenset[int], list[int]] = {}
    for v in sorted(part.independent):
        groups.setdefault(g.neighbors(v), []).append(v)
    need = k + ell + 2  # twins besides the vertex itself
    eligible = [vs for vs in groups.values() if len(vs) - 1 >= need]
    if not eligible:
        return instance, None
    group = min(eligible, key=min)
    victim = max(group)
    step = TwinDelete(victim, g.neighbors(victim))
    return Instance(g.without([victim]), k, ell), step


# ---------------------------------------------------------------------------
# rule: shared d-neighborhood in the high-degree part (the lossy one)

def lossy_degree(alpha: float) -> int:
    if alpha <= 1:
        raise InputError("the approximation factor must exceed 1")
    d = ceil(alpha / (alpha - 1))
    if d > MAX_LOSSY_DEGREE:
        raise InputError(f"alpha={alpha} needs d={d} > {MAX_LOSSY_DEGREE}; choose alpha further from 1")
    return d


def reduce_common_neighborhood(instance: Instance, alpha: float,
                               ) -> tuple[Instance, CommonNbrContract | None]:
    g, k, ell = instance.graph, instance.k, instance.ell
    d = lossy_degree(alpha)
    part = partition_hir(instance)
    if len(part.high) < d:
        return instance, None
    need = k + ell + 2
    ind = sorted(part.independent)
    for hub_set in combinations(sorted(part.high), d):
        hubs = frozenset(hub_set)
        sharing = [v for v in ind if hubs <= g.neighbors(v)]
        if len(sharing) >= need:
            v1 = sharing[0]
            star = tuple(sorted(edge(v1, h) for h in hub_set))
            contracted, merge = contract_edges(g, star)
            step = CommonNbrContract(star, d, merge[v1])
            return Instance(contracted, k - d + 1, ell), step
    return instance, None


# ---------------------------------------------------------------------------
# full kernelization

def size_bound(k: int, ell: int, d: int) -> int:
    """Explicit vertex bound for reduced undecided instances: the high part
    is at most 2(k+3)(k+2*ell), the rest at most 8(k+3)^2(k+2*ell)^2, and the
    independent part at most (k+ell+2) * (C(high, d-1) + C(high, d))."""
    h = 2 * (k + 3) * (k + 2 * ell)
    r = 8 * (k + 3) ** 2 * (k + 2 * ell) ** 2
    i = (k + ell + 2) * (comb(h, d - 1) + comb(h, d))
    return h + r + i


def _preliminary(instance: Instance) -> str | None:
    g, k, ell = instance.graph, instance.k, instance.ell
    if k < 0:
        return "no"
    if not g.is_connected():
        return "no"
    if is_near_tree(g, ell):
        return "yes"
    if k == 0:
        return "no"
    return None


def kernelize(instance: Instance, alpha: float) -> tuple[Instance, KernelTrace]:
    """Apply the three rules exhaustively (long paths, then twins, then common
    neighborhoods), interleaved with the basic decision rules; if the
    undecided result still exceeds the explicit size bound, the instance is a
    no (the bound holds for every yes instance) and lifting hands back the
    full edge set."""
    d = lossy_degree(alpha)
    steps: list[Step] = []
    cur = instance
    resolved = None
    while True:
        resolved = _preliminary(cur)
        if resolved is not None:
            break
        cur, step = reduce_long_paths(cur)
        if step is not None:
            steps.append(step)
            continue
        cur, step = reduce_false_twins(cur)
        if step is not None:
            steps.append(step)
            continue
        cur, step = reduce_common_neighborhood(cur, alpha)
        if step is not None:
            steps.append(step)
            continue
        break
    if resolved is None and cur.graph.n > size_bound(cur.k, cur.ell, d):
        resolved = "no"
    return cur, KernelTrace(tuple(steps), resolved)


def kernelize_exact(instance: Instance) -> tuple[Instance, KernelTrace]:
    """Only the two decision-preserving rules, to a fixed point; no size flag."""
    steps: list[Step] = []
    cur = instance
    while True:
        cur, step = reduce_long_paths(cur)
        if step is not None:
            steps.append(step)
            continue
        cur, step = reduce_false_twins(cur)
        if step is not None:
            steps.append(step)
            continue
        break
    return cur, KernelTrace(tuple(steps), None)


# ---------------------------------------------------------------------------
# replay and lifting

def replay(original: Instance, trace: KernelTrace) -> list[Instance]:
    """Forward application of the trace; returns every stage, source first.

    Raises InputError when a step does not fit the graph it is applied to,
    which is the trace/instance-mismatch guard for lifting.
    """
    stages = [original]
    cur = original
    for step in trace.steps:
        g, k, ell = cur.graph, cur.k, cur.ell
        if isinstance(step, LongPathContract):
            if step.contracted not in g.edges:
                raise InputError(f"trace mismatch: edge {step.contracted} absent")
            contracted, _ = contract_edges(g, [step.contracted])
            cur = Instance(contracted, k, ell)
        elif isinstance(step, TwinDelete):
            if step.vertex not in g.vertices:
                raise InputError(f"trace mismatch: vertex {step.vertex} absent")
            cur = Instance(g.without([step.vertex]), k, ell)
        elif isinstance(step, CommonNbrContract):
            if not frozenset(step.contracted) <= g.edges:
                raise InputError("trace mismatch: star edges absent")
            contracted, _ = contract_edges(g, step.contracted)
            cur = Instance(contracted, k - step.d + 1, ell)
        else:
            raise InputError(f"unknown step {step!r}")
        stages.append(cur)
    return stages


def _expand_through_merge(f: frozenset[Edge], pre: Graph, group: frozenset[int],
                          merged: int) -> frozenset[Edge]:
    """Rename edges of the contracted graph back into the pre-contraction
    graph: an edge at the merged vertex reattaches to the smallest group
    member adjacent to its other endpoint."""
    out = set()
    for u, v in f:
        if merged not in (u, v):
            out.add(edge(u, v))
            continue
        other = v if u == merged else u
        hosts = sorted(w for w in group if pre.has_edge(w, other))
        if not hosts:
            raise InputError(f"cannot lift edge ({u},{v}) through the contraction")
        out.add(edge(hosts[0], other))
    return frozenset(out)


def lift_solution(original: Instance, trace: KernelTrace,
                  f_reduced: frozenset[Edge] | set[Edge]) -> frozenset[Edge]:
    """Map a solution of the reduced instance back to the original one.

    Long-path and twin steps keep the edge set (modulo renaming through the
    merge); the lossy rule adds its contracted star back.  Whenever the
    running solution already exceeds the budget of the stage it solves, the
    lift gives up and returns every original edge, as does a reduced
    instance flagged no.
    """
    if trace.resolved == "no":
        return frozenset(original.graph.edges)
    stages = replay(original, trace)
    f = frozenset(edge(u, v) for u, v in f_reduced)
    if not f <= stages[-1].graph.edges:
        raise InputError("reduced solution uses edges outside the reduced graph")

    for idx in range(len(trace.steps) - 1, -1, -1):
        step = trace.steps[idx]
        pre, post = stages[idx], stages[idx + 1]
        if len(f) >= post.k + 1:
            return frozenset(original.graph.edges)
        if isinstance(step, TwinDelete):
            pass  # edges of the smaller graph are edges of the larger one
        elif isinstance(step, LongPathContract):
            group = frozenset(step.contracted)
            f = _expand_through_merge(f, pre.graph, group, step.merged)
        elif isinstance(step, CommonNbrContract):
            group = frozenset(v for e in step.contracted for v in e)
            f = _expand_through_merge(f, pre.graph, group, step.merged)
            f = f | frozenset(step.contracted)
    return f
