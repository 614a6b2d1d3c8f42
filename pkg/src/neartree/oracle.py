"""Brute-force ground truth for the contraction problem.

Deliberately dumb: enumerate candidate edge sets by increasing size, subsets
of each size in lexicographic edge order, and return the first one whose
contraction lands in the target class.  Everything else in the package is
tested against this.
"""

from __future__ import annotations

from itertools import combinations

from .errors import SizeCapError
from .graph import Edge, Graph, Instance

EDGE_CAP = 24
BUDGET_CAP = 6


def exact_opt(g: Graph, ell: int, k_max: int) -> tuple[frozenset[Edge], int] | None:
    """Smallest edge set F (|F| <= k_max) with g/F within excess ell of a tree.

    Canonical: searched by size then lexicographic edge order, so the
    returned optimum is reproducible.  Returns None when no set within the
    budget works.
    """
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    if g.m > EDGE_CAP:
        raise SizeCapError(f"oracle refuses graphs with more than {EDGE_CAP} edges (got {g.m})")
    if k_max > BUDGET_CAP:
        raise SizeCapError(f"oracle refuses budgets above {BUDGET_CAP} (got {k_max})")
    if not g.is_connected():
        return None  # contraction cannot join components

    verts = sorted(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    edges = sorted(g.edges)
    pairs = [(index[u], index[v]) for u, v in edges]
    n = len(verts)
    target_slack = ell

    for size in range(0, min(k_max, len(edges)) + 1):
        for subset in combinations(range(len(edges)), size):
            parent = list(range(n))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            nv = n
            for ei in subset:
                a, b = pairs[ei]
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
                    nv -= 1
            quotient_edges = set()
            for a, b in pairs:
                ra, rb = find(a), find(b)
                if ra != rb:
                    quotient_edges.add((ra, rb) if ra < rb else (rb, ra))
            if len(quotient_edges) <= nv - 1 + target_slack:
                return frozenset(edges[i] for i in subset), size
    return None


def exact_decide(instance: Instance) -> bool:
    """Decision form; a negative budget is always a no."""
    if instance.k < 0:
        return False
    k_eff = min(instance.k, instance.graph.m)
    return exact_opt(instance.graph, instance.ell, k_eff) is not None
