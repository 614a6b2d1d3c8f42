"""Coloring-driven solver for contracting a graph to a near-tree.

Two-connected graphs are solved by iterating vertex colorings with at most
2*ceil(sqrt(ell)) + 2 colors: the monochromatic components of a coloring are
classified (contract whole, keep as singletons, or split via a minimum
shatter), assembled into a witness structure, and accepted when the cost
fits the budget and the quotient lands in the class.  General graphs reduce
to the two-connected case through rejection rules, degree-one deletion and
branching at cut vertices.

Soundness is unconditional: every returned solution is re-verified before it
leaves this module.  Completeness of exhaustive mode rests on the fact that
the refinement outcome depends on a coloring only through its monochromatic
components, so it suffices to enumerate partitions of the vertex set into
connected blocks whose block-adjacency graph is properly colorable with the
palette at hand; those are exactly the component partitions of all q^n
colorings, and there are far fewer of them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .cvc import boundary, min_shatter
from .errors import InputError, SizeCapError
from .graph import (
    Edge,
    Graph,
    Instance,
    analyze_connectivity,
    contract_edges,
    is_near_tree,
    palette_size,
)
from .oracle import exact_opt
from .witness import (
    ContractionSolution,
    WitnessStructure,
    quotient,
    solution_edges,
    verify_witness,
    witness_from_solution,
)

EXHAUSTIVE_VERTEX_CAP = 10


# ---------------------------------------------------------------------------
# modes

@dataclass(frozen=True)
class RandomColorings:
    seed: int
    iterations: int | None = None  # None: min(class bound, 10 * q^n)


@dataclass(frozen=True)
class ExhaustiveColorings:
    pass


@dataclass(frozen=True)
class FamilyColorings:
    """Iterate an explicit list of colorings, e.g. a universal family."""

    functions: tuple[tuple[int, ...], ...]
    domain: int  # functions map [domain] -> colors; vertex ids must be <= domain

    @cached_property
    def distinct(self) -> tuple[tuple[int, ...], ...]:
        """One representative per induced partition of the domain.

        The refinement outcome of a coloring depends only on its color
        classes, and a partition of the domain fixes the partition of every
        subset, so functions sharing a partition are interchangeable
        everywhere in the recursion.  First occurrence wins.
        """
        seen: set[tuple[int, ...]] = set()
        out = []
        for f in self.functions:
            relabel: dict[int, int] = {}
            sig = []
            for c in f:
                if c not in relabel:
                    relabel[c] = len(relabel)
                sig.append(relabel[c])
            key = tuple(sig)
            if key not in seen:
                seen.add(key)
                out.append(f)
        return tuple(out)


def default_iterations(g: Graph, k: int, ell: int) -> int:
    """min((2*ceil(sqrt(ell)) + 2)^(6k + 8*ell), 10 * q^n); both are fall-backs,
    explicit iteration counts are preferred."""
    q = palette_size(ell)
    return min(q ** (6 * k + 8 * ell), 10 * q ** g.n)


# ---------------------------------------------------------------------------
# colorings and their components

@dataclass(frozen=True)
class Coloring:
    """Total color assignment with a declared palette size."""

    assignment: tuple[tuple[int, int], ...]  # sorted (vertex, color) pairs
    q: int

    @staticmethod
    def of(mapping: dict[int, int], q: int) -> "Coloring":
        if any(c < 1 or c > q for c in mapping.values()):
            raise InputError("color outside the declared palette")
        return Coloring(tuple(sorted(mapping.items())), q)

    def as_dict(self) -> dict[int, int]:
        return dict(self.assignment)


def monochromatic_components(g: Graph, coloring: Coloring) -> list[frozenset[int]]:
    """Maximal connected same-color vertex sets; a partition of V, sorted by min id."""
    colors = coloring.as_dict()
    if set(colors) != set(g.vertices):
        raise InputError("coloring must be total on the vertex set")
    comps: list[frozenset[int]] = []
    seen: set[int] = set()
    for start in sorted(g.vertices):
        if start in seen:
            continue
        c = colors[start]
        comp = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if y not in comp and colors[y] == c:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


# ---------------------------------------------------------------------------
# component classification (contract-all / all-singletons / shatter)

CONTRACT_ALL = "contract-all"
ALL_SINGLETONS = "all-singletons"
SHATTER = "shatter"


@dataclass(frozen=True)
class ComponentCase:
    kind: str  # CONTRACT_ALL | ALL_SINGLETONS | SHATTER
    component: frozenset[int]
    boundary: frozenset[int] | None = None  # only for SHATTER


def _induced_path_ends(g: Graph, x: frozenset[int]) -> tuple[int, int] | None:
    """If G[x] is a path, return its two end vertices."""
    sub = g.subgraph(x)
    if sub.m != len(x) - 1 or not sub.is_connected():
        return None
    ends = [v for v in x if sub.degree(v) == 1]
    if len(ends) != 2:
        return None
    return min(ends), max(ends)


def classify_component(g: Graph, x: frozenset[int],
                       partition: list[frozenset[int]]) -> ComponentCase:
    """Decide how a monochromatic component contributes witness bags.

    Contract whole: G[x] is an induced path whose interior vertices all have
    degree 2 in g and some single other block of the partition is adjacent
    to both path ends.  All singletons: same path shape but no such block.
    Everything else: shatter.  Size-1 components are trivially singletons.
    """
    if len(x) == 1:
        return ComponentCase(ALL_SINGLETONS, x)
    ends = _induced_path_ends(g, x)
    if ends is not None:
        a, b = ends
        interior = x - {a, b}
        if all(g.degree(v) == 2 for v in interior):
            for other in partition:
                if other == x:
                    continue
                if (g.neighbors(a) & other) and (g.neighbors(b) & other):
                    return ComponentCase(CONTRACT_ALL, x)
            return ComponentCase(ALL_SINGLETONS, x)
    return ComponentCase(SHATTER, x, boundary(g, x))


# ---------------------------------------------------------------------------
# refining a component partition into a witness structure

def _refine_components(g: Graph, comps: tuple[frozenset[int], ...]) -> tuple[WitnessStructure, int]:
    """Minimum-cost witness structure obtainable from this component partition.

    Phase 1 repeatedly contracts whole contract-all components; the working
    graph is re-contracted before the next classification since degrees and
    adjacencies change.  Phase 2 turns the survivors into singleton bags or
    minimum shatters.  Budget and class membership are the caller's problem:
    the result is the cheapest witness this partition can yield.
    """
    work = g
    preimage: dict[int, frozenset[int]] = {v: frozenset({v}) for v in g.vertices}
    parts: list[frozenset[int]] = sorted(comps, key=min)

    while True:
        chosen = None
        for x in parts:
            if len(x) >= 2 and classify_component(work, x, parts).kind == CONTRACT_ALL:
                chosen = x
                break
        if chosen is None:
            break
        spanning = sorted(work.subgraph(chosen).edges)
        work, _ = contract_edges(work, spanning)
        rep = min(chosen)
        preimage[rep] = frozenset().union(*(preimage[v] for v in chosen))
        parts = [p if p != chosen else frozenset({rep}) for p in parts]

    bags: list[frozenset[int]] = []
    for x in sorted(parts, key=min):
        case = classify_component(work, x, parts)
        if case.kind == SHATTER:
            sh = min_shatter(work, x, budget=len(x))
            assert sh is not None  # the whole component is always a feasible core
            bags.append(frozenset().union(*(preimage[v] for v in sh.core)))
            bags.extend(preimage[v] for v in sorted(sh.singletons))
        else:
            # contract-all is exhausted by phase 1; only singletons remain
            bags.extend(preimage[v] for v in sorted(x))

    structure = WitnessStructure.of(bags)
    return structure, structure.cost()


def refine_coloring(g: Graph, coloring: Coloring, k: int, ell: int,
                    ) -> tuple[WitnessStructure, int] | None:
    """Witness structure extracted from one coloring, or None if it costs more
    than k or its quotient is not within excess ell of a tree."""
    comps = tuple(monochromatic_components(g, coloring))
    structure, cost = _refine_components(g, comps)
    if cost > k:
        return None
    if not is_near_tree(quotient(g, structure), ell):
        return None
    return structure, cost


# ---------------------------------------------------------------------------
# exhaustive enumeration of coloring-distinct component partitions

def _mask_refs(g: Graph) -> tuple[list[int], list[int]]:
    verts = sorted(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * len(verts)
    for u, v in g.edges:
        adj[index[u]] |= 1 << index[v]
        adj[index[v]] |= 1 << index[u]
    return verts, adj


def _connected_mask(mask: int, adj: list[int]) -> bool:
    span = mask & -mask
    while True:
        grow = span
        m = span
        while m:
            b = m & -m
            grow |= adj[b.bit_length() - 1] & mask
            m ^= b
        if grow == span:
            break
        span = grow
    return span == mask


def _connected_blocks_with_min(rest: int, adj: list[int]) -> list[int]:
    """All connected subsets of `rest` containing its lowest bit."""
    low = rest & -rest
    others = rest ^ low
    out = []
    sub = others
    while True:
        cand = sub | low
        if _connected_mask(cand, adj):
            out.append(cand)
        if sub == 0:
            break
        sub = (sub - 1) & others
    return sorted(out)


def _mask_to_set(mask: int, verts: list[int]) -> frozenset[int]:
    out = set()
    while mask:
        b = mask & -mask
        out.add(verts[b.bit_length() - 1])
        mask ^= b
    return frozenset(out)


@lru_cache(maxsize=64)
def _partition_table(g: Graph):
    """All partitions of V(g) into connected blocks, with the chromatic number
    of the block-adjacency graph and the refinement outcome of each.

    Entries are (block_masks, block_chromatic, cost, quotient_n, quotient_m),
    independent of (k, ell): deciding an instance is a scan for the first
    entry with block_chromatic <= palette, cost <= k and quotient excess
    <= ell.  The witness itself is re-derived on selection to keep the cache
    small.
    """
    verts, adj = _mask_refs(g)
    full = (1 << len(verts)) - 1
    partitions: list[tuple[int, ...]] = []

    def rec(rest: int, acc: list[int]):
        if rest == 0:
            partitions.append(tuple(acc))
            return
        for block in _connected_blocks_with_min(rest, adj):
            acc.append(block)
            rec(rest ^ block, acc)
            acc.pop()

    rec(full, [])

    table = []
    for masks in partitions:
        blocks = tuple(sorted((_mask_to_set(m, verts) for m in masks), key=min))
        chi = _block_chromatic(masks, adj)
        structure, cost = _refine_components(g, blocks)
        q = quotient(g, structure)
        table.append((masks, chi, cost, q.n, q.m))
    return verts, tuple(table)


@lru_cache(maxsize=64)
def _partition_lookup(g: Graph) -> dict[frozenset[frozenset[int]], tuple[int, int, int]]:
    """Partition -> (cost, quotient_n, quotient_m), derived from the table.

    Lets the coloring modes skip re-refinement: a coloring's component
    partition is always a partition into connected blocks, so it has a table
    entry.
    """
    verts, table = _partition_table(g)
    out = {}
    for masks, _, cost, qn, qm in table:
        blocks = frozenset(_mask_to_set(m, verts) for m in masks)
        out[blocks] = (cost, qn, qm)
    return out


def _block_chromatic(masks: tuple[int, ...], adj: list[int]) -> int:
    """Chromatic number of the block-adjacency graph (exact; tiny inputs)."""
    t = len(masks)
    nbr = [0] * t
    for i in range(t):
        mi = masks[i]
        reach = 0
        m = mi
        while m:
            b = m & -m
            reach |= adj[b.bit_length() - 1]
            m ^= b
        for j in range(i + 1, t):
            if reach & masks[j]:
                nbr[i] |= 1 << j
                nbr[j] |= 1 << i

    order = sorted(range(t), key=lambda i: -bin(nbr[i]).count("1"))
    colors = [0] * t

    def colorable(limit: int, pos: int) -> bool:
        if pos == t:
            return True
        i = order[pos]
        used = set()
        m = nbr[i]
        while m:
            b = m & -m
            used.add(colors[b.bit_length() - 1])
            m ^= b
        fresh_cap = max((colors[j] for j in order[:pos]), default=0) + 1
        for c in range(1, limit + 1):
            if c in used:
                continue
            colors[i] = c
            if colorable(limit, pos + 1):
                return True
            colors[i] = 0
            if c >= fresh_cap:
                break  # all unused colors above the current max are symmetric
        return False

    for limit in range(1, t + 1):
        if colorable(limit, 0):
            return limit
    return t


# ---------------------------------------------------------------------------
# two-connected solving

def _finish(g: Graph, structure: WitnessStructure, k: int, ell: int) -> ContractionSolution:
    edges = solution_edges(g, structure)
    check = verify_witness(g, structure, ell, k)
    assert check.valid, f"internal: refined witness failed verification ({check.reason})"
    return ContractionSolution.of(edges, k)


def solve_2connected(g: Graph, k: int, ell: int,
                     mode: RandomColorings | ExhaustiveColorings | FamilyColorings,
                     ) -> ContractionSolution | None:
    """Solve on a 2-connected graph, plus the small cases the coloring argument
    skips: graphs already in the class, and graphs small enough that the
    target quotient could have fewer than 3 vertices, which go to the oracle.

    Never returns a false positive: every candidate witness is re-verified.
    """
    if k < 0:
        return None
    if is_near_tree(g, ell):
        return ContractionSolution.of(frozenset(), k)
    if g.n <= k + 2:
        res = exact_opt(g, ell, min(k, g.m))
        if res is None:
            return None
        return ContractionSolution.of(res[0], k)
    if not analyze_connectivity(g).is_two_connected:
        raise InputError("coloring solver requires a 2-connected graph")

    q = palette_size(ell)

    if isinstance(mode, ExhaustiveColorings):
        if g.n > EXHAUSTIVE_VERTEX_CAP:
            raise SizeCapError(
                f"exhaustive mode is capped at {EXHAUSTIVE_VERTEX_CAP} vertices (got {g.n})")
        verts, table = _partition_table(g)
        for masks, chi, cost, qn, qm in table:
            if chi <= q and cost <= k and qm <= qn - 1 + ell:
                blocks = tuple(sorted((_mask_to_set(m, verts) for m in masks), key=min))
                structure, _ = _refine_components(g, blocks)
                return _finish(g, structure, k, ell)
        return None

    seen: dict[tuple[frozenset[int], ...], tuple[WitnessStructure, int]] = {}
    # families revisit the same graph across budgets and recursion levels, so
    # their refinement outcomes come from the shared partition table
    lookup = (_partition_lookup(g)
              if isinstance(mode, FamilyColorings) and g.n <= EXHAUSTIVE_VERTEX_CAP
              else None)

    def try_coloring(colors: dict[int, int], palette: int) -> ContractionSolution | None:
        comps = tuple(monochromatic_components(g, Coloring.of(colors, palette)))
        if lookup is not None:
            cost, qn, qm = lookup[frozenset(comps)]
            if cost > k or qm > qn - 1 + ell:
                return None
            structure, _ = _refine_components(g, comps)
            return _finish(g, structure, k, ell)
        if comps not in seen:
            seen[comps] = _refine_components(g, comps)
        structure, cost = seen[comps]
        if cost <= k and is_near_tree(quotient(g, structure), ell):
            return _finish(g, structure, k, ell)
        return None

    if isinstance(mode, RandomColorings):
        rng = random.Random(mode.seed)
        iters = mode.iterations if mode.iterations is not None else default_iterations(g, k, ell)
        verts = sorted(g.vertices)
        for _ in range(iters):
            colors = {v: rng.randint(1, q) for v in verts}
            hit = try_coloring(colors, q)
            if hit is not None:
                return hit
        return None

    if isinstance(mode, FamilyColorings):
        if max(g.vertices) > mode.domain:
            raise InputError("family domain too small for the vertex ids")
        # a family built for a larger excess allowance may color past this
        # level's palette; extra colors only split components further, which
        # is sound (re-verified) and keeps the realized-assignment argument
        wide = max(q, max((max(f) for f in mode.distinct), default=q))
        tried: set[tuple[int, ...]] = set()
        for f in mode.distinct:
            colors = {v: f[v - 1] for v in g.vertices}
            signature = _partition_signature(colors)
            if signature in tried:
                continue
            tried.add(signature)
            hit = try_coloring(colors, wide)
            if hit is not None:
                return hit
        return None

    raise InputError(f"unknown mode {mode!r}")


def _partition_signature(colors: dict[int, int]) -> tuple[int, ...]:
    """Color classes as a restricted-growth string, for deduplication."""
    relabel: dict[int, int] = {}
    out = []
    for v in sorted(colors):
        c = colors[v]
        if c not in relabel:
            relabel[c] = len(relabel)
        out.append(relabel[c])
    return tuple(out)


# ---------------------------------------------------------------------------
# general graphs: rejection rules, leaf deletion, cut-vertex branching

def solve(instance: Instance,
          mode: RandomColorings | ExhaustiveColorings | FamilyColorings,
          ) -> ContractionSolution | None:
    """Full solver.  Returned solutions always verify against the instance."""
    cache: dict[tuple[Graph, int, int], frozenset[Edge] | None] = {}
    edges = _solve_rec(instance.graph, instance.k, instance.ell, mode, cache)
    if edges is None:
        return None
    check = verify_witness(instance.graph, witness_from_solution(instance.graph, edges),
                           instance.ell, instance.k)
    assert check.valid, f"internal: solver output failed verification ({check.reason})"
    return ContractionSolution.of(edges, instance.k)


def _solve_rec(g: Graph, k: int, ell: int, mode, cache) -> frozenset[Edge] | None:
    key = (g, k, ell)
    if key not in cache:
        cache[key] = _solve_uncached(g, k, ell, mode, cache)
    return cache[key]


def _solve_uncached(g: Graph, k: int, ell: int, mode, cache) -> frozenset[Edge] | None:
    if k < 0:
        return None
    if is_near_tree(g, ell):
        return frozenset()
    if not g.is_connected() or k == 0:
        return None

    # a strictly smaller excess allowance may already suffice
    for smaller in range(ell):
        hit = _solve_rec(g, k, smaller, mode, cache)
        if hit is not None:
            return hit

    # degree-one vertices never host contracted edges; drop them one at a time
    leaves = sorted(v for v in g.vertices if g.degree(v) == 1)
    if leaves:
        return _solve_rec(g.without([leaves[0]]), k, ell, mode, cache)

    report = analyze_connectivity(g)
    if report.is_two_connected:
        sol = solve_2connected(g, k, ell, mode)
        return sol.edges if sol is not None else None

    # cut vertex: split into the lowest-id side and the rest
    v = min(report.cut_vertices)
    pieces = g.without([v]).components()
    c1 = min(pieces, key=min)
    g1 = g.subgraph(c1 | {v})
    g2 = g.without(c1)

    # both sides keep positive excess
    for ell1 in range(1, ell):
        ell2 = ell - ell1
        for k1 in range(0, k + 1):
            f1 = _solve_rec(g1, k1, ell1, mode, cache)
            if f1 is None:
                continue
            f2 = _solve_rec(g2, k - k1, ell2, mode, cache)
            if f2 is not None:
                return f1 | f2

    # otherwise one side must end up a tree; spend its exact tree budget first
    for tree_side, other_side in ((g1, g2), (g2, g1)):
        found = None
        for t in range(0, k + 1):
            f_tree = _solve_rec(tree_side, t, 0, mode, cache)
            if f_tree is not None:
                found = (t, f_tree)
                break
        if found is None:
            continue
        t, f_tree = found
        f_other = _solve_rec(other_side, k - t, ell, mode, cache)
        if f_other is not None:
            return f_tree | f_other
    return None
