"""File formats, instance generators, and the command-line front end.

Graph text format: first line "p <n> <m>", then m lines "e <u> <v>" with
1-based vertex ids; "c" starts a comment.  Witness structures are one bag
per line (space-separated ids).  Families carry a "family <n> <q> <kind>
<k>" header, one function per line.  Kernel traces are line-oriented step
logs that replay against the original instance.

Exit codes: 0 decided yes, 1 decided no, 2 error.  Every solver answer is
re-verified through the witness checker before it is printed.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from .errors import InputError, ParseError, SizeCapError
from .families import (
    FunctionFamily,
    build_hash_splitter,
    build_interval_splitter,
    build_universal_greedy,
    compose_universal,
    coloring_family,
    verify_family,
)
from .graph import Graph, Instance, edge
from .kernel import (
    CommonNbrContract,
    KernelTrace,
    LongPathContract,
    TwinDelete,
    kernelize,
    lift_solution,
    replay,
)
from .oracle import exact_opt
from .solver import (
    ExhaustiveColorings,
    FamilyColorings,
    RandomColorings,
    solve,
)
from .witness import (
    ContractionSolution,
    WitnessStructure,
    verify_witness,
    witness_from_solution,
)

DESK_VERTEX_CAP = 64


# ---------------------------------------------------------------------------
# graph text format

def parse_graph(text: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 3:
                raise ParseError("header must be 'p <n> <m>'", lineno)
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("header counts must be integers", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("header counts must be nonnegative", lineno)
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge before header", lineno)
            if len(parts) != 3:
                raise ParseError("edge line must be 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("edge endpoints must be integers", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"endpoint outside 1..{n}", lineno)
            if u == v:
                raise ParseError("self-loop", lineno)
            e = edge(u, v)
            if e in seen:
                raise ParseError(f"duplicate edge {e}", lineno)
            seen.add(e)
            edges.append(e)
        else:
            raise ParseError(f"unknown line kind {parts[0]!r}", lineno)
    if n is None:
        raise ParseError("missing 'p' header", 1)
    if m != len(edges):
        raise ParseError(f"header announced {m} edges, found {len(edges)}", 1)
    return Graph.build(range(1, n + 1), edges)


def serialize_graph(g: Graph) -> str:
    """Vertices renumbered 1..n in sorted-id order; round trips up to that relabeling."""
    order = sorted(g.vertices)
    rank = {v: i + 1 for i, v in enumerate(order)}
    lines = [f"p {g.n} {g.m}"]
    for u, v in sorted(edge(rank[a], rank[b]) for a, b in g.edges):
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# witness and edge-set text formats

def serialize_witness(w: WitnessStructure) -> str:
    return "\n".join(" ".join(str(v) for v in sorted(b)) for b in w.bags) + "\n"


def parse_witness(text: str) -> WitnessStructure:
    bags = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        try:
            bags.append([int(x) for x in line.split()])
        except ValueError:
            raise ParseError("bag lines hold integers", lineno) from None
    if not bags:
        raise ParseError("empty witness", 1)
    return WitnessStructure.of(bags)


def serialize_edge_set(edges) -> str:
    lines = [f"e {u} {v}" for u, v in sorted(edges)]
    return ("\n".join(lines) + "\n") if lines else ""


def parse_edge_set(text: str) -> frozenset[tuple[int, int]]:
    out = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "e":
            parts = parts[1:]
        if len(parts) != 2:
            raise ParseError("edge lines are 'e <u> <v>' or '<u> <v>'", lineno)
        try:
            out.add(edge(int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError("edge endpoints must be integers", lineno) from None
    return frozenset(out)


# ---------------------------------------------------------------------------
# family text format

def serialize_family(fam: FunctionFamily) -> str:
    lines = [f"family {fam.n} {fam.q} {fam.kind} {fam.k}"]
    for f in fam.functions:
        lines.append(" ".join(str(c) for c in f))
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> FunctionFamily:
    header = None
    funcs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "family":
            if header is not None:
                raise ParseError("duplicate family header", lineno)
            if len(parts) != 5:
                raise ParseError("header must be 'family <n> <q> <kind> <k>'", lineno)
            try:
                header = (int(parts[1]), int(parts[2]), parts[3], int(parts[4]))
            except ValueError:
                raise ParseError("family header fields must be numeric", lineno) from None
        else:
            if header is None:
                raise ParseError("function line before family header", lineno)
            try:
                funcs.append(tuple(int(x) for x in parts))
            except ValueError:
                raise ParseError("function lines hold integers", lineno) from None
            if len(funcs[-1]) != header[0]:
                raise ParseError(f"function length differs from n={header[0]}", lineno)
    if header is None:
        raise ParseError("missing family header", 1)
    n, q, kind, k = header
    return FunctionFamily(n, q, kind, k, tuple(funcs))


# ---------------------------------------------------------------------------
# kernel trace text format

def serialize_trace(original: Instance, reduced: Instance, trace: KernelTrace) -> str:
    lines = [
        "c kernel trace",
        f"instance k {original.k} ell {original.ell}",
        f"reduced-k {reduced.k}",
        f"resolved {trace.resolved or 'none'}",
    ]
    for step in trace.steps:
        if isinstance(step, LongPathContract):
            u, v = step.contracted
            lines.append(f"step longpath {u} {v}")
        elif isinstance(step, TwinDelete):
            ns = " ".join(str(x) for x in sorted(step.neighborhood))
            lines.append(f"step twin {step.vertex} {ns}")
        elif isinstance(step, CommonNbrContract):
            flat = " ".join(f"{u} {v}" for u, v in step.contracted)
            lines.append(f"step commonnbr {step.d} {flat}")
    return "\n".join(lines) + "\n"


def parse_trace(text: str) -> tuple[int, int, KernelTrace]:
    """Returns (original k, ell, trace); the reduced budget is re-derived by replay."""
    k = ell = None
    resolved: str | None = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "instance":
            k, ell = int(parts[2]), int(parts[4])
        elif parts[0] == "reduced-k":
            pass  # derivable
        elif parts[0] == "resolved":
            resolved = None if parts[1] == "none" else parts[1]
        elif parts[0] == "step" and parts[1] == "longpath":
            steps.append(LongPathContract(edge(int(parts[2]), int(parts[3])),
                                          min(int(parts[2]), int(parts[3]))))
        elif parts[0] == "step" and parts[1] == "twin":
            steps.append(TwinDelete(int(parts[2]), frozenset(int(x) for x in parts[3:])))
        elif parts[0] == "step" and parts[1] == "commonnbr":
            d = int(parts[2])
            flat = [int(x) for x in parts[3:]]
            pairs = tuple(edge(flat[i], flat[i + 1]) for i in range(0, len(flat), 2))
            steps.append(CommonNbrContract(pairs, d, min(v for e in pairs for v in e)))
        else:
            raise ParseError(f"unknown trace line {parts[0]!r}", lineno)
    if k is None or ell is None:
        raise ParseError("trace missing instance line", 1)
    return k, ell, KernelTrace(tuple(steps), resolved)


# ---------------------------------------------------------------------------
# instance generators

def gen_hardness_gadget(g: Graph, k: int, ell: int) -> Instance:
    """Attach ell cycles of length k + 2, pairwise meeting at the lowest-id
    vertex.  Transfers the tree-contraction decision of (g, k) to the
    excess-ell problem: the new cycles are never touched by a minimal
    solution and absorb the excess budget exactly."""
    if not g.is_connected():
        raise InputError("gadget base must be connected")
    if ell < 1:
        raise InputError("gadget needs ell >= 1")
    if k < 1:
        raise InputError("gadget needs k >= 1 (length-2 cycles would collapse)")
    anchor = min(g.vertices)
    fresh = max(g.vertices) + 1
    verts = set(g.vertices)
    edges = set(g.edges)
    for _ in range(ell):
        ring = [fresh + i for i in range(k + 1)]
        fresh += k + 1
        verts.update(ring)
        chain = [anchor, *ring, anchor]
        for i in range(len(chain) - 1):
            edges.add(edge(chain[i], chain[i + 1]))
    return Instance(Graph(frozenset(verts), frozenset(edges)), k, ell)


def gen_random_instance(n: int, edge_prob: float, k: int, ell: int, seed: int) -> Instance:
    """Connected Erdos-Renyi-style graph, resampled until connected."""
    if not 0 < edge_prob <= 1:
        raise InputError("edge probability must be in (0, 1]")
    if n < 1 or n > DESK_VERTEX_CAP:
        raise InputError(f"n must be in 1..{DESK_VERTEX_CAP}")
    rng = random.Random(seed)
    while True:
        edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
                 if rng.random() < edge_prob]
        g = Graph.build(range(1, n + 1), edges)
        if g.is_connected():
            return Instance(g, k, ell)


# ---------------------------------------------------------------------------
# command line

@dataclass
class RunConfig:
    mode: str
    k: int = 0
    ell: int = 0
    alpha: float = 2.0
    seed: int = 0
    iters: int | None = None
    infile: str | None = None
    out: str | None = None
    trace: str | None = None
    family_file: str | None = None
    witness: str | None = None
    sol: str | None = None
    kind: str = "universal"
    n: int = 0
    q: int = 0
    fam_k: int = 0


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str):
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _result_line(decision: bool, cost: int, mode: str, seed: int, extra: str = "") -> str:
    base = f"result decision={'yes' if decision else 'no'} cost={cost} mode={mode} seed={seed}"
    return base + (f" {extra}" if extra else "")


def _emit_solution(cfg: RunConfig, g: Graph, sol: ContractionSolution | None) -> int:
    if sol is None:
        print(_result_line(False, cfg.k + 1, cfg.mode, cfg.seed))
        return 1
    structure = witness_from_solution(g, sol.edges)
    check = verify_witness(g, structure, cfg.ell, cfg.k)
    if not check.valid:
        print(f"error: solver produced a non-verifying witness ({check.reason})", file=sys.stderr)
        return 2
    _write(cfg.out, serialize_witness(structure))
    listing = ",".join(f"{u}-{v}" for u, v in sorted(sol.edges)) or "none"
    print(_result_line(True, sol.cost, cfg.mode, cfg.seed, extra=f"edges={listing}"))
    return 0


def run(cfg: RunConfig) -> int:
    if cfg.mode == "exact":
        g = parse_graph(_read(cfg.infile))
        res = exact_opt(g, cfg.ell, min(cfg.k, g.m))
        sol = ContractionSolution.of(res[0], cfg.k) if res is not None else None
        return _emit_solution(cfg, g, sol)

    if cfg.mode in ("rand", "exhaustive", "derand"):
        g = parse_graph(_read(cfg.infile))
        if cfg.mode == "rand":
            mode = RandomColorings(cfg.seed, cfg.iters)
        elif cfg.mode == "exhaustive":
            mode = ExhaustiveColorings()
        else:
            if cfg.family_file:
                fam = parse_family(_read(cfg.family_file))
            else:
                fam = coloring_family(max(g.vertices), cfg.k, cfg.ell, seed=cfg.seed)
            mode = FamilyColorings(fam.functions, fam.n)
        sol = solve(Instance(g, cfg.k, cfg.ell), mode)
        return _emit_solution(cfg, g, sol)

    if cfg.mode == "verify":
        g = parse_graph(_read(cfg.infile))
        w = parse_witness(_read(cfg.witness))
        check = verify_witness(g, w, cfg.ell, cfg.k)
        print(_result_line(check.valid, check.cost, cfg.mode, cfg.seed)
              + ("" if check.valid else f" reason={check.reason}"))
        return 0 if check.valid else 1

    if cfg.mode == "kernel":
        g = parse_graph(_read(cfg.infile))
        original = Instance(g, cfg.k, cfg.ell)
        reduced, trace = kernelize(original, cfg.alpha)
        _write(cfg.out, serialize_graph(reduced.graph))
        _write(cfg.trace, serialize_trace(original, reduced, trace))
        decided_no = trace.resolved == "no"
        print(_result_line(not decided_no, reduced.k if not decided_no else cfg.k + 1,
                           cfg.mode, cfg.seed)
              + f" reduced_n={reduced.graph.n} reduced_k={reduced.k} resolved={trace.resolved or 'none'}")
        return 1 if decided_no else 0

    if cfg.mode == "lift":
        g = parse_graph(_read(cfg.infile))
        k0, ell0, trace = parse_trace(_read(cfg.trace))
        f_reduced = parse_edge_set(_read(cfg.sol))
        original = Instance(g, k0, ell0)
        # the reduced graph was written renumbered 1..n; translate the
        # solution back into the trace's (original merged) ids
        reduced_graph = replay(original, trace)[-1].graph
        order = sorted(reduced_graph.vertices)
        if f_reduced and max(v for e in f_reduced for v in e) <= len(order):
            back = {i + 1: v for i, v in enumerate(order)}
            f_reduced = frozenset(edge(back[u], back[v]) for u, v in f_reduced)
        lifted = lift_solution(original, trace, f_reduced)
        check = verify_witness(g, witness_from_solution(g, lifted), ell0, k0)
        _write(cfg.out, serialize_edge_set(lifted))
        print(_result_line(check.valid, min(len(lifted), k0 + 1), cfg.mode, cfg.seed))
        return 0 if check.valid else 1

    if cfg.mode == "family":
        if cfg.family_file and not cfg.out:
            fam = parse_family(_read(cfg.family_file))
            ok = verify_family(fam)
            print(_result_line(ok, len(fam), cfg.mode, cfg.seed))
            return 0 if ok else 1
        builders = {
            "interval": lambda: build_interval_splitter(cfg.n, cfg.fam_k, cfg.q),
            "hash": lambda: build_hash_splitter(cfg.n, cfg.fam_k),
            "universal": lambda: build_universal_greedy(cfg.n, cfg.fam_k, cfg.q, seed=cfg.seed),
            "compose": lambda: compose_universal(cfg.n, cfg.fam_k, cfg.q, seed=cfg.seed),
        }
        if cfg.kind not in builders:
            raise InputError(f"unknown family kind {cfg.kind!r}")
        fam = builders[cfg.kind]()
        _write(cfg.out, serialize_family(fam))
        print(_result_line(True, len(fam), cfg.mode, cfg.seed))
        return 0

    raise InputError(f"unknown mode {cfg.mode!r}")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="neartree",
        description="contract a graph to within ell extra edges of a tree",
    )
    p.add_argument("--mode", required=True,
                   choices=["exact", "rand", "exhaustive", "derand", "kernel",
                            "lift", "verify", "family"])
    p.add_argument("--k", type=int, default=0, help="contraction budget")
    p.add_argument("--ell", type=int, default=0, help="excess-edge allowance")
    p.add_argument("--alpha", type=float, default=2.0, help="lossy factor (> 1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iters", type=int, default=None, help="random-mode colorings")
    p.add_argument("--in", dest="infile", default=None, help="input graph ('-' = stdin)")
    p.add_argument("--out", default=None, help="output file (witness / reduced graph / family)")
    p.add_argument("--trace", default=None, help="kernel trace file")
    p.add_argument("--family-file", default=None, help="family file to load or verify")
    p.add_argument("--witness", default=None, help="witness file for --mode verify")
    p.add_argument("--sol", default=None, help="reduced-solution edge list for --mode lift")
    p.add_argument("--kind", default="universal",
                   choices=["interval", "hash", "universal", "compose"],
                   help="family builder for --mode family")
    p.add_argument("--n", type=int, default=0, help="family domain size")
    p.add_argument("--q", type=int, default=0, help="family range size")
    p.add_argument("--fam-k", type=int, default=0, help="family subset size")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = RunConfig(mode=args.mode, k=args.k, ell=args.ell, alpha=args.alpha,
                    seed=args.seed, iters=args.iters, infile=args.infile,
                    out=args.out, trace=args.trace, family_file=args.family_file,
                    witness=args.witness, sol=args.sol, kind=args.kind,
                    n=args.n, q=args.q, fam_k=args.fam_k)
    try:
        return run(cfg)
    except (InputError, ParseError, SizeCapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
