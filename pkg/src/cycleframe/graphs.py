"""Core graph model: uniform multipartite multigraphs, cycles, factors.

Vertices are (part, slot) pairs.  Edges are unordered vertex pairs stored in
normalized order with an explicit integer multiplicity, so multigraph
arithmetic (doubling, hole removal, partition checks) is plain Counter
arithmetic.  All values are immutable after construction.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

Vertex = tuple[int, int]
Edge = tuple[Vertex, Vertex]
Cycle = tuple[Vertex, ...]


class ParameterError(ValueError):
    """Arguments outside the domain a construction is defined on."""


class ExceptionalCase(ParameterError):
    """Arguments hitting a known exceptional instance of a cited result."""


class DegenerateCycleError(ParameterError):
    """A requested assembly would produce cycles shorter than 3."""


class UnsupportedBlockError(RuntimeError):
    """No construction available and the bounded search gave up."""


class ConstructionBugError(RuntimeError):
    """A built decomposition failed internal verification."""

    def __init__(self, message: str, factor_index: int | None = None):
        super().__init__(message)
        self.factor_index = factor_index


def edge_key(a: Vertex, b: Vertex) -> Edge:
    """Normalize an unordered vertex pair; loops are rejected."""
    if a == b:
        raise ParameterError(f"loop edge at {a}")
    return (a, b) if a < b else (b, a)


def tensor_adjacent(a: Vertex, b: Vertex) -> bool:
    """Adjacency rule of K_u x K_g: both coordinates must differ."""
    return a[0] != b[0] and a[1] != b[1]


@dataclass(frozen=True)
class MultiGraph:
    """Uniform multipartite multigraph: num_parts parts of part_size slots."""

    num_parts: int
    part_size: int
    edges: dict[Edge, int]
    kind: str = "custom"

    KINDS = ("tensor_complete", "lexicographic_blowup", "complete_simple",
             "complete_doubled", "custom")

    def vertices(self) -> list[Vertex]:
        return [(p, s) for p in range(self.num_parts) for s in range(self.part_size)]

    def edge_count(self) -> int:
        """Total multiset size (parallel edges counted with multiplicity)."""
        return sum(self.edges.values())

    def degree(self, v: Vertex) -> int:
        return sum(m for e, m in self.edges.items() if v in e)

    def edge_multiset(self) -> Counter[Edge]:
        return Counter(self.edges)


def tensor_complete(u: int, g: int, lam: int) -> MultiGraph:
    """(K_u x K_g)(lam): u parts of size g, edges where part and slot differ."""
    if u < 2 or g < 2 or lam < 1:
        raise ParameterError(f"tensor_complete needs u >= 2, g >= 2, lam >= 1, got {(u, g, lam)}")
    edges: dict[Edge, int] = {}
    for p1, p2 in itertools.combinations(range(u), 2):
        for s1 in range(g):
            for s2 in range(g):
                if s1 != s2:
                    edges[((p1, s1), (p2, s2))] = lam
    return MultiGraph(u, g, edges, "tensor_complete")


def multipartite_complete(u: int, g: int, lam: int) -> MultiGraph:
    """K_u (x) K̄_g with multiplicity lam: all cross-part pairs."""
    if u < 2 or g < 1 or lam < 1:
        raise ParameterError(f"multipartite_complete got {(u, g, lam)}")
    edges: dict[Edge, int] = {}
    for p1, p2 in itertools.combinations(range(u), 2):
        for s1 in range(g):
            for s2 in range(g):
                edges[((p1, s1), (p2, s2))] = lam
    return MultiGraph(u, g, edges, "lexicographic_blowup")


def complete_graph(n: int, lam: int = 1) -> MultiGraph:
    """K_n(lam) modelled as n parts of size one."""
    if n < 2 or lam < 1:
        raise ParameterError(f"complete_graph got {(n, lam)}")
    edges = {(((i, 0)), ((j, 0))): lam for i, j in itertools.combinations(range(n), 2)}
    kind = "complete_simple" if lam == 1 else "complete_doubled" if lam == 2 else "custom"
    return MultiGraph(n, 1, edges, kind)


def mcf_identity_check(u: int, g: int, lam: int = 1) -> bool:
    """Check (K_u (x) K̄_g) - g K_u == K_u x K_g as exact edge multisets.

    The g removed copies of K_u(lam) are slot-aligned: copy j joins the
    vertices (p, j) across all parts.
    """
    if u < 2 or g < 2 or lam < 1:
        raise ParameterError(f"mcf_identity_check got {(u, g, lam)}")
    remaining = Counter(multipartite_complete(u, g, lam).edges)
    for j in range(g):
        for p1, p2 in itertools.combinations(range(u), 2):
            remaining[((p1, j), (p2, j))] -= lam
    remaining = +remaining  # drop zero entries, keep negatives visible
    if any(m < 0 for m in remaining.values()):
        return False
    return remaining == Counter(tensor_complete(u, g, lam).edges)


def distance_one_factor(part_a: int, part_b: int, i: int, t: int) -> tuple[Edge, ...]:
    """F_i(A,B): the distance-i perfect matching {(A,j)(B,j+i mod t)}."""
    if not 0 <= i < t:
        raise ParameterError(f"distance {i} out of range for part size {t}")
    if part_a == part_b:
        raise ParameterError("distance factor needs two distinct parts")
    return tuple(edge_key((part_a, j), (part_b, (j + i) % t)) for j in range(t))


def canonical_cycle(vertices) -> Cycle:
    """Least rotation over both traversal directions; fixes a unique form."""
    vs = tuple(vertices)
    n = len(vs)
    best: Cycle | None = None
    for seq in (vs, vs[::-1]):
        for r in range(n):
            rot = seq[r:] + seq[:r]
            if best is None or rot < best:
                best = rot
    assert best is not None
    return best


def cycle_edges(cycle: Cycle) -> list[Edge]:
    n = len(cycle)
    return [edge_key(cycle[i], cycle[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class PartialFactor:
    """Vertex-disjoint cycles spanning everything except one hole part.

    hole is None for intermediate full 2-factors.  Cycles are stored in
    canonical form sorted, so equal factors compare equal.
    """

    cycle_length: int
    hole: int | None
    cycles: tuple[Cycle, ...]

    @staticmethod
    def build(cycle_length: int, hole: int | None, cycles) -> "PartialFactor":
        canon = tuple(sorted(canonical_cycle(c) for c in cycles))
        return PartialFactor(cycle_length, hole, canon)

    def vertex_set(self) -> set[Vertex]:
        return {v for c in self.cycles for v in c}

    def edge_multiset(self) -> Counter[Edge]:
        out: Counter[Edge] = Counter()
        for c in self.cycles:
            out.update(cycle_edges(c))
        return out


@dataclass(frozen=True)
class Decomposition:
    """Factors claimed to partition the host edge multiset exactly."""

    host: MultiGraph
    factors: tuple[PartialFactor, ...]
    provenance: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.provenance and len(self.provenance) != len(self.factors):
            raise ParameterError("provenance must carry one tag per factor")

    def edge_multiset(self) -> Counter[Edge]:
        out: Counter[Edge] = Counter()
        for f in self.factors:
            out.update(f.edge_multiset())
        return out


def assemble_from_distances(part_cycle, dv, t: int) -> PartialFactor:
    """Union of distance matchings threaded around a cycle of parts.

    dv[j] is the slot jump from part_cycle[j] to part_cycle[j+1]; the union is
    2-regular and splits into cycles of length r*t/gcd(sum(dv), t).
    """
    parts = tuple(part_cycle)
    dv = tuple(d % t for d in dv)
    r = len(parts)
    if r < 2 or len(dv) != r:
        raise ParameterError("part cycle and distance vector must have equal length >= 2")
    if len(set(parts)) != r:
        raise ParameterError("part cycle must not repeat parts")
    cycles: list[Cycle] = []
    seen = [[False] * t for _ in range(r)]
    for s0 in range(t):
        if seen[0][s0]:
            continue
        cyc: list[Vertex] = []
        pos, slot = 0, s0
        while not seen[pos][slot]:
            seen[pos][slot] = True
            cyc.append((parts[pos], slot))
            slot = (slot + dv[pos]) % t
            pos = (pos + 1) % r
        if len(cyc) < 3:
            raise DegenerateCycleError(
                f"distance vector {dv} on part size {t} closes after {len(cyc)} steps")
        cycles.append(tuple(cyc))
    lengths = {len(c) for c in cycles}
    assert len(lengths) == 1, "distance assembly must give equal cycle lengths"
    return PartialFactor.build(lengths.pop(), None, cycles)


def blow_up(factor: PartialFactor, s: int) -> MultiGraph:
    """Lexicographic blow-up of a factor's cycle union by the empty graph K̄_s.

    Each original vertex becomes a part of size s (parts ordered by the
    original vertex order); each edge becomes a complete K_{s,s} block.
    """
    if s < 1:
        raise ParameterError("blow-up factor must be >= 1")
    verts = sorted(factor.vertex_set())
    index = {v: i for i, v in enumerate(verts)}
    edges: dict[Edge, int] = {}
    for c in factor.cycles:
        for a, b in cycle_edges(c):
            pa, pb = index[a], index[b]
            for z1 in range(s):
                for z2 in range(s):
                    e = edge_key((pa, z1), (pb, z2))
                    edges[e] = edges.get(e, 0) + 1
    return MultiGraph(len(verts), s, edges, "lexicographic_blowup")
