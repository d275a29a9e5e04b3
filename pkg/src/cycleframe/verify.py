"""Construction-agnostic verification of claimed decompositions.

Nothing here consults provenance or trusts the builders: hosts are rebuilt
from parameters, adjacency is re-derived from the product definition, and
edge accounting is exact multiset equality.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from . import search
from .graphs import (Decomposition, Edge, MultiGraph, PartialFactor,
                     UnsupportedBlockError, Vertex, cycle_edges,
                     tensor_complete)


@dataclass(frozen=True)
class Result:
    ok: bool
    reason: str | None = None
    path: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    @staticmethod
    def failure(reason: str, **path) -> "Result":
        return Result(False, reason, dict(path))


OK = Result(True)


def verify_partial_factor(factor: PartialFactor, host: MultiGraph, k: int) -> Result:
    """Cycles of length k, disjoint, on host edges, spanning all but the hole."""
    seen: set[Vertex] = set()
    for ci, cyc in enumerate(factor.cycles):
        if len(cyc) != k:
            return Result.failure("cycle length mismatch", factor_cycle=ci,
                                  expected=k, actual=len(cyc))
        if len(set(cyc)) != len(cyc):
            return Result.failure("repeated vertex in cycle", factor_cycle=ci)
        for v in cyc:
            if v in seen:
                return Result.failure("cycles share a vertex", factor_cycle=ci, vertex=v)
            if not (0 <= v[0] < host.num_parts and 0 <= v[1] < host.part_size):
                return Result.failure("vertex outside host", factor_cycle=ci, vertex=v)
        seen.update(cyc)
        for e in cycle_edges(cyc):
            if e not in host.edges:
                return Result.failure("edge not in host", factor_cycle=ci, edge=e)
    expected = {(p, s) for p in range(host.num_parts) for s in range(host.part_size)
                if p != factor.hole}
    if seen != expected:
        missing = sorted(expected - seen)[:3]
        extra = sorted(seen - expected)[:3]
        return Result.failure("span mismatch", missing=missing, extra=extra)
    return OK


def check_partition(host: MultiGraph, factors) -> Result:
    """Exact multiset partition check plus per-factor structural validity."""
    total: Counter[Edge] = Counter()
    for fi, factor in enumerate(factors):
        r = verify_partial_factor(factor, host, factor.cycle_length)
        if not r:
            return Result(False, r.reason, {"factor": fi, **r.path})
        total.update(factor.edge_multiset())
    return _compare_multisets(total, Counter(host.edges))


def _compare_multisets(claimed: Counter[Edge], expected: Counter[Edge]) -> Result:
    for e in sorted(set(claimed) | set(expected)):
        c, x = claimed.get(e, 0), expected.get(e, 0)
        if c > x:
            return Result.failure("edge over-covered", edge=e, claimed=c, expected=x)
        if c < x:
            return Result.failure("edge under-covered", edge=e, claimed=c, expected=x)
    return OK


def verify_arcs(dec: Decomposition, params) -> Result:
    """Is `dec` exactly a k-ARCS of (K_u x K_g)(lambda)?

    Checks, in order: every factor is a partial C_k-factor (hole present,
    k-cycles, tensor edges only), the factor edges sum to the host multiset
    exactly, the factor count matches lambda*u*(g-1)/2, and every part is the
    hole of exactly lambda*(g-1)/2 factors.
    """
    lam, k, u, g = params.lam, params.k, params.u, params.g
    host = tensor_complete(u, g, lam)
    total: Counter[Edge] = Counter()
    hole_counts: Counter[int] = Counter()
    for fi, factor in enumerate(dec.factors):
        if factor.hole is None or not (0 <= factor.hole < u):
            return Result.failure("factor missing a valid hole", factor=fi)
        r = verify_partial_factor(factor, host, k)
        if not r:
            return Result(False, r.reason, {"factor": fi, **r.path})
        hole_counts[factor.hole] += 1
        total.update(factor.edge_multiset())
    r = _compare_multisets(total, Counter(host.edges))
    if not r:
        return r
    want_total = lam * u * (g - 1) // 2
    if len(dec.factors) != want_total:
        return Result.failure("factor count mismatch",
                              expected=want_total, actual=len(dec.factors))
    want_per_hole = lam * (g - 1) // 2
    for p in range(u):
        if hole_counts[p] != want_per_hole:
            return Result.failure("per-hole count mismatch", part=p,
                                  expected=want_per_hole, actual=hole_counts[p])
    return OK


@dataclass(frozen=True)
class BruteForceOutcome:
    status: str  # "found" | "infeasible" | "exhausted"
    decomposition: Decomposition | None = None


def brute_force_arcs(params, budget: int = search.DEFAULT_BUDGET) -> BruteForceOutcome:
    """Exact-cover search for any k-ARCS, independent of the constructions.

    Only the counting necessities short-circuit the search; no case analysis
    is consulted, so this doubles as an oracle for tiny exception probes.
    """
    lam, k, u, g = params.lam, params.k, params.u, params.g
    if u < 3 or g < 2 or (lam * (g - 1)) % 2 != 0 or (g * (u - 1)) % k != 0:
        return BruteForceOutcome("infeasible")
    host = tensor_complete(u, g, lam)
    per_hole = lam * (g - 1) // 2
    vertices = frozenset(host.vertices())
    specs = []
    for hole in range(u):
        span = frozenset(v for v in vertices if v[0] != hole)
        specs.extend([(span, k)] * per_hole)
    try:
        raw = search.decompose_into_factors(Counter(host.edges), specs, budget)
    except UnsupportedBlockError:
        return BruteForceOutcome("exhausted")
    factors = []
    for (span, _), cycles in zip(specs, raw):
        hole = next(p for p in range(u) if (p, 0) not in span)
        factors.append(PartialFactor.build(k, hole, cycles))
    dec = Decomposition(host, tuple(factors), tuple("exact_cover" for _ in factors))
    check = verify_arcs(dec, params)
    if not check:
        raise AssertionError(f"brute force produced an invalid decomposition: {check}")
    return BruteForceOutcome("found", dec)
