"""Elementary factorization providers.

Each provider returns its factorization as a verified decomposition of an
explicit host graph.  Where a closed form is classical (rotational near
1-factorizations, Walecki cycles, distance threading) it is built directly;
where only existence is cited, a deterministic bounded backtracking search
fills the gap and the result is cached on disk keyed by the request.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import tempfile
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from . import search, serialize
from .graphs import (ConstructionBugError, Decomposition, DegenerateCycleError,
                     Edge, ExceptionalCase, MultiGraph, ParameterError,
                     PartialFactor, Vertex, assemble_from_distances,
                     complete_graph, edge_key, multipartite_complete)
from .verify import check_partition

CACHE_ENV = "CYCLEFRAME_CACHE"
DEFAULT_CACHE_DIR = ".cycleframe-cache"

EXPLICIT = "explicit"
SEARCH = "search"
CACHED = "cached"


@dataclass(frozen=True)
class BlockSpec:
    """A canonical request for one elementary factorization family."""

    family: str
    params: tuple

    def cache_name(self) -> str:
        blob = json.dumps({"family": self.family, "params": list(self.params)},
                          sort_keys=True)
        digest = hashlib.sha256(blob.encode("ascii")).hexdigest()[:16]
        return f"{self.family}-{digest}.json"


@dataclass(frozen=True)
class BlockResult:
    decomposition: Decomposition
    strategy: str


@dataclass(frozen=True)
class MatchingFactor:
    """A (near / partial) 1-factor: `missing` is the uncovered vertex or part."""

    missing: int | None
    edges: tuple[tuple, ...]


def _cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, DEFAULT_CACHE_DIR))


def _cache_path(family: str, params: tuple) -> Path:
    return _cache_dir() / BlockSpec(family, tuple(params)).cache_name()


def _cached_factors(family: str, params: tuple, host: MultiGraph, builder):
    """Run `builder` (returning a factor list) behind the disk cache."""
    path = _cache_path(family, params)
    if path.exists():
        try:
            payload = json.loads(path.read_text(encoding="ascii"))
            return serialize.factors_from_payload(payload), CACHED
        except (ValueError, KeyError):
            pass  # corrupt cache entry: rebuild below
    factors = builder()
    payload = serialize.factors_payload(host, factors, [family] * len(factors))
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "wb") as fh:
        fh.write(serialize.canonical_json_bytes(payload))
    os.replace(tmp, path)
    return factors, SEARCH


def _finish(host: MultiGraph, factors, strategy: str, tag: str) -> BlockResult:
    dec = Decomposition(host, tuple(factors), tuple(tag for _ in factors))
    result = check_partition(host, dec.factors)
    if not result:
        raise ConstructionBugError(f"block {tag} failed verification: {result.reason} {result.path}")
    return BlockResult(dec, strategy)


def _as_factor(cycle_length: int, hole: int | None, int_cycles) -> PartialFactor:
    """Lift cycles of integer vertices into the (part, slot=0) vertex space."""
    return PartialFactor.build(cycle_length, hole,
                               [tuple((v, 0) for v in cyc) for cyc in int_cycles])


# ---------------------------------------------------------------------------
# 1-factorizations


def near_one_factorization(u: int) -> list[MatchingFactor]:
    """Rotational near 1-factorization of K_u for odd u.

    Factor m misses vertex m and pairs m+j with m-j (mod u).
    """
    if u < 3 or u % 2 == 0:
        raise ParameterError(f"near 1-factorization needs odd u >= 3, got {u}")
    factors = []
    for m in range(u):
        edges = tuple(sorted(tuple(sorted(((m + j) % u, (m - j) % u)))
                             for j in range(1, (u - 1) // 2 + 1)))
        factors.append(MatchingFactor(m, edges))
    _check_matchings(factors, Counter({(i, j): 1 for i, j in
                                       itertools.combinations(range(u), 2)}),
                     lambda m: set(range(u)) - {m})
    return factors


def partial_one_factorization_multipartite(u: int, g: int) -> list[MatchingFactor]:
    """Hole-aligned partial 1-factorization of K_u (x) K̄_g.

    Returns u*g matchings, g of them missing each part.  Odd u: blow the
    rotational near 1-factorization through the g distance matchings.  Even u
    (forcing even g): bounded search behind the cache.
    """
    if u < 3:
        raise ParameterError("partial 1-factorization needs u >= 3")
    if (g * (u - 1)) % 2 != 0:
        raise ParameterError(f"partial 1-factorization needs g(u-1) even, got u={u}, g={g}")
    host = multipartite_complete(u, g, 1)
    if u % 2 == 1:
        factors = []
        for near in near_one_factorization(u):
            for d in range(g):
                edges = tuple(sorted(edge_key((a, s), (b, (s + d) % g))
                                     for (a, b) in near.edges for s in range(g)))
                factors.append(MatchingFactor(near.missing, edges))
    elif g > 2:
        # Even u forces even g; blow the g = 2 base through the g/2 distance
        # matchings of each K_{g/2,g/2} block.
        half = g // 2
        factors = []
        for base in partial_one_factorization_multipartite(u, 2):
            for d in range(half):
                edges = tuple(sorted(
                    edge_key((a, ha * half + z), (b, hb * half + (z + d) % half))
                    for ((a, ha), (b, hb)) in base.edges for z in range(half)))
                factors.append(MatchingFactor(base.missing, edges))
        factors.sort(key=lambda f: f.missing)
    else:
        # Matchings do not fit PartialFactor; cache them in a bespoke shape.
        path = _cache_path("partial_one_factor", (u, g))
        if path.exists():
            payload = json.loads(path.read_text(encoding="ascii"))
            factors = [MatchingFactor(m["missing"],
                                      tuple(tuple(tuple(v) for v in e) for e in m["edges"]))
                       for m in payload["matchings"]]
        else:
            spans = []
            for hole in range(u):
                span = frozenset((p, s) for p in range(u) for s in range(g) if p != hole)
                spans.extend([span] * g)
            raw = search.decompose_into_matchings(Counter(host.edges), spans)
            factors = []
            for hole in range(u):
                for d in range(g):
                    edges = tuple(sorted(raw[hole * g + d]))
                    factors.append(MatchingFactor(hole, edges))
            payload = {"matchings": [{"missing": f.missing,
                                      "edges": [[list(v) for v in e] for e in f.edges]}
                                     for f in factors]}
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "wb") as fh:
                fh.write(serialize.canonical_json_bytes(payload))
            os.replace(tmp, path)
    _check_matchings(factors, Counter(host.edges),
                     lambda hole: {(p, s) for p in range(u) for s in range(g) if p != hole})
    return factors


def _check_matchings(factors, host_edges: Counter, span_of):
    total: Counter = Counter()
    for f in factors:
        covered = [v for e in f.edges for v in e]
        if len(covered) != len(set(covered)):
            raise ConstructionBugError("matching factor repeats a vertex")
        if set(covered) != span_of(f.missing):
            raise ConstructionBugError("matching factor span mismatch")
        for e in f.edges:
            total[tuple(e)] += 1
    if total != host_edges:
        raise ConstructionBugError("matching factors do not partition the host")


# ---------------------------------------------------------------------------
# Walecki machinery


def _walecki_zigzag(modulus: int) -> list[int]:
    """Zigzag path 0, 1, -1, 2, -2, ... using every vertex of Z_modulus."""
    path = [0]
    j = 1
    while len(path) < modulus:
        path.append(j % modulus)
        if len(path) < modulus:
            path.append((-j) % modulus)
        j += 1
    return path


def walecki_hamilton_cycles(k: int, rotations: int) -> list[tuple[int, ...]]:
    """First `rotations` Walecki Hamilton cycles of K_k (k even, inf = k-1)."""
    modulus = k - 1
    base = _walecki_zigzag(modulus)
    return [tuple([k - 1] + [(v + j) % modulus for v in base]) for j in range(rotations)]


def walecki_split(k: int):
    """K_k = (k/2 - 2) Hamilton cycles + a cubic remainder (k even >= 6).

    The remainder is the last Walecki cycle plus the leftover perfect
    matching; the pieces are returned as (cycles, remainder edge list).
    """
    if k < 6 or k % 2 != 0:
        raise ParameterError(f"walecki split needs even k >= 6, got {k}")
    cycles = walecki_hamilton_cycles(k, k // 2 - 1)
    used: Counter = Counter()
    for cyc in cycles:
        for i in range(k):
            used[tuple(sorted((cyc[i], cyc[(i + 1) % k])))] += 1
    matching = [e for e in itertools.combinations(range(k), 2) if used[e] == 0]
    if any(m > 1 for m in used.values()) or len(matching) != k // 2:
        raise ConstructionBugError("walecki split did not tile K_k")
    free = cycles[:-1]
    cubic = sorted(matching + [tuple(sorted((cycles[-1][i], cycles[-1][(i + 1) % k])))
                               for i in range(k)])
    return free, cubic


def hamilton_decomposition_complete_odd(t: int) -> list[tuple[int, ...]]:
    """Hamilton decomposition of K_t for odd t (inf = t-1), (t-1)/2 cycles."""
    if t < 3 or t % 2 == 0:
        raise ParameterError(f"odd complete Hamilton decomposition needs odd t >= 3, got {t}")
    modulus = t - 1
    base = _walecki_zigzag(modulus)
    return [tuple([t - 1] + [(v + j) % modulus for v in base]) for j in range(modulus // 2)]


# ---------------------------------------------------------------------------
# Near cycle factorizations of doubled complete graphs


def kplus1_near_factor_cycles(k: int):
    """The explicit near C_k-factors of K_{k+1}(2), vertices 0..k-1 plus k.

    Entry order and cycle orientation follow the i, i+1, i-1, i+2, ...
    zigzag; entry i misses i + k/2, the final entry is the rim cycle missing
    the hub vertex k.  Downstream distance threading relies on exactly these
    orientations.
    """
    if k < 4 or k % 2 != 0:
        raise ParameterError(f"near C_k-factors of K_(k+1)(2) need even k >= 4, got {k}")
    entries = []
    for i in range(k):
        cyc = [i]
        for j in range(1, k // 2):
            cyc.append((i + j) % k)
            cyc.append((i - j) % k)
        cyc.append(k)
        entries.append((((i + k // 2) % k), tuple(cyc)))
    entries.append((k, tuple(range(k))))
    return entries


def near_cycle_factorization_doubled(cycle_len: int, u: int) -> BlockResult:
    """Near C_L-factorization of K_u(2): u factors, factor i missing vertex i."""
    if cycle_len < 3:
        raise ParameterError(f"cycle length must be >= 3, got {cycle_len}")
    if u < cycle_len + 1 or (u - 1) % cycle_len != 0:
        raise ParameterError(
            f"near C_{cycle_len}-factorization of K_u(2) needs u = 1 (mod {cycle_len}), got {u}")
    host = complete_graph(u, 2)
    if u == cycle_len + 1 and cycle_len % 2 == 0:
        factors = [_as_factor(cycle_len, missing, [cyc])
                   for missing, cyc in kplus1_near_factor_cycles(cycle_len)]
        return _finish(host, factors, EXPLICIT, "near_cycle_zigzag")

    def build():
        try:
            base = search.rotational_base(u, cycle_len, use_inf=False)
            factors = []
            for j in range(u):
                cycles = [[( (v + j) % u) for v in cyc] for cyc in base]
                factors.append(_as_factor(cycle_len, j, cycles))
            return factors
        except search.UnsupportedBlockError:
            pass
        specs = []
        for miss in range(u):
            span = frozenset((v, 0) for v in range(u) if v != miss)
            specs.append((span, cycle_len))
        raw = search.decompose_into_factors(Counter(host.edges), specs)
        return [PartialFactor.build(cycle_len, miss, cycles)
                for miss, cycles in enumerate(raw)]

    factors, strategy = _cached_factors("near_cycle_ku2", (cycle_len, u), host, build)
    return _finish(host, factors, strategy, "near_cycle_rotational")


def near_ck_factorization_kplus1_doubled(k: int) -> BlockResult:
    return near_cycle_factorization_doubled(k, k + 1)


def near_c2k_factorization_u2(k: int, u: int) -> BlockResult:
    """Near C_{2k}-factorization of K_u(2) for u = 1 (mod 2k), k >= 2."""
    if k < 2:
        raise ParameterError("half cycle length must be >= 2")
    return near_cycle_factorization_doubled(2 * k, u)


def near_cm_factorization_ms1_doubled(m: int, s: int) -> BlockResult:
    """Near C_m-factorization of K_{ms+1}(2) for odd m >= 3."""
    if m < 3 or m % 2 == 0:
        raise ParameterError(f"near C_m-factorization needs odd m >= 3, got {m}")
    if s < 0:
        raise ParameterError("s must be >= 0")
    if s == 0:
        # K_1(2) is edgeless: the empty decomposition.
        return BlockResult(Decomposition(MultiGraph(1, 1, {}, "complete_doubled"), (), ()), EXPLICIT)
    return near_cycle_factorization_doubled(m, m * s + 1)


# ---------------------------------------------------------------------------
# Cycle factorizations of complete (doubled / simple) graphs


def ck_factorization_complete_doubled(m: int, u: int) -> BlockResult:
    """C_{2m}-factorization of K_u(2) into u-1 factors (u = 0 mod 2m)."""
    cycle_len = 2 * m
    if m < 2:
        raise ParameterError(f"half cycle length must be >= 2, got {m}")
    if u % cycle_len != 0 or u < cycle_len:
        raise ParameterError(
            f"C_{cycle_len}-factorization of K_u(2) needs u = 0 (mod {cycle_len}), got {u}")
    host = complete_graph(u, 2)
    if u == cycle_len:
        cycles = walecki_hamilton_cycles(u, u - 1)
        factors = [_as_factor(cycle_len, None, [cyc]) for cyc in cycles]
        return _finish(host, factors, EXPLICIT, "walecki_double_cover")

    def build():
        try:
            base = search.rotational_base(u - 1, cycle_len, use_inf=True)
            factors = []
            for j in range(u - 1):
                cycles = [[(u - 1 if v == search.INF else (v + j) % (u - 1)) for v in cyc]
                          for cyc in base]
                factors.append(_as_factor(cycle_len, None, cycles))
            return factors
        except search.UnsupportedBlockError:
            pass
        span = frozenset((v, 0) for v in range(u))
        raw = search.decompose_into_factors(Counter(host.edges),
                                            [(span, cycle_len)] * (u - 1))
        return [PartialFactor.build(cycle_len, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("ck_factor_ku2", (cycle_len, u), host, build)
    return _finish(host, factors, strategy, "complete_doubled_rotational")


def cs_factorization_complete_odd(s: int, g: int) -> BlockResult:
    """C_s-factorization of K_g (simple) for odd s >= 3, g = s (mod 2s)."""
    if s < 3 or s % 2 == 0:
        raise ParameterError(f"resolvable odd cycle factorization needs odd s >= 3, got {s}")
    if g % (2 * s) != s:
        raise ParameterError(f"C_{s}-factorization of K_g needs g = {s} (mod {2 * s}), got {g}")
    host = complete_graph(g, 1)
    if g == s:
        factors = [_as_factor(s, None, [cyc])
                   for cyc in hamilton_decomposition_complete_odd(s)]
        return _finish(host, factors, EXPLICIT, "odd_complete_hamilton")

    def build():
        span = frozenset((v, 0) for v in range(g))
        raw = search.decompose_into_factors(Counter(host.edges),
                                            [(span, s)] * ((g - 1) // 2))
        return [PartialFactor.build(s, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("cs_factor_kg", (s, g), host, build)
    return _finish(host, factors, strategy, "odd_cycle_resolvable")


# ---------------------------------------------------------------------------
# Bipartite and product hosts


def bipartite_host(n: int) -> MultiGraph:
    edges = {((0, s1), (1, s2)): 1 for s1 in range(n) for s2 in range(n)}
    return MultiGraph(2, n, edges, "lexicographic_blowup")


def ck_factorization_bipartite(m: int, n: int, kk: int) -> BlockResult:
    """C_kk-factorization of K_{n,n} into n/2 factors."""
    if m != n or n % 2 != 0 or n < 2:
        raise ParameterError(f"bipartite cycle factorization needs m = n even, got ({m}, {n})")
    if kk < 4 or kk % 2 != 0 or (2 * n) % kk != 0:
        raise ParameterError(f"cycle length {kk} must be even >= 4 and divide 2n = {2 * n}")
    if (m, n, kk) == (6, 6, 6):
        raise ExceptionalCase("K_{6,6} has no C_6-factorization")
    host = bipartite_host(n)
    w = 2 * n // kk
    if (kk // 2) % 2 == 0:
        # Pair the distance classes along each w-step chain; a pair (d, d+w)
        # yields one factor of w cycles stepping d forward and d+w back.
        factors = []
        for c in range(w):
            chain = [(c + i * w) % n for i in range(kk // 2)]
            for i in range(0, len(chain), 2):
                d1, d2 = chain[i], chain[i + 1]
                edges = [edge_key((0, s), (1, (s + d1) % n)) for s in range(n)]
                edges += [edge_key((0, s), (1, (s + d2) % n)) for s in range(n)]
                cycles = trace_two_regular(edges)
                factors.append(PartialFactor.build(kk, None, cycles))
        return _finish(host, factors, EXPLICIT, "bipartite_distance_pairs")

    def build():
        span = frozenset((p, s) for p in range(2) for s in range(n))
        raw = search.decompose_into_factors(Counter(host.edges), [(span, kk)] * (n // 2))
        return [PartialFactor.build(kk, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("ck_factor_knn", (n, kk), host, build)
    return _finish(host, factors, strategy, "bipartite_search")


def trace_two_regular(edges) -> list[tuple[Vertex, ...]]:
    """Split a 2-regular simple edge list into its cycles."""
    adj: dict[Vertex, list[Vertex]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for v, nb in adj.items():
        if len(nb) != 2 or nb[0] == nb[1]:
            raise DegenerateCycleError(f"vertex {v} is not simply 2-regular")
    cycles = []
    visited: set[Vertex] = set()
    for start in sorted(adj):
        if start in visited:
            continue
        cyc = [start]
        visited.add(start)
        prev, cur = start, min(adj[start])
        while cur != start:
            cyc.append(cur)
            visited.add(cur)
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
        if len(cyc) < 3:
            raise DegenerateCycleError("traced cycle shorter than 3")
        cycles.append(tuple(cyc))
    return cycles


def cycle_times_complete_host(kk: int, m: int) -> MultiGraph:
    edges = {}
    for p in range(kk):
        q = (p + 1) % kk
        lo, hi = min(p, q), max(p, q)
        for s1 in range(m):
            for s2 in range(m):
                if s1 != s2:
                    edges[edge_key((lo, s1), (hi, s2))] = edges.get(edge_key((lo, s1), (hi, s2)), 0) + 1
    # kk == 2 would double the single part pair; callers keep kk >= 3.
    return MultiGraph(kk, m, edges, "custom")


def ck_factorization_cycle_times_complete(kk: int, m: int, n: int = 1) -> BlockResult:
    """C_{kk*n}-factorization of C_kk x K_m into m-1 factors (n | m).

    Distance-array route: one slot jump per cycle position and factor, each
    position using every nonzero jump exactly once, each row sum s chosen so
    gcd(s, m) = m/n fixes the cycle length at kk*n.
    """
    if kk < 3 or m < 2 or n < 1 or m % n != 0:
        raise ParameterError(f"cycle-times-complete got (kk={kk}, m={m}, n={n})")
    if kk % 2 == 1 and m % 4 == 2:
        raise ParameterError(
            f"odd cycle length {kk} with part size {m} = 2 (mod 4) is outside the cited result")
    host = cycle_times_complete_host(kk, m)
    try:
        rows = search.distance_array(kk, m, target_gcd=m // n)
    except search.UnsupportedBlockError:
        rows = None  # not every instance is uniform; fall back to edge search
    if rows is not None:
        part_cycle = tuple(range(kk))
        factors = []
        for row in rows:
            pf = assemble_from_distances(part_cycle, row, m)
            if pf.cycle_length != kk * n:
                raise ConstructionBugError("distance row produced wrong cycle length")
            factors.append(PartialFactor.build(kk * n, None, pf.cycles))
        return _finish(host, factors, EXPLICIT, f"cycle_times_complete_n{n}")

    def build():
        span = frozenset((p, s) for p in range(kk) for s in range(m))
        raw = search.decompose_into_factors(Counter(host.edges), [(span, kk * n)] * (m - 1))
        return [PartialFactor.build(kk * n, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("ck_factor_ckxkm", (kk, m, n), host, build)
    return _finish(host, factors, strategy, f"cycle_times_complete_search_n{n}")


def hamilton_decomp_cycle_times_complete(m: int, n: int) -> BlockResult:
    """Hamilton decomposition of C_m x K_n for even n >= 2 (n-1 factors)."""
    if m < 3 or n < 2 or n % 2 != 0:
        raise ParameterError(f"hamilton cycle-times-complete needs m >= 3, even n, got ({m}, {n})")
    host = cycle_times_complete_host(m, n)
    try:
        return ck_factorization_cycle_times_complete(m, n, n)
    except (search.UnsupportedBlockError, ParameterError):
        pass

    def build():
        span = frozenset((p, s) for p in range(m) for s in range(n))
        raw = search.decompose_into_factors(Counter(host.edges), [(span, m * n)] * (n - 1))
        return [PartialFactor.build(m * n, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("ham_cycle_times_complete", (m, n), host, build)
    return _finish(host, factors, strategy, "hamilton_tensor_search")


def cycle_lex_host(m: int, n: int) -> MultiGraph:
    edges: dict[Edge, int] = {}
    for p in range(m):
        q = (p + 1) % m
        lo, hi = min(p, q), max(p, q)
        for s1 in range(n):
            for s2 in range(n):
                e = edge_key((lo, s1), (hi, s2))
                edges[e] = edges.get(e, 0) + 1
    return MultiGraph(m, n, edges, "lexicographic_blowup")


def lex_cycle_factorization(m: int, n: int, target_gcd: int = 1) -> BlockResult:
    """Factor C_m (x) K̄_n into n factors of cycles of length m*n/target_gcd."""
    if m < 3 or n < 1:
        raise ParameterError(f"lexicographic blow-up needs m >= 3, n >= 1, got ({m}, {n})")
    if n % target_gcd != 0:
        raise ParameterError("target must divide the part size")
    cycle_len = m * n // target_gcd
    host = cycle_lex_host(m, n)
    part_cycle = tuple(range(m))
    try:
        rows = search.distance_array(m, n, target_gcd=target_gcd, include_zero=True)
        factors = []
        for row in rows:
            pf = assemble_from_distances(part_cycle, row, n)
            if pf.cycle_length != cycle_len:
                raise ConstructionBugError("lex blow-up row produced wrong cycle length")
            factors.append(PartialFactor.build(cycle_len, None, pf.cycles))
        return _finish(host, factors, EXPLICIT, "lex_blowup_rows")
    except search.UnsupportedBlockError:
        pass

    def build():
        span = frozenset((p, s) for p in range(m) for s in range(n))
        raw = search.decompose_into_factors(Counter(host.edges), [(span, cycle_len)] * n)
        return [PartialFactor.build(cycle_len, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("ham_cycle_lex", (m, n, target_gcd), host, build)
    return _finish(host, factors, strategy, "lex_blowup_search")


def hamilton_decomp_cycle_lex_empty(m: int, n: int) -> BlockResult:
    """Hamilton decomposition of C_m (x) K̄_n into n factors."""
    return lex_cycle_factorization(m, n, 1)


# ---------------------------------------------------------------------------
# Search-backed specials


def _perfect_one_factorization(k: int, cubic):
    """1-factorization of a cubic graph whose pairwise unions are Hamilton.

    Enumerates perfect matchings whose removal leaves a Hamilton cycle; the
    cycle's two alternating matchings complete the candidate.  Returns the
    three 1-factors or None.
    """
    adj: dict[int, list[int]] = {v: [] for v in range(k)}
    for a, b in cubic:
        adj[a].append(b)
        adj[b].append(a)

    def hamilton_after_removal(matching) -> tuple[int, ...] | None:
        removed = set(matching)
        rest = {v: [w for w in adj[v] if tuple(sorted((v, w))) not in removed]
                for v in range(k)}
        cyc = [0]
        prev, cur = None, 0
        for _ in range(k - 1):
            nxt = [w for w in rest[cur] if w != prev]
            if len(nxt) != 1 and prev is not None:
                return None
            step = min(nxt)
            cyc.append(step)
            prev, cur = cur, step
        if 0 not in rest[cur] or len(set(cyc)) != k:
            return None
        return tuple(cyc)

    matchings: list[list[tuple[int, int]]] = []

    def enum(uncov: set[int], cur: list[tuple[int, int]]):
        if not uncov:
            matchings.append(list(cur))
            return
        a = min(uncov)
        for b in adj[a]:
            if b in uncov and b != a:
                cur.append(tuple(sorted((a, b))))
                enum(uncov - {a, b}, cur)
                cur.pop()

    enum(set(range(k)), [])
    for m1 in matchings:
        cyc = hamilton_after_removal(m1)
        if cyc is None:
            continue
        m2 = [tuple(sorted((cyc[i], cyc[(i + 1) % k]))) for i in range(0, k, 2)]
        m3 = [tuple(sorted((cyc[i], cyc[(i + 1) % k]))) for i in range(1, k, 2)]
        if hamilton_after_removal(m2) is not None and hamilton_after_removal(m3) is not None:
            return [sorted(m1), sorted(m2), sorted(m3)]
    return None


def _thread_k3_over_p1f(k: int, one_factors):
    """Per-edge distance threading of G x K_3 over a perfect 1-factorization.

    Factor m lives on the Hamilton cycle G minus L_m; the two factors sharing
    an edge take complementary distances, and each factor's oriented distance
    sum must vanish mod 3 so its cycles close after k steps.  The bit per
    edge that satisfies all three sums is found by exhaustive backtracking
    over the edges (at most 3k/2 bits).
    """
    adj_removed = []
    hams = []
    all_edges = sorted({e for lf in one_factors for e in lf})
    edge_owner_factors = {}
    for m in range(3):
        removed = set(one_factors[m])
        keep = [e for e in all_edges if e not in removed]
        cyc = trace_two_regular([((a, 0), (b, 0)) for a, b in keep])
        if len(cyc) != 1 or len(cyc[0]) != k:
            return None
        hams.append(tuple(v for (v, _) in cyc[0]))
        adj_removed.append(removed)
    for e in all_edges:
        edge_owner_factors[e] = [m for m in range(3) if e not in adj_removed[m]]
    # position and direction of every edge inside each Hamilton that uses it
    place: dict[tuple[int, tuple[int, int]], tuple[int, bool]] = {}
    for m, ham in enumerate(hams):
        for p in range(k):
            a, b = ham[p], ham[(p + 1) % k]
            place[(m, tuple(sorted((a, b))))] = (p, a < b)
    sums = [0, 0, 0]
    choice: dict[tuple[int, int], int] = {}

    def oriented(n: int, forward: bool) -> int:
        return n if forward else 3 - n

    def assign(i: int) -> bool:
        if i == len(all_edges):
            return all(s % 3 == 0 for s in sums)
        e = all_edges[i]
        mi, mj = edge_owner_factors[e]
        for n in (1, 2):
            oi = oriented(n, place[(mi, e)][1])
            oj = oriented(3 - n, place[(mj, e)][1])
            sums[mi] += oi
            sums[mj] += oj
            choice[e] = n
            if assign(i + 1):
                return True
            sums[mi] -= oi
            sums[mj] -= oj
        choice.pop(e, None)
        return False

    if not assign(0):
        return None
    factors = []
    for m, ham in enumerate(hams):
        dv = []
        for p in range(k):
            e = tuple(sorted((ham[p], ham[(p + 1) % k])))
            n = choice[e] if edge_owner_factors[e][0] == m else 3 - choice[e]
            dv.append(oriented(n, place[(m, e)][1]))
        pf = assemble_from_distances(ham, dv, 3)
        if pf.cycle_length != k:
            return None
        factors.append(PartialFactor.build(k, None, pf.cycles))
    return factors


def cubic_times_k3_factorization(k: int, cubic_edges) -> BlockResult:
    """Three C_k-factors of G x K_3 for a cubic G of order k."""
    if k == 4:
        raise ExceptionalCase("(k, m) = (4, 3) is the excluded cubic blow-up")
    if k < 6 or k % 2 != 0:
        raise ParameterError(f"cubic blow-up needs even k >= 6, got {k}")
    cubic = sorted(tuple(sorted(e)) for e in cubic_edges)
    degrees: Counter = Counter()
    for a, b in cubic:
        degrees[a] += 1
        degrees[b] += 1
    if sorted(degrees) != list(range(k)) or set(degrees.values()) != {3}:
        raise ParameterError("remainder graph is not cubic on 0..k-1")
    edges: dict[Edge, int] = {}
    for a, b in cubic:
        for s1 in range(3):
            for s2 in range(3):
                if s1 != s2:
                    edges[edge_key((a, s1), (b, s2))] = 1
    host = MultiGraph(k, 3, edges, "custom")

    p1f = _perfect_one_factorization(k, cubic)
    if p1f is not None:
        factors = _thread_k3_over_p1f(k, p1f)
        if factors is not None:
            return _finish(host, factors, EXPLICIT, "cubic_blowup_p1f")

    def build():
        span = frozenset((p, s) for p in range(k) for s in range(3))
        raw = search.decompose_into_factors(Counter(host.edges), [(span, k)] * 3)
        return [PartialFactor.build(k, None, cycles) for cycles in raw]

    params = (k,) + tuple(v for e in cubic for v in e)
    factors, strategy = _cached_factors("cubic_times_k3", params, host, build)
    return _finish(host, factors, strategy, "cubic_blowup_search")


def ct_factorization_tripartite(t: int) -> BlockResult:
    """C_t-factorization of K_{t,t,t} into t factors.

    For t = 0 (mod 4) with t >= 8 the factorization doubles up recursively:
    K_{t,t,t} is the half-size tripartite graph with every slot split in two,
    and each half-size factor cycle blows up into the two Hamilton factors of
    its doubled ring.  Remaining cases go to the bounded search.
    """
    if t == 2:
        raise DegenerateCycleError("C_2 factors are not cycles")
    if t < 3:
        raise ParameterError(f"tripartite factorization needs t >= 3, got {t}")
    host = multipartite_complete(3, t, 1)
    if t >= 8 and t % 4 == 0:
        m = t // 2
        base = ct_factorization_tripartite(m).decomposition.factors
        factors = []
        for bf in base:
            for flip in (0, 1):
                row = [flip] * (m - 1) + [1 - flip]  # odd sum: one doubled ring
                pieces = []
                for cyc in bf.cycles:
                    spots = list(cyc)
                    walk = []
                    x, h = 0, 0
                    for _ in range(2 * m):
                        walk.append((spots[x][0], 2 * spots[x][1] + h))
                        h = (h + row[x]) % 2
                        x = (x + 1) % m
                    pieces.append(tuple(walk))
                factors.append(PartialFactor.build(t, None, pieces))
        return _finish(host, factors, EXPLICIT, "tripartite_doubling")

    def build():
        span = frozenset((p, s) for p in range(3) for s in range(t))
        raw = search.decompose_into_factors(Counter(host.edges), [(span, t)] * t)
        return [PartialFactor.build(t, None, cycles) for cycles in raw]

    factors, strategy = _cached_factors("ct_factor_kttt", (t,), host, build)
    return _finish(host, factors, strategy, "tripartite_search")
