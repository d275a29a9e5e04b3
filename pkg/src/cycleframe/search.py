"""Deterministic bounded backtracking used by the block providers.

Three engines:

* distance arrays: rows of slot jumps threaded around a cycle of parts,
  one row per factor, every column a permutation of the allowed jumps and
  every row sum constrained by the gcd that fixes the resulting cycle length;
* rotational bases: a starter factor over Z_n (+ optional fixed vertex)
  whose translates tile a doubled complete graph;
* edge-level factor cover: partition an explicit edge multiset into
  2-factors with prescribed spans and cycle length.

Everything iterates in sorted order so identical requests rebuild identical
answers, and every engine counts nodes against a budget.
"""

from __future__ import annotations

import math
from collections import Counter

from .graphs import Edge, UnsupportedBlockError, Vertex, edge_key

DEFAULT_BUDGET = 10_000_000

INF = -1  # fixed vertex label for rotational bases


class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes: int):
        self.left = nodes

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise UnsupportedBlockError("search node budget exhausted")


def _target_ok(total: int, modulus: int, target_gcd: int) -> bool:
    return math.gcd(total % modulus, modulus) == target_gcd


def distance_array(positions: int, modulus: int, target_gcd: int,
                   include_zero: bool = False,
                   budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Rows of length `positions` over Z_modulus, one per allowed value.

    Columns form permutations of the allowed values ({1..m-1}, or all of Z_m
    when include_zero); each row sum s satisfies gcd(s, m) == target_gcd, so
    threading row r around a cycle of `positions` parts yields cycles of
    length positions * m / target_gcd.
    """
    values = list(range(0 if include_zero else 1, modulus))
    if not values:
        raise UnsupportedBlockError("empty value set for distance array")
    closed = _closed_form_rows(positions, modulus, target_gcd, include_zero)
    if closed is not None:
        return closed
    if not _row_sums_reachable(positions, modulus, target_gcd, values):
        raise UnsupportedBlockError(
            f"no distance array for positions={positions}, modulus={modulus}, "
            f"target={target_gcd} (residue obstruction)")
    return _array_backtrack(positions, modulus, target_gcd, values, _Budget(budget))


def _row_sums_reachable(positions, modulus, target_gcd, values) -> bool:
    """Necessary condition: the grand total (fixed by the column permutations)
    must be a sum of len(values) row residues with the required gcd."""
    allowed = {x % modulus for x in range(modulus)
               if math.gcd(x % modulus, modulus) == target_gcd}
    if not allowed:
        return False
    reachable = {0}
    for _ in range(len(values)):
        reachable = {(r + a) % modulus for r in reachable for a in allowed}
    total = positions * sum(values) % modulus
    return total in reachable


def _closed_form_rows(positions, modulus, target_gcd, include_zero):
    """Alternating rows with a reflected last column; valid when the
    quotient modulus/target is odd (this covers the plain alternating
    C_k-factor case target == modulus)."""
    if include_zero or positions < 2 or positions % 2 != 0:
        return None
    w = target_gcd
    if modulus % w != 0 or (modulus // w) % 2 == 0:
        return None
    rows = []
    for r in range(1, modulus):
        head = [r if j % 2 == 0 else (modulus - r) for j in range(positions - 2)]
        beta = w if r == w % modulus else (w - r) % modulus
        if beta == 0:
            return None
        row = tuple(head + [r, beta])
        if not _target_ok(sum(row), modulus, w):
            return None
        rows.append(row)
    last = [row[-1] for row in rows]
    if sorted(last) != list(range(1, modulus)):
        return None
    return rows


def _array_backtrack(positions, modulus, target_gcd, values, budget):
    pools = [sorted(values) for _ in range(positions)]
    rows: list[tuple[int, ...]] = []

    def fill_row(row: list[int], col: int) -> bool:
        budget.spend()
        if col == positions - 1:
            partial = sum(row)
            for v in pools[col]:
                if _target_ok(partial + v, modulus, target_gcd):
                    row.append(v)
                    pools[col].remove(v)
                    if place_row(row):
                        return True
                    pools[col].insert(_ins(pools[col], v), v)
                    row.pop()
            return False
        for v in list(pools[col]):
            row.append(v)
            pools[col].remove(v)
            if fill_row(row, col + 1):
                return True
            pools[col].insert(_ins(pools[col], v), v)
            row.pop()
        return False

    def place_row(row: list[int]) -> bool:
        rows.append(tuple(row))
        if len(rows) == len(values):
            return True
        if fill_row([], 0):
            return True
        rows.pop()
        return False

    if not fill_row([], 0):
        raise UnsupportedBlockError(
            f"no distance array for positions={positions}, modulus={modulus}, "
            f"target={target_gcd}")
    return rows


def _ins(pool: list[int], v: int) -> int:
    lo = 0
    while lo < len(pool) and pool[lo] < v:
        lo += 1
    return lo


def _difference_class(a: int, b: int, n: int) -> int:
    d = (a - b) % n
    return min(d, n - d)


def rotational_base(n: int, cycle_len: int, use_inf: bool,
                    budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Starter cycles whose Z_n translates tile a doubled complete graph.

    Without INF: cycles partition {1..n-1} and use every difference class
    twice (the half class once when n is even); translating by all of Z_n
    yields a near-cycle-factorization of K_n(2), translate j missing j.

    With INF: cycles partition {0..n-1, INF} and use every finite class
    twice; translating by Z_n (INF fixed) yields a cycle-factorization of
    K_{n+1}(2) into n full 2-factors.
    """
    b = _Budget(budget)
    verts = sorted(range(0 if use_inf else 1, n)) + ([INF] if use_inf else [])
    half = None if n % 2 == 1 else n // 2
    quota = Counter({c: 2 for c in range(1, (n + 1) // 2 if half is None else half)})
    if half is not None:
        quota[half] = 1 if not use_inf else 2
    if n % 2 == 0:
        # every cycle closes mod the even n, so it uses evenly many odd
        # differences; an odd total of odd-class slots can never be placed
        odd_slots = sum(q for c, q in quota.items() if c % 2 == 1)
        if odd_slots % 2 == 1:
            raise UnsupportedBlockError(
                f"parity obstruction: no rotational base for n={n}, cycle_len={cycle_len}")
    # With INF present n is odd in every caller, so the half class is moot;
    # guard anyway.
    remaining = set(verts)
    cycles: list[tuple[int, ...]] = []

    def cls(a: int, c: int) -> int | None:
        if a == INF or c == INF:
            return None
        return _difference_class(a, c, n)

    def extend(path: list[int], first: int) -> bool:
        b.spend()
        if len(path) == cycle_len:
            c = cls(path[-1], first)
            if c is not None:
                if quota[c] == 0:
                    return False
                quota[c] -= 1
            if close_cycle(path):
                return True
            if c is not None:
                quota[c] += 1
            return False
        prev = path[-1]
        # scarce difference classes first: failing assignments die sooner
        def rank(x):
            c = cls(prev, x)
            return (quota[c] if c is not None else 0, x)
        for v in sorted(remaining, key=rank):
            if len(path) == cycle_len - 1 and len(path) >= 2 and v < path[1]:
                continue  # canonical direction: second vertex < last vertex
            c = cls(prev, v)
            if c is not None:
                if quota[c] == 0:
                    continue
                quota[c] -= 1
            remaining.discard(v)
            path.append(v)
            if extend(path, first):
                return True
            path.pop()
            remaining.add(v)
            if c is not None:
                quota[c] += 1
        return False

    def close_cycle(path: list[int]) -> bool:
        cycles.append(tuple(path))
        if not remaining:
            if all(q == 0 for q in quota.values()):
                return True
        else:
            start = min(v for v in remaining if v != INF) if remaining != {INF} else INF
            remaining.discard(start)
            if extend([start], start):
                return True
            remaining.add(start)
        cycles.pop()
        return False

    start = min(v for v in remaining if v != INF)
    remaining.discard(start)
    if extend([start], start):
        return cycles
    raise UnsupportedBlockError(
        f"no rotational base for n={n}, cycle_len={cycle_len}, inf={use_inf}")


def decompose_into_factors(pool: Counter[Edge],
                           specs: list[tuple[frozenset[Vertex], int]],
                           budget: int = DEFAULT_BUDGET) -> list[list[tuple[Vertex, ...]]]:
    """Partition `pool` into one 2-factor per spec (span, cycle_len).

    Each factor covers its span exactly with vertex-disjoint cycles of the
    given length drawn from the remaining multiset.  Cycles grow from the
    least uncovered vertex with ascending neighbours and a direction
    tie-break, which both canonicalizes the output and prunes the search;
    committing an edge also checks that both endpoints keep enough available
    degree for the factors still owed to them.
    """
    b = _Budget(budget)
    adjacency: dict[Vertex, list[Vertex]] = {}
    avail_deg: Counter[Vertex] = Counter()
    for (x, y), mult in pool.items():
        adjacency.setdefault(x, []).append(y)
        adjacency.setdefault(y, []).append(x)
        avail_deg[x] += mult
        avail_deg[y] += mult
    for v in adjacency:
        adjacency[v] = sorted(set(adjacency[v]))
    # spec indices that still owe vertex v two edges, for the degree prune
    owing: dict[Vertex, list[int]] = {}
    for i, (span, _) in enumerate(specs):
        for v in span:
            owing.setdefault(v, []).append(i)
    work = Counter(pool)
    out: list[list[tuple[Vertex, ...]]] = []

    def later_need(v: Vertex, idx: int) -> int:
        lst = owing.get(v, ())
        lo, hi = 0, len(lst)
        while lo < hi:
            mid = (lo + hi) // 2
            if lst[mid] <= idx:
                lo = mid + 1
            else:
                hi = mid
        return 2 * (len(lst) - lo)

    def avail(a: Vertex, c: Vertex) -> bool:
        return work[edge_key(a, c)] > 0

    def take(a: Vertex, c: Vertex, delta: int):
        work[edge_key(a, c)] += delta
        avail_deg[a] += delta
        avail_deg[c] += delta

    def solve_factor(idx: int, uncovered: set[Vertex], cycles: list[tuple[Vertex, ...]],
                     cycle_len: int) -> bool:
        if not uncovered:
            out.append(list(cycles))
            if solve(idx + 1):
                return True
            out.pop()
            return False
        anchor = min(uncovered)
        uncovered.discard(anchor)
        ok = grow([anchor], anchor, uncovered, cycles, cycle_len, idx)
        uncovered.add(anchor)
        return ok

    def take_remainder(span: frozenset[Vertex], cycle_len: int) -> bool:
        """Final factor: the leftover edges must be exactly the factor."""
        adj: dict[Vertex, list[Vertex]] = {v: [] for v in span}
        for e, mult in work.items():
            if mult == 0:
                continue
            a, c = e
            if mult != 1 or a not in adj or c not in adj:
                return False
            adj[a].append(c)
            adj[c].append(a)
        cycles = []
        visited: set[Vertex] = set()
        for v, nb in adj.items():
            if len(nb) != 2:
                return False
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
            if len(cyc) != cycle_len:
                return False
            cycles.append(tuple(cyc))
        out.append(cycles)
        return True

    def grow(path: list[Vertex], anchor: Vertex, uncovered: set[Vertex],
             cycles: list[tuple[Vertex, ...]], cycle_len: int, idx: int) -> bool:
        b.spend()
        if len(path) == cycle_len:
            if not avail(path[-1], anchor):
                return False
            if len(path) > 2 and path[1] > path[-1]:
                return False  # canonical direction
            take(path[-1], anchor, -1)
            if (avail_deg[path[-1]] >= later_need(path[-1], idx)
                    and avail_deg[anchor] >= later_need(anchor, idx)):
                cycles.append(tuple(path))
                if solve_factor(idx, uncovered, cycles, cycle_len):
                    return True
                cycles.pop()
            take(path[-1], anchor, +1)
            return False
        prev = path[-1]
        floor = first_floor[idx] if len(path) == 1 and not cycles else None
        for v in adjacency.get(prev, ()):
            if floor is not None and v < floor:
                continue  # identical factors are emitted in canonical order
            if v not in uncovered or not avail(prev, v):
                continue
            uncovered.discard(v)
            path.append(v)
            take(prev, v, -1)
            # prev is finished in this factor unless it is the anchor; v still
            # needs its closing edge here plus two per later factor owing it.
            prev_ok = avail_deg[prev] >= later_need(prev, idx) + (1 if prev == anchor else 0)
            v_ok = avail_deg[v] >= 1 + later_need(v, idx)
            if prev_ok and v_ok and grow(path, anchor, uncovered, cycles, cycle_len, idx):
                return True
            take(prev, v, +1)
            path.pop()
            uncovered.add(v)
        return False

    first_floor: dict[int, Vertex | None] = {}

    def solve(idx: int) -> bool:
        if idx == len(specs):
            return all(m == 0 for m in work.values())
        span, cycle_len = specs[idx]
        if idx == len(specs) - 1:
            return take_remainder(span, cycle_len)
        if idx > 0 and specs[idx] == specs[idx - 1] and out:
            prev_first = out[-1][0]
            first_floor[idx] = prev_first[1]
        else:
            first_floor[idx] = None
        return solve_factor(idx, set(span), [], cycle_len)

    if solve(0):
        return out
    raise UnsupportedBlockError("no factor decomposition within budget")


def decompose_into_matchings(pool: Counter[Edge],
                             spans: list[frozenset[Vertex]],
                             budget: int = DEFAULT_BUDGET) -> list[list[Edge]]:
    """Partition `pool` into one perfect matching per span."""
    b = _Budget(budget)
    adjacency: dict[Vertex, list[Vertex]] = {}
    for (x, y) in pool:
        adjacency.setdefault(x, []).append(y)
        adjacency.setdefault(y, []).append(x)
    for v in adjacency:
        adjacency[v] = sorted(set(adjacency[v]))
    work = Counter(pool)
    out: list[list[Edge]] = []

    def solve_matching(idx: int, uncovered: set[Vertex], edges: list[Edge]) -> bool:
        b.spend()
        if not uncovered:
            out.append(list(edges))
            if solve(idx + 1):
                return True
            out.pop()
            return False
        a = min(uncovered)
        uncovered.discard(a)
        floor = first_floor[idx] if not edges else None
        for v in adjacency.get(a, ()):
            if floor is not None and v < floor:
                continue  # canonical order between identical matchings
            e = edge_key(a, v)
            if v not in uncovered or work[e] == 0:
                continue
            uncovered.discard(v)
            work[e] -= 1
            edges.append(e)
            if solve_matching(idx, uncovered, edges):
                return True
            edges.pop()
            work[e] += 1
            uncovered.add(v)
        uncovered.add(a)
        return False

    first_floor: dict[int, Vertex | None] = {}

    def solve(idx: int) -> bool:
        if idx == len(spans):
            return all(m == 0 for m in work.values())
        if idx > 0 and spans[idx] == spans[idx - 1] and out:
            a, v = out[-1][0]
            first_floor[idx] = v if a == min(spans[idx]) else a
        else:
            first_floor[idx] = None
        return solve_matching(idx, set(spans[idx]), [])

    if solve(0):
        return out
    raise UnsupportedBlockError("no matching decomposition within budget")
