"""Exact, budget-bounded brute force.

These solvers are the ground truth for the finders and the generators.  An
exhausted budget never produces a wrong answer: containment reports
``budget``, optimisation problems report an interval that contains the exact
value.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
import time
from dataclasses import dataclass
from itertools import combinations, permutations
from pathlib import Path

from .core import Edge, Embedding, Hypergraph, canonical_form, codegree_table, complete, serialize, parse

FOUND, ABSENT, BUDGET = "found", "absent", "budget"


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int | None = None
    time_limit: float | None = None


UNLIMITED = SearchBudget()


class _Meter:
    def __init__(self, budget: SearchBudget | None):
        self.budget = budget or UNLIMITED
        self.nodes = 0
        self.start = time.monotonic()
        self.tripped = False

    def tick(self):
        self.nodes += 1
        b = self.budget
        if b.node_limit is not None and self.nodes > b.node_limit:
            self.tripped = True
            raise BudgetExceeded
        if b.time_limit is not None and self.nodes % 256 == 0 and time.monotonic() - self.start > b.time_limit:
            self.tripped = True
            raise BudgetExceeded


# --- containment ----------------------------------------------------------


@dataclass
class Containment:
    status: str
    embedding: Embedding | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _Matcher:
    """Backtracking over injective vertex maps pattern -> host."""

    def __init__(self, host: Hypergraph, pattern: Hypergraph, meter: _Meter):
        self.host, self.pattern, self.meter = host, pattern, meter
        self.hdeg = host.degrees
        self.pdeg = pattern.degrees
        self._hpairs = None
        self.ppairs = codegree_table(pattern, 2) if pattern.r >= 2 else {}

    def hpair(self, a, b) -> int:
        if self._hpairs is None:
            self._hpairs = codegree_table(self.host, 2)
        return self._hpairs.get((a, b) if a < b else (b, a), 0)

    def order(self, placed: list[int]) -> list[int]:
        P = self.pattern
        todo = [v for v in P.non_isolated() if v not in placed]
        out = list(placed)
        seen = set(placed)
        while todo:
            def score(v):
                touching = sum(1 for i in P.incidence[v] if seen.intersection(P.edges[i]))
                return (touching, self.pdeg[v], -v)
            v = max(todo, key=score)
            todo.remove(v)
            out.append(v)
            seen.add(v)
        return out

    def run(self, initial: dict[int, int]) -> dict[int, int] | None:
        P, H = self.pattern, self.host
        order = self.order(list(initial))
        rank = {v: i for i, v in enumerate(order)}
        closing: dict[int, list[Edge]] = {v: [] for v in order}
        for e in P.edges:
            closing[max(e, key=rank.__getitem__)].append(e)
        anchors: dict[int, Edge | None] = {}
        for v in order:
            best, best_seen = None, 0
            for i in P.incidence[v]:
                f = P.edges[i]
                k = sum(1 for u in f if rank[u] < rank[v])
                if k > best_seen:
                    best, best_seen = f, k
            anchors[v] = best
        partners = {v: [u for u in order[:rank[v]] if (min(u, v), max(u, v)) in self.ppairs] for v in order}

        mapping = dict(initial)
        for v in initial:
            for e in closing[v]:
                if all(u in mapping for u in e) and tuple(sorted(mapping[u] for u in e)) not in H.edge_set:
                    return None
        used = set(mapping.values())
        start = len(initial)

        def candidates(v):
            f = anchors[v]
            if f is None:
                return range(H.n)
            placed = [mapping[u] for u in f if u in mapping]
            pivot = min(placed, key=lambda x: self.hdeg[x])
            need = set(placed)
            cands = set()
            for i in H.incidence[pivot]:
                he = H.edges[i]
                if need.issubset(he):
                    cands.update(he)
            cands -= need
            return sorted(cands)

        def extend(pos):
            if pos == len(order):
                return True
            self.meter.tick()
            v = order[pos]
            for x in candidates(v):
                if x in used or self.hdeg[x] < self.pdeg[v]:
                    continue
                ok = True
                for u in partners[v]:
                    if u in mapping and self.hpair(x, mapping[u]) < self.ppairs[(min(u, v), max(u, v))]:
                        ok = False
                        break
                if not ok:
                    continue
                mapping[v] = x
                if all(tuple(sorted(mapping[u] for u in e)) in H.edge_set for e in closing[v]):
                    used.add(x)
                    if extend(pos + 1):
                        return True
                    used.discard(x)
                del mapping[v]
            return False

        return dict(mapping) if extend(start) else None


def _finish_map(host: Hypergraph, pattern: Hypergraph, mapping: dict[int, int]) -> Embedding | None:
    free = [x for x in range(host.n) if x not in set(mapping.values())]
    loose = [v for v in range(pattern.n) if v not in mapping]
    if len(loose) > len(free):
        return None
    for v, x in zip(loose, free):
        mapping[v] = x
    return Embedding(pattern, host, tuple(mapping[v] for v in range(pattern.n)))


def contains_exact(host: Hypergraph, pattern: Hypergraph, budget: SearchBudget | None = None,
                   anchor: Edge | None = None) -> Containment:
    """Complete search for a copy of ``pattern`` in ``host``.

    With ``anchor`` set, only copies using that host edge are considered.
    """
    if pattern.r != host.r:
        raise ValueError(f"uniformity mismatch: pattern r={pattern.r}, host r={host.r}")
    meter = _Meter(budget)
    if pattern.n > host.n:
        return Containment(ABSENT, None, 0)
    if pattern.e > host.e:
        return Containment(ABSENT, None, 0)
    matcher = _Matcher(host, pattern, meter)
    try:
        if anchor is None:
            found = matcher.run({})
            found = [found] if found is not None else []
        else:
            anchor = tuple(sorted(anchor))
            if anchor not in host.edge_set:
                raise ValueError(f"anchor {anchor} is not a host edge")
            found = []
            seen = set()
            for f in pattern.edges:
                for img in permutations(anchor):
                    init = dict(zip(f, img))
                    key = tuple(sorted(init.items()))
                    if key in seen:
                        continue
                    seen.add(key)
                    m = matcher.run(init)
                    if m is not None:
                        found = [m]
                        break
                if found:
                    break
    except BudgetExceeded:
        return Containment(BUDGET, None, meter.nodes)
    if found:
        emb = _finish_map(host, pattern, found[0])
        if emb is not None:
            return Containment(FOUND, emb, meter.nodes)
    return Containment(ABSENT, None, meter.nodes)


def contains(host: Hypergraph, pattern: Hypergraph) -> bool:
    res = contains_exact(host, pattern)
    return res.found


# --- set packing and sunflowers ------------------------------------------


def _popcount(x: int) -> int:
    return bin(x).count("1")


def max_packing(masks: list[int], width: int, meter: _Meter, stop_at: int | None = None) -> list[int]:
    """Largest family of pairwise-disjoint masks (each of popcount ``width``)."""
    masks = sorted(set(masks))
    best: list[int] = []
    universe = 0
    for m in masks:
        universe |= m

    def go(pool: list[int], chosen: list[int], free: int):
        nonlocal best
        meter.tick()
        if len(chosen) > len(best):
            best = list(chosen)
            if stop_at is not None and len(best) >= stop_at:
                raise _Done
        if not pool:
            return
        if len(chosen) + min(len(pool), _popcount(free) // width) <= len(best):
            return
        # branch on the vertex lying in the fewest remaining sets
        low = None
        counts: dict[int, int] = {}
        for m in pool:
            x = m
            while x:
                b = x & -x
                counts[b] = counts.get(b, 0) + 1
                x ^= b
        low = min(counts, key=lambda b: (counts[b], b.bit_length()))
        with_low = [m for m in pool if m & low]
        without = [m for m in pool if not m & low]
        for m in with_low:
            chosen.append(m)
            go([x for x in without if not x & m] + [x for x in with_low if False], chosen, free & ~m)
            chosen.pop()
            if stop_at is not None and len(best) >= stop_at:
                return
        go(without, chosen, free & ~low)

    class _Done(Exception):
        pass

    try:
        go(masks, [], universe)
    except _Done:
        pass
    return best


@dataclass
class SunflowerResult:
    value: int
    kernel: tuple[int, ...] | None
    witness: list[Edge]
    exact: bool
    nodes: int

    def as_embedding(self, host: Hypergraph) -> Embedding | None:
        from .constructions import sunflower_pattern
        from .core import SunflowerShape
        if not self.witness:
            return None
        t = len(self.kernel)
        shape = SunflowerShape(host.r, t, len(self.witness))
        vmap = list(self.kernel)
        for e in self.witness:
            vmap.extend(v for v in e if v not in self.kernel)
        return Embedding(sunflower_pattern(shape), host, tuple(vmap))


def max_sunflower_exact(G: Hypergraph, t: int, budget: SearchBudget | None = None,
                        stop_at: int | None = None) -> SunflowerResult:
    """Largest k with Sf_r(t,k) in G, with a witness sunflower.

    ``stop_at`` ends the search once a sunflower that large is found.
    """
    if not 0 <= t <= G.r - 1:
        raise ValueError(f"kernel size must satisfy 0 <= t <= r-1, got t={t}")
    meter = _Meter(budget)
    if not G.e:
        return SunflowerResult(0, None, [], True, 0)
    width = G.r - t
    cap = (G.n - t) // width
    if t == 0:
        kernels = [((), G.e)]
    else:
        kernels = sorted(codegree_table(G, t).items(), key=lambda kv: (-kv[1], kv[0]))
    best, best_kernel, best_edges = 0, None, []
    exact = True
    try:
        for C, cod in kernels:
            if cod <= best:
                break
            if best >= cap or (stop_at is not None and best >= stop_at):
                break
            C = tuple(C)
            cset = set(C)
            petals = {}
            for e in G.edges:
                if cset.issubset(e):
                    m = sum(1 << v for v in e if v not in cset)
                    petals[m] = e
            goal = None if stop_at is None else stop_at
            pack = max_packing(list(petals), width, meter, goal)
            if len(pack) > best:
                best, best_kernel = len(pack), C
                best_edges = sorted(petals[m] for m in pack)
    except BudgetExceeded:
        exact = False
    return SunflowerResult(best, best_kernel, best_edges, exact, meter.nodes)


def is_sunflower(sets: list[Edge]) -> bool:
    """Distinct sets whose pairwise intersections all equal the common kernel."""
    sets = [frozenset(s) for s in sets]
    if len(set(sets)) != len(sets):
        return False
    if len(sets) <= 1:
        return True
    kernel = frozenset.intersection(*sets)
    return all(a & b == kernel for a, b in combinations(sets, 2))


# --- Turán numbers --------------------------------------------------------


@dataclass
class TuranResult:
    lower: int
    upper: int
    witness: Hypergraph
    nodes: int
    method: str = "conflict"
    cached: bool = False

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int:
        if not self.exact:
            raise ValueError(f"interval result [{self.lower}, {self.upper}]")
        return self.lower

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "nodes": self.nodes,
            "method": self.method,
            "witness": serialize(self.witness),
        }


def pattern_copies(n: int, pattern: Hypergraph) -> list[frozenset[Edge]]:
    """Every copy of ``pattern`` in the complete r-graph on n vertices, as an edge set."""
    P = pattern.strip_isolated()
    p = P.n
    if p > n:
        return []
    shapes = set()
    for perm in permutations(range(p)):
        shapes.add(tuple(sorted(tuple(sorted(perm[v] for v in e)) for e in P.edges)))
    shapes = sorted(shapes)
    out = set()
    for verts in combinations(range(n), p):
        for shape in shapes:
            out.add(frozenset(tuple(verts[v] for v in e) for e in shape))
    return sorted(out, key=lambda s: sorted(s))


class _ConflictSolver:
    """Maximum set of potential edges containing no copy, by branch and bound."""

    def __init__(self, m: int, copies: list[int], meter: _Meter, symmetric_first: bool):
        self.m = m
        self.copies = copies
        self.meter = meter
        self.by_edge: list[list[int]] = [[] for _ in range(m)]
        for c in copies:
            x = c
            while x:
                b = x & -x
                self.by_edge[b.bit_length() - 1].append(c)
                x ^= b
        self.best = -1
        self.best_set = 0
        self.open_bound = -1
        self.symmetric_first = symmetric_first

    def bound(self, i: int, inc: int, exc: int, count: int) -> int:
        undecided = ((1 << self.m) - 1) & ~((1 << i) - 1)
        budget = self.m - i
        taken = 0
        forced = 0
        for c in self.copies:
            if c & exc:
                continue
            u = c & undecided
            if not u or u & taken:
                continue
            taken |= u
            forced += 1
        return count + budget - forced

    def solve(self):
        self.go(0, 0, 0, 0)

    def go(self, i, inc, exc, count):
        self.meter.tick()
        if i == self.m:
            if count > self.best:
                self.best, self.best_set = count, inc
            return
        if count + (self.m - i) <= self.best:
            return
        b = self.bound(i, inc, exc, count)
        if b <= self.best:
            return
        try:
            bit = 1 << i
            allowed = all((c & ~inc) != bit for c in self.by_edge[i])
            if allowed:
                self.go(i + 1, inc | bit, exc, count + 1)
                if i == 0 and self.symmetric_first:
                    # every potential edge lies in one orbit: some optimum uses edge 0
                    return
            self.go(i + 1, inc, exc | bit, count)
        except BudgetExceeded:
            self.open_bound = max(self.open_bound, b)
            raise


def ex_exact(n: int, pattern: Hypergraph, budget: SearchBudget | None = None, cache=None) -> TuranResult:
    """ex(n, pattern) via maximum independent set in the copy-conflict hypergraph."""
    if pattern.e == 0:
        raise ValueError("pattern must have at least one edge")
    r = pattern.r
    if cache is not None:
        hit = cache.get_turan(n, pattern)
        if hit is not None:
            return hit
    meter = _Meter(budget)
    edges = list(combinations(range(n), r))
    index = {e: i for i, e in enumerate(edges)}
    copies = [sum(1 << index[e] for e in c) for c in pattern_copies(n, pattern)]
    copies = _minimal_masks(copies)
    solver = _ConflictSolver(len(edges), copies, meter, symmetric_first=True)
    exact = True
    try:
        solver.solve()
    except BudgetExceeded:
        exact = False
    chosen = [edges[i] for i in range(len(edges)) if solver.best_set >> i & 1]
    lower = max(solver.best, 0)
    witness = Hypergraph(r, n, tuple(chosen))
    upper = lower if exact else max(lower, solver.open_bound)
    res = TuranResult(lower, upper, witness, meter.nodes, "conflict")
    if cache is not None and exact:
        cache.put_turan(n, pattern, res)
    return res


def _minimal_masks(masks: list[int]) -> list[int]:
    masks = sorted(set(masks), key=lambda m: (_popcount(m), m))
    out: list[int] = []
    for m in masks:
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def ex_by_dfs(n: int, pattern: Hypergraph, budget: SearchBudget | None = None) -> TuranResult:
    """ex(n, pattern) by DFS over pattern-free edge sets, checked with containment search.

    Independent of copy enumeration: an edge stays a candidate while adding it
    alone to the current set creates no copy, tested by searching for a copy
    through that edge.  Two bounds prune the search: |current| + |candidates|,
    and for each vertex v, ex(n-1) + (edges that can still contain v), with
    ex(n-1) computed first by the same search.
    """
    if pattern.e == 0:
        raise ValueError("pattern must have at least one edge")
    P = pattern.strip_isolated()
    meter = _Meter(budget)
    r = pattern.r
    if P.n > n:
        m = math.comb(n, r)
        return TuranResult(m, m, complete(r, n), 0, "dfs")
    ex_prev = None
    for k in range(max(P.n, r), n + 1):
        lower, upper, best = _dfs_level(k, P, r, meter, ex_prev)
        if lower != upper:
            break
        ex_prev = lower
    if k < n:
        # a smaller level ran out of budget: its witness still pads to n vertices
        upper = math.comb(n, r)
    return TuranResult(lower, upper, Hypergraph(r, n, tuple(best)), meter.nodes, "dfs")


def _dfs_level(n: int, P: Hypergraph, r: int, meter: _Meter, ex_prev: int | None):
    edges = list(combinations(range(n), r))
    best: list[Edge] = []
    current: list[Edge] = []
    open_bound = -1

    def addable(f) -> bool:
        host = Hypergraph(r, n, tuple(current) + (f,))
        return not contains_exact(host, P, anchor=f).found

    # averaging over the n vertex-deleted subsets: |F| <= n ex(n-1) / (n-r)
    cap = None if ex_prev is None else (n * ex_prev) // (n - r)

    def bound(cands) -> int:
        """Largest |F| for a free F with current <= F <= current + cands.

        Vertex 0 may be taken to have maximum degree in F (relabel, then
        send an edge through it to edge 0), so every degree is capped by
        the degree vertex 0 can still reach.
        """
        deg = [0] * n
        for e in current:
            for v in e:
                deg[v] += 1
        for e in cands:
            for v in e:
                deg[v] += 1
        top = deg[0]
        out = min(len(current) + len(cands), sum(min(d, top) for d in deg) // r)
        if ex_prev is not None:
            out = min(out, cap, ex_prev + min(deg))
        return out

    def go(cands: list[Edge], forced: bool = False):
        nonlocal best, open_bound
        meter.tick()
        if len(current) > len(best):
            best = list(current)
        if not cands or bound(cands) <= len(best):
            return
        try:
            e, rest = cands[0], cands[1:]
            current.append(e)
            go([f for f in rest if addable(f)])
            current.pop()
            # every nonempty free set is isomorphic to one through edge 0
            if not forced:
                go(rest)
        except BudgetExceeded:
            open_bound = max(open_bound, bound(cands))
            raise

    exact = True
    try:
        go([f for f in edges if addable(f)], forced=True)
    except BudgetExceeded:
        exact = False
    lower = len(best)
    upper = lower if exact else max(lower, open_bound)
    return lower, upper, best


# --- unavoidability -------------------------------------------------------

YES, NO = "yes", "no"


@dataclass
class Unavoidability:
    answer: str
    witness: Hypergraph | None
    turan: TuranResult | None


def is_unavoidable(pattern: Hypergraph, n: int, e: int, budget: SearchBudget | None = None,
                   cache=None) -> Unavoidability:
    """Is ``pattern`` contained in every n-vertex r-graph with e edges?

    Isolated pattern vertices are stripped first.
    """
    r = pattern.r
    if not 0 < e <= math.comb(n, r):
        raise ValueError(f"need 0 < e <= C(n,r), got e={e}")
    P = pattern.strip_isolated()
    if P.e == 0:
        return Unavoidability(YES, None, None)
    if P.n > n:
        return Unavoidability(NO, complete(r, n).subgraph(list(combinations(range(n), r))[:e]), None)
    res = ex_exact(n, P, budget, cache)
    if e <= res.lower:
        return Unavoidability(NO, res.witness.subgraph(res.witness.edges[:e]), res)
    if e > res.upper:
        return Unavoidability(YES, None, res)
    return Unavoidability(BUDGET, None, res)


@dataclass
class UnResult:
    lower: int
    upper: int | None
    witness: Hypergraph
    patterns_checked: int


def _extensions(P: Hypergraph, max_vertices: int):
    """One-edge extensions of P using old vertices plus fresh labels."""
    r, v = P.r, P.n
    for j in range(r + 1):
        fresh = r - j
        if v + fresh > max_vertices:
            continue
        for old in combinations(range(v), j):
            e = old + tuple(range(v, v + fresh))
            if e in P.edge_set:
                continue
            yield Hypergraph(r, v + fresh, P.edges + (e,))


def un_exact(r: int, n: int, e: int, max_pattern_vertices: int | None = None,
             budget: SearchBudget | None = None, cache=None) -> UnResult:
    """Largest edge count of an (n,e)-unavoidable r-graph, with a witness pattern.

    Patterns are grown one edge at a time from unavoidable ones only, since
    unavoidability is inherited by subgraphs.
    """
    if not 0 < e <= math.comb(n, r):
        raise ValueError(f"need 0 < e <= C(n,r), got e={e}")
    maxv = n if max_pattern_vertices is None else min(n, max_pattern_vertices)
    level = {canonical_form(Hypergraph(r, r, (tuple(range(r)),))): Hypergraph(r, r, (tuple(range(r)),))}
    best = next(iter(level.values()))
    q = 1
    checked = 0
    ex_cache: dict[bytes, TuranResult] = {}
    while True:
        nxt: dict[bytes, Hypergraph] = {}
        undecided = False
        for P in level.values():
            for Q in _extensions(P, maxv):
                key = canonical_form(Q)
                if key in nxt or key in ex_cache and ex_cache[key].upper >= e:
                    continue
                checked += 1
                if key not in ex_cache:
                    ex_cache[key] = ex_exact(n, Q, budget, cache)
                res = ex_cache[key]
                if res.upper < e:
                    nxt[key] = Q
                elif res.lower < e:
                    undecided = True
        if not nxt:
            return UnResult(q, None if undecided else q, best, checked)
        q += 1
        level = dict(sorted(nxt.items()))
        best = next(iter(level.values()))


# --- Erdős–Rado function --------------------------------------------------


@dataclass
class FResult:
    lower: int
    upper: int
    witness: Hypergraph
    nodes: int

    @property
    def exact(self) -> bool:
        return self.lower == self.upper


def _creates_sunflower(family: list[frozenset], X: frozenset, k: int, meter: _Meter) -> bool:
    if k <= 1:
        return True
    r = len(X)
    for size in range(r):
        for C in combinations(sorted(X), size):
            C = frozenset(C)
            petals = [sum(1 << v for v in Y - C) for Y in family if C <= Y and Y & X == C]
            if len(petals) < k - 1:
                continue
            if len(max_packing(petals, r - size, meter, stop_at=k - 1)) >= k - 1:
                return True
    return False


def erdos_rado_bounds(r: int, k: int) -> tuple[int, int]:
    return (k - 1) ** r, (k - 1) ** r * math.factorial(r) + 1


def f_exact(r: int, k: int, budget: SearchBudget | None = None) -> FResult:
    """Smallest m such that every family of m r-sets contains a k-petal sunflower.

    Sunflower-free families are grown level by level up to isomorphism; a
    family of m sets touches at most r*m points, so new sets only ever need
    fresh points beyond those already used.
    """
    if r < 1 or k < 1:
        raise ValueError("need r >= 1 and k >= 1")
    lo_bound, hi_bound = erdos_rado_bounds(r, k)
    meter = _Meter(budget)
    if k == 1:
        return FResult(1, 1, Hypergraph(r, 0, ()), 0)
    level = {b"": Hypergraph(r, 0, ())}
    size = 0
    try:
        while True:
            nxt: dict[bytes, Hypergraph] = {}
            for F in level.values():
                fam = [frozenset(e) for e in F.edges]
                for Q in _extensions(F, F.n + r):
                    meter.tick()
                    new = next(e for e in Q.edges if e not in F.edge_set)
                    if _creates_sunflower(fam, frozenset(new), k, meter):
                        continue
                    key = canonical_form(Q, max_vertices=Q.n)
                    nxt.setdefault(key, Q)
            if not nxt:
                best = next(iter(level.values()))
                result = FResult(size + 1, size + 1, best, meter.nodes)
                break
            size += 1
            level = dict(sorted(nxt.items()))
    except BudgetExceeded:
        best = next(iter(level.values()))
        result = FResult(max(size + 1, lo_bound), hi_bound, best, meter.nodes)
    if not lo_bound <= result.lower <= result.upper <= hi_bound:
        raise AssertionError(f"f_{r}({k}) interval {result.lower}..{result.upper} violates the Erdős–Rado bounds")
    return result


# --- result cache ---------------------------------------------------------


class OracleCache:
    """Turán results on disk, keyed by (n, canonical form of the pattern).

    Each key is one JSON file written atomically; hits are revalidated.
    """

    def __init__(self, directory):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.rejected = 0

    def _path(self, n: int, pattern: Hypergraph) -> Path:
        key = hashlib.sha256(b"ex|%d|" % n + canonical_form(pattern.strip_isolated())).hexdigest()
        return self.dir / f"ex-{key}.json"

    def get_turan(self, n: int, pattern: Hypergraph) -> TuranResult | None:
        path = self._path(n, pattern)
        if not path.exists():
            return None
        data = json.loads(path.read_text())
        witness = parse(data["witness"])
        valid = (
            data["exact"]
            and witness.n == n
            and witness.e == data["lower"]
            and not contains_exact(witness, pattern.strip_isolated()).found
        )
        if not valid:
            self.rejected += 1
            return None
        self.hits += 1
        return TuranResult(data["lower"], data["upper"], witness, data["nodes"], data["method"], cached=True)

    def put_turan(self, n: int, pattern: Hypergraph, res: TuranResult) -> None:
        path = self._path(n, pattern)
        fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(res.to_dict(), fh)
        os.replace(tmp, path)
