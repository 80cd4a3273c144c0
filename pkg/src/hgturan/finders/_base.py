"""Shared plumbing for the finders: reports, indexes, greedy primitives."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from ..core import Edge, Embedding, Hypergraph


@dataclass(frozen=True)
class ExpansionThreshold:
    set_size: int
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError(f"threshold must be non-negative, got {self.value}")

    def holds(self, codeg: int) -> bool:
        return codeg >= self.value


@dataclass
class FinderReport:
    finder: str
    found: bool
    embeddings: list[Embedding] = field(default_factory=list)
    stats: Counter = field(default_factory=Counter)
    trace: list[str] = field(default_factory=list)
    failed_phase: str | None = None
    disjoint: bool = False
    info: dict = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return "found" if self.found else "exhausted"

    def problems(self) -> list[str]:
        out = []
        for i, emb in enumerate(self.embeddings):
            out.extend(f"copy {i}: {p}" for p in emb.problems())
        if self.disjoint:
            seen: set[int] = set()
            for i, emb in enumerate(self.embeddings):
                clash = seen & emb.host_vertices
                if clash:
                    out.append(f"copy {i} reuses host vertices {sorted(clash)}")
                seen |= emb.host_vertices
        return out

    def to_dict(self) -> dict:
        return {
            "finder": self.finder,
            "outcome": self.outcome,
            "embeddings": [e.to_dict() for e in self.embeddings],
            "stats": dict(sorted(self.stats.items())),
            "trace": list(self.trace),
            "failed_phase": self.failed_phase,
            "disjoint": self.disjoint,
            "info": self.info,
        }


class CertificateError(AssertionError):
    """A finder produced an embedding that does not validate: always a bug."""


class Run:
    """Accumulates the trace and statistics of one finder call."""

    def __init__(self, finder: str):
        self.finder = finder
        self.trace: list[str] = []
        self.stats: Counter = Counter()
        self.info: dict = {}

    def phase(self, name: str) -> None:
        self.trace.append(name)

    def done(self, embeddings: list[Embedding], disjoint: bool = False) -> FinderReport:
        rep = FinderReport(self.finder, True, list(embeddings), self.stats, self.trace, None, disjoint, self.info)
        bad = rep.problems()
        if bad:
            raise CertificateError(f"{self.finder}: " + "; ".join(bad))
        return rep

    def fail(self, phase: str) -> FinderReport:
        return FinderReport(self.finder, False, [], self.stats, self.trace, phase, False, self.info)


class Index:
    """Lazy lookup tables over one hypergraph.

    ``over(S)`` lists the complements e - S of the edges e containing S,
    in lexicographic order.
    """

    def __init__(self, G: Hypergraph):
        self.G = G
        self._tables: dict[int, dict[tuple, list[tuple]]] = {}

    def table(self, size: int) -> dict[tuple, list[tuple]]:
        if size not in self._tables:
            tab: dict[tuple, list[tuple]] = {}
            for e in self.G.edges:
                for S in combinations(e, size):
                    tab.setdefault(S, []).append(tuple(v for v in e if v not in S))
            for lst in tab.values():
                lst.sort()
            self._tables[size] = tab
        return self._tables[size]

    def over(self, S) -> list[tuple]:
        S = tuple(sorted(S))
        return self.table(len(S)).get(S, [])

    def codegree(self, S) -> int:
        return len(self.over(S))

    def expanding(self, size: int, threshold: float) -> list[tuple]:
        return sorted(S for S, lst in self.table(size).items() if len(lst) >= threshold)

    def link(self, S) -> Hypergraph:
        S = tuple(sorted(S))
        return Hypergraph(self.G.r - len(S), self.G.n, tuple(self.over(S)))


def restrict(G: Hypergraph, avoid: Iterable[int] = (), keep: Callable[[Edge], bool] | None = None) -> Hypergraph:
    avoid = set(avoid)
    edges = tuple(e for e in G.edges if not avoid.intersection(e) and (keep is None or keep(e)))
    return Hypergraph(G.r, G.n, edges)


def by_degree(G: Hypergraph, among: Iterable[int] | None = None) -> list[int]:
    """Vertices by descending degree, ties by index; isolated vertices dropped."""
    deg = G.degrees
    pool = range(G.n) if among is None else among
    return sorted((v for v in pool if deg[v] > 0), key=lambda v: (-deg[v], v))


def adjacency(edges: Iterable[tuple[int, int]]) -> dict[int, list[int]]:
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for lst in adj.values():
        lst.sort()
    return adj


# --- greedy primitives on graphs -----------------------------------------


def greedy_matching(edges: Iterable[tuple], size: int, used: set[int] | None = None) -> list[tuple] | None:
    """Take the lex-first edge, drop everything touching it, repeat."""
    taken: set[int] = set(used or ())
    out = []
    for e in sorted(edges):
        if taken.intersection(e):
            continue
        out.append(e)
        taken.update(e)
        if len(out) == size:
            return out
    return None if size > 0 else []


def star_at(adj: dict[int, list[int]], centre: int, k: int, used: set[int],
            leaf_ok: Callable[[int], bool] | None = None) -> list[int] | None:
    leaves = []
    for u in adj.get(centre, ()):
        if u in used or (leaf_ok is not None and not leaf_ok(u)):
            continue
        leaves.append(u)
        if len(leaves) == k:
            return leaves
    return None


def greedy_stars(edges: Iterable[tuple[int, int]], k: int, count: int, used: set[int] | None = None,
                 centre_ok: Callable[[int], bool] | None = None,
                 leaf_ok: Callable[[int], bool] | None = None) -> list[tuple[int, list[int]]]:
    """Maximal collection (up to ``count``) of vertex-disjoint k-stars.

    Centres are tried in order of descending degree, ties by index; leaves
    are the smallest admissible neighbours.
    """
    adj = adjacency(edges)
    taken = set(used or ())
    out: list[tuple[int, list[int]]] = []
    progress = True
    while progress and len(out) < count:
        progress = False
        order = sorted(adj, key=lambda v: (-len(adj[v]), v))
        for c in order:
            if c in taken or (centre_ok is not None and not centre_ok(c)):
                continue
            leaves = star_at(adj, c, k, taken | {c}, leaf_ok)
            if leaves is None:
                continue
            out.append((c, leaves))
            taken.add(c)
            taken.update(leaves)
            progress = True
            break
    return out


def extend_sets(index: Index, bases: list[tuple], per_base: int, used: set[int],
                ok: Callable[[int], bool] | None = None) -> list[list[int]] | None:
    """Give every base set ``per_base`` new vertices completing it to an edge.

    Always the smallest unused admissible vertex; ``used`` is updated.
    """
    out = []
    for S in bases:
        got = []
        for comp in index.over(S):
            (x,) = comp
            if x in used or (ok is not None and not ok(x)):
                continue
            got.append(x)
            used.add(x)
            if len(got) == per_base:
                break
        if len(got) < per_base:
            return None
        out.append(got)
    return out


def preorder(tree) -> list[int]:
    """Flatten (vertex, children) trees into the pattern's depth-first labelling."""
    v, kids = tree
    out = [v]
    for kid in kids:
        out.extend(preorder(kid))
    return out


def leaf(v: int):
    return (v, [])


def count_types(edges: Iterable[Edge], bucket: dict[int, int], parts: int) -> dict[tuple, list[Edge]]:
    """Group edges by how many vertices they have in each bucket."""
    groups: dict[tuple, list[Edge]] = {}
    for e in edges:
        c = [0] * parts
        for v in e:
            c[bucket[v]] += 1
        groups.setdefault(tuple(c), []).append(e)
    return groups
