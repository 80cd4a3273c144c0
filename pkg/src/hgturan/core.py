"""Uniform hypergraphs on dense integer vertex sets.

Every other module consumes :class:`Hypergraph`.  Values are immutable once
built; edges are stored as sorted tuples in lexicographic order, so iteration
order is deterministic everywhere.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Edge = tuple[int, ...]

CANONICAL_MAX_VERTICES = 12


class HypergraphError(ValueError):
    """Raised for edges that violate uniformity or vertex range."""


class HypergraphParseError(ValueError):
    def __init__(self, line_no: int, cause: str):
        super().__init__(f"line {line_no}: {cause}")
        self.line_no = line_no
        self.cause = cause


class CanonicalBudgetError(RuntimeError):
    """Canonical labelling refused because the vertex count is too large."""


@dataclass(frozen=True)
class Hypergraph:
    r: int
    n: int
    edges: tuple[Edge, ...]
    incidence: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    edge_set: frozenset[Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.r < 1:
            raise HypergraphError(f"uniformity must be >= 1, got {self.r}")
        if self.n < 0:
            raise HypergraphError(f"vertex count must be >= 0, got {self.n}")
        canon = set()
        for raw in self.edges:
            e = tuple(sorted(raw))
            if len(e) != self.r or len(set(e)) != self.r:
                raise HypergraphError(f"edge {tuple(raw)} does not have {self.r} distinct vertices")
            if e[0] < 0 or e[-1] >= self.n:
                raise HypergraphError(f"edge {tuple(raw)} has a vertex outside 0..{self.n - 1}")
            canon.add(e)
        edges = tuple(sorted(canon))
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(edges):
            for v in e:
                inc[v].append(i)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "edge_set", frozenset(edges))
        object.__setattr__(self, "incidence", tuple(tuple(x) for x in inc))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def __iter__(self):
        return iter(self.edges)

    @property
    def e(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(x) for x in self.incidence)

    def edges_at(self, v: int) -> list[Edge]:
        return [self.edges[i] for i in self.incidence[v]]

    def edge_masks(self) -> list[int]:
        """Edges as vertex bitmasks, in edge order."""
        return [sum(1 << v for v in e) for e in self.edges]

    def subgraph(self, edges: Iterable[Sequence[int]]) -> Hypergraph:
        """Same vertex set, the given edges (which need not belong to self)."""
        return Hypergraph(self.r, self.n, tuple(edges))

    def without_vertices(self, vertices: Iterable[int]) -> Hypergraph:
        """Drop every edge touching ``vertices``; the vertex set is unchanged."""
        bad = set(vertices)
        return self.subgraph(e for e in self.edges if bad.isdisjoint(e))

    def relabel(self, perm: Sequence[int], n: int | None = None) -> Hypergraph:
        """Image under the vertex map ``v -> perm[v]``."""
        return Hypergraph(self.r, self.n if n is None else n, tuple(tuple(perm[v] for v in e) for e in self.edges))

    def non_isolated(self) -> list[int]:
        return [v for v in range(self.n) if self.incidence[v]]

    def strip_isolated(self) -> Hypergraph:
        """Relabel the non-isolated vertices to 0..m-1 (order preserved)."""
        keep = self.non_isolated()
        index = {v: i for i, v in enumerate(keep)}
        return Hypergraph(self.r, len(keep), tuple(tuple(index[v] for v in e) for e in self.edges))


@dataclass(frozen=True)
class SunflowerShape:
    r: int
    t: int
    k: int

    def __post_init__(self):
        if not 0 <= self.t < self.r:
            raise ValueError(f"kernel size must satisfy 0 <= t < r, got t={self.t}, r={self.r}")
        if self.k < 1:
            raise ValueError(f"petal count must be >= 1, got {self.k}")

    @property
    def vertex_count(self) -> int:
        return self.t + self.k * (self.r - self.t)


@dataclass(frozen=True)
class StarShape:
    r: int
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if len(self.degrees) != self.r - 1:
            raise ValueError(f"St_{self.r} needs {self.r - 1} degrees, got {len(self.degrees)}")
        if any(d < 1 for d in self.degrees):
            raise ValueError(f"star degrees must be positive, got {self.degrees}")

    @classmethod
    def of(cls, *degrees: int) -> StarShape:
        return cls(len(degrees) + 1, tuple(degrees))

    @property
    def edge_count(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out

    @property
    def vertex_count(self) -> int:
        total, layer = 1, 1
        for d in self.degrees:
            layer *= d
            total += layer
        return total


@dataclass(frozen=True)
class Embedding:
    """Certificate that ``pattern`` sits inside ``host``.

    ``vertex_map[i]`` is the host vertex that pattern vertex ``i`` lands on.
    """

    pattern: Hypergraph
    host: Hypergraph
    vertex_map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", tuple(self.vertex_map))

    def image(self, v: int) -> int:
        return self.vertex_map[v]

    @property
    def host_vertices(self) -> frozenset[int]:
        return frozenset(self.vertex_map)

    def image_edges(self) -> list[Edge]:
        return [tuple(sorted(self.vertex_map[v] for v in e)) for e in self.pattern.edges]

    def problems(self) -> list[str]:
        out = []
        if len(self.vertex_map) != self.pattern.n:
            out.append(f"map covers {len(self.vertex_map)} of {self.pattern.n} pattern vertices")
            return out
        if len(set(self.vertex_map)) != len(self.vertex_map):
            out.append("vertex map is not injective")
        if any(not 0 <= v < self.host.n for v in self.vertex_map):
            out.append("vertex map leaves the host vertex set")
            return out
        for e in self.image_edges():
            if e not in self.host.edge_set:
                out.append(f"image edge {e} missing from host")
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def to_dict(self) -> dict:
        return {
            "pattern": {"r": self.pattern.r, "n": self.pattern.n, "edges": [list(e) for e in self.pattern.edges]},
            "vertex_map": list(self.vertex_map),
        }


@dataclass(frozen=True)
class LevelSetPartition:
    thresholds: tuple[float, float, float]
    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]
    D: frozenset[int]

    def bucket_of(self, v: int) -> str:
        for name in "ABCD":
            if v in getattr(self, name):
                return name
        raise KeyError(v)


def build(r: int, n: int, edge_list: Iterable[Iterable[int]]) -> Hypergraph:
    """Build an r-graph on 0..n-1, collapsing duplicate edges."""
    return Hypergraph(r, n, tuple(tuple(e) for e in edge_list))


def empty(r: int, n: int) -> Hypergraph:
    return Hypergraph(r, n, ())


def complete(r: int, n: int) -> Hypergraph:
    return Hypergraph(r, n, tuple(combinations(range(n), r)))


def disjoint_union(graphs: Sequence[Hypergraph]) -> Hypergraph:
    if not graphs:
        raise ValueError("need at least one hypergraph")
    r = graphs[0].r
    edges, offset = [], 0
    for g in graphs:
        if g.r != r:
            raise HypergraphError("disjoint union needs equal uniformity")
        edges.extend(tuple(v + offset for v in e) for e in g.edges)
        offset += g.n
    return Hypergraph(r, offset, tuple(edges))


def _check_set(G: Hypergraph, S) -> tuple[int, ...]:
    S = tuple(sorted(set(S)))
    if S and (S[0] < 0 or S[-1] >= G.n):
        raise ValueError(f"vertex set {S} leaves 0..{G.n - 1}")
    return S


def edges_containing(G: Hypergraph, S) -> list[Edge]:
    S = _check_set(G, S)
    if not S:
        return list(G.edges)
    pivot = min(S, key=G.degree)
    rest = set(S)
    return [e for e in G.edges_at(pivot) if rest.issubset(e)]


def codegree(G: Hypergraph, S) -> int:
    """Number of edges containing every vertex of S."""
    S = _check_set(G, S)
    if len(S) > G.r:
        return 0
    return len(edges_containing(G, S))


def link(G: Hypergraph, S) -> Hypergraph:
    """The (r - |S|)-graph of sets T with S ∪ T an edge and S ∩ T empty."""
    S = _check_set(G, S)
    if not 1 <= len(S) <= G.r - 1:
        raise ValueError(f"link needs 1 <= |S| <= r-1, got |S|={len(S)}, r={G.r}")
    drop = set(S)
    return Hypergraph(G.r - len(S), G.n, tuple(tuple(v for v in e if v not in drop) for e in edges_containing(G, S)))


def codegree_table(G: Hypergraph, size: int) -> Counter:
    """Codegree of every ``size``-set with nonzero codegree."""
    table: Counter = Counter()
    for e in G.edges:
        table.update(combinations(e, size))
    return table


def expanding_sets(G: Hypergraph, size: int, threshold: float) -> list[tuple[int, ...]]:
    """All ``size``-sets with codegree >= threshold, in lexicographic order."""
    if not 1 <= size <= G.r - 1:
        raise ValueError(f"expanding sets need 1 <= size <= r-1, got size={size}, r={G.r}")
    if threshold <= 0:
        # codegree-0 sets never appear in the table; enumerate them explicitly.
        return list(combinations(range(G.n), size))
    return sorted(S for S, c in codegree_table(G, size).items() if c >= threshold)


def level_sets(G: Hypergraph, L2: float, L3: float, L4: float) -> LevelSetPartition:
    if not L2 >= L3 >= L4 >= 0:
        raise ValueError(f"thresholds must satisfy L2 >= L3 >= L4 >= 0, got {(L2, L3, L4)}")
    buckets: dict[str, set[int]] = {"A": set(), "B": set(), "C": set(), "D": set()}
    for v, d in enumerate(G.degrees):
        if d > L2:
            buckets["A"].add(v)
        elif d > L3:
            buckets["B"].add(v)
        elif d > L4:
            buckets["C"].add(v)
        else:
            buckets["D"].add(v)
    return LevelSetPartition((L2, L3, L4), *(frozenset(buckets[x]) for x in "ABCD"))


# --- canonical form -------------------------------------------------------


def _refine(G: Hypergraph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement; sub-cells are ordered by an invariant signature."""
    while True:
        where = {}
        for i, cell in enumerate(cells):
            for v in cell:
                where[v] = i
        out: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                out.append(cell)
                continue
            sig = {}
            for v in cell:
                sig[v] = tuple(sorted(
                    tuple(sorted(where[u] for u in G.edges[i] if u != v)) for i in G.incidence[v]
                ))
            groups: dict = {}
            for v in cell:
                groups.setdefault(sig[v], []).append(v)
            if len(groups) > 1:
                changed = True
            for key in sorted(groups):
                out.append(groups[key])
        cells = out
        if not changed:
            return cells


def _individualize(cells: list[list[int]], idx: int, v: int) -> list[list[int]]:
    rest = [u for u in cells[idx] if u != v]
    return cells[:idx] + [[v], rest] + cells[idx + 1:]


def _orbits(n: int, gens: list[tuple[int, ...]]) -> list[int]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for x in range(n):
            a, b = find(x), find(g[x])
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(n)]


class _Labeller:
    def __init__(self, G: Hypergraph):
        self.G = G
        self.first = None  # (cert, order)
        self.best = None
        self.gens: list[tuple[int, ...]] = []
        self.nodes = 0

    def cert(self, order):
        pos = [0] * self.G.n
        for i, v in enumerate(order):
            pos[v] = i
        return tuple(sorted(tuple(sorted(pos[v] for v in e)) for e in self.G.edges))

    def automorphism(self, order_a, order_b):
        g = [0] * self.G.n
        for a, b in zip(order_a, order_b):
            g[a] = b
        self.gens.append(tuple(g))

    def search(self, cells, path) -> int | None:
        """Returns a level to jump back to, or None."""
        self.nodes += 1
        idx = next((i for i, c in enumerate(cells) if len(c) > 1), None)
        if idx is None:
            order = [c[0] for c in cells]
            c = self.cert(order)
            if self.first is None:
                self.first = self.best = (c, order, path)
                return None
            for ref in (self.first, self.best):
                if c == ref[0]:
                    self.automorphism(ref[1], order)
                    return next(i for i, (a, b) in enumerate(zip(path, ref[2])) if a != b)
            if c < self.best[0]:
                self.best = (c, order, path)
            return None
        level = len(path)
        done: list[int] = []
        for v in sorted(cells[idx]):
            if done:
                fixing = [g for g in self.gens if all(g[p] == p for p in path)]
                orb = _orbits(self.G.n, fixing)
                if any(orb[v] == orb[u] for u in done):
                    continue
            done.append(v)
            jump = self.search(_refine(self.G, _individualize(cells, idx, v)), path + (v,))
            if jump is not None and jump < level:
                return jump
        return None


def canonical_labelling(G: Hypergraph, max_vertices: int = CANONICAL_MAX_VERTICES) -> list[int]:
    """Vertex order whose relabelled edge list is the canonical one."""
    if G.n > max_vertices:
        raise CanonicalBudgetError(f"canonical form limited to n <= {max_vertices}, got n={G.n}")
    lab = _Labeller(G)
    if G.n:
        lab.search(_refine(G, [list(range(G.n))]), ())
        return list(lab.best[1])
    return []


def canonical_form(G: Hypergraph, max_vertices: int = CANONICAL_MAX_VERTICES) -> bytes:
    """Byte string equal for two hypergraphs iff they are isomorphic."""
    order = canonical_labelling(G, max_vertices)
    pos = {v: i for i, v in enumerate(order)}
    edges = sorted(tuple(sorted(pos[v] for v in e)) for e in G.edges)
    return f"r={G.r};n={G.n};".encode() + bytes(v for e in edges for v in e)


def are_isomorphic(G: Hypergraph, H: Hypergraph) -> bool:
    if (G.r, G.n, G.e) != (H.r, H.n, H.e) or sorted(G.degrees) != sorted(H.degrees):
        return False
    return canonical_form(G) == canonical_form(H)


# --- text format ----------------------------------------------------------


def serialize(G: Hypergraph) -> str:
    lines = [f"r={G.r} n={G.n}"]
    lines.extend(" ".join(map(str, e)) for e in G.edges)
    return "\n".join(lines) + "\n"


def _parse_header(line: str, line_no: int) -> tuple[int, int]:
    fields = {}
    for tok in line.split():
        key, sep, value = tok.partition("=")
        if not sep or key not in ("r", "n"):
            raise HypergraphParseError(line_no, f"bad header token {tok!r}; expected 'r=<int> n=<int>'")
        try:
            fields[key] = int(value)
        except ValueError:
            raise HypergraphParseError(line_no, f"header value {value!r} is not an integer") from None
    if set(fields) != {"r", "n"}:
        raise HypergraphParseError(line_no, "header must give both r and n")
    return fields["r"], fields["n"]


def parse(text: str) -> Hypergraph:
    header = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = _parse_header(line, line_no)
            r, n = header
            if r < 1 or n < 0:
                raise HypergraphParseError(line_no, f"invalid header values r={r} n={n}")
            continue
        try:
            e = tuple(int(tok) for tok in line.split())
        except ValueError:
            raise HypergraphParseError(line_no, f"non-integer vertex in {line!r}") from None
        if len(e) != r:
            raise HypergraphParseError(line_no, f"edge has {len(e)} vertices, expected r={r}")
        if len(set(e)) != r:
            raise HypergraphParseError(line_no, "edge repeats a vertex")
        bad = [v for v in e if not 0 <= v < n]
        if bad:
            raise HypergraphParseError(line_no, f"vertex {bad[0]} outside 0..{n - 1}")
        edges.append(e)
    if header is None:
        raise HypergraphParseError(0, "missing 'r=<int> n=<int>' header")
    return Hypergraph(header[0], header[1], tuple(edges))


def read_hg(path) -> Hypergraph:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def write_hg(G: Hypergraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(G))
