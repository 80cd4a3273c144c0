"""Explicit extremal hypergraphs.

Each generator checks its own edge-count guarantee and, where one exists,
a cheap structural certificate of pattern-freeness.  Randomised
constructions take a 64-bit seed; the stream is local to each call.
"""

from __future__ import annotations

import math
import random
from enum import Enum
from functools import lru_cache
from itertools import combinations, product

from .config import DEFAULT, Constants
from .core import Edge, Hypergraph, StarShape, SunflowerShape, codegree_table, disjoint_union
from .params import isqrt

SUPPORTED_SUNFLOWERS = {(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)}


class ConstructionError(RuntimeError):
    """A generator could not meet its certificate within the retry limit."""


class ForcingFamily(str, Enum):
    steiner_34 = "steiner_34"
    full_star = "full_star"
    linear_blowup = "linear_blowup"
    split_pairs = "split_pairs"
    paired_set = "paired_set"
    biclique_blowup = "biclique_blowup"
    triple_side = "triple_side"
    disjoint_cliques = "disjoint_cliques"
    side_split = "side_split"


def _rng(seed: int) -> random.Random:
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return random.Random(seed)


def _sub_seed(seed: int, *salt: int) -> int:
    # splitmix-style derivation so retries and copies get independent streams
    x = (seed + 0x9E3779B97F4A7C15 * (1 + sum((i + 1) * s for i, s in enumerate(salt)))) % 2**64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) % 2**64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) % 2**64
    return x ^ (x >> 31)


def _check_count(G: Hypergraph, bound, what: str) -> Hypergraph:
    if G.e < bound:
        raise ConstructionError(f"{what}: {G.e} edges, below the guaranteed {bound}")
    return G


# --- Steiner-type building blocks ---------------------------------------


def steiner_greedy_bound(t: int, k: int, n: int) -> float:
    """C(n,k) / sum_{i>=t} C(k,i) C(n-k,k-i): the counting bound of the greedy packing."""
    blocked = sum(math.comb(k, i) * math.comb(n - k, k - i) for i in range(t, k + 1))
    return math.comb(n, k) / blocked


@lru_cache(maxsize=64)
def _lex_steiner(t: int, k: int, n: int) -> tuple[Edge, ...]:
    taken: set[tuple[int, ...]] = set()
    edges = []
    for cand in combinations(range(n), k):
        subs = list(combinations(cand, t))
        if taken.isdisjoint(subs):
            taken.update(subs)
            edges.append(cand)
    return tuple(edges)


def partial_steiner(t: int, k: int, n: int, seed: int = 0) -> Hypergraph:
    """k-graph in which every t-set lies in at most one edge.

    A fixed lexicographic greedy packing composed with a seeded uniform vertex
    permutation, so different seeds give random copies of the same system.
    """
    if not 0 < t < k:
        raise ValueError(f"need 0 < t < k, got t={t}, k={k}")
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    perm = list(range(n))
    _rng(seed).shuffle(perm)
    G = Hypergraph(k, n, _lex_steiner(t, k, n)).relabel(perm)
    return _check_count(G, steiner_greedy_bound(t, k, n), "partial_steiner")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


def line_prime(k: int, n: int) -> int:
    """Largest prime p with n/(2k) <= p <= n/k."""
    lo = math.ceil(n / (2 * k))
    for p in range(n // k, lo - 1, -1):
        if _is_prime(p):
            return p
    raise ValueError(f"no prime in [{n / (2 * k)}, {n / k}]")


def linear_partial_lines(k: int, n: int) -> Hypergraph:
    """Linear k-graph from partial lines of the affine plane over F_p.

    Vertex (x, y) with 0 <= x < k, y in F_p is labelled x*p + y; edge (a, b)
    is {(t, a + t*b mod p) : 0 <= t < k}.
    """
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    if 2 * k * k > n:
        raise ValueError(f"need k <= sqrt(n/2), got k={k}, n={n}")
    p = line_prime(k, n)
    edges = [tuple(t * p + (a + t * b) % p for t in range(k)) for a in range(p) for b in range(p)]
    G = Hypergraph(k, n, tuple(edges))
    return _check_count(G, n * n / (4 * k * k), "linear_partial_lines")


# --- sunflower-free constructions ---------------------------------------


def sf_free_bound(shape: SunflowerShape, n: int) -> float:
    """Edge count the construction is guaranteed to reach."""
    r, t, k = shape.r, shape.t, shape.k
    if (r, t) == (3, 1):
        return math.comb(k, 2) * (n - k)
    if (r, t) == (4, 1):
        return math.comb(k, 2) * math.comb(n - k, 2)
    if (r, t) == (3, 2):
        return steiner_greedy_bound(2, 3, n) if k >= 2 else 0
    if (r, t) == (4, 3):
        return steiner_greedy_bound(3, 4, n) if k >= 2 else 0
    if (r, t) == (4, 2):
        # the per-round expectation C(2k,4)(1 - 6i(2k/n)^2)/2 is at least C(2k,4)/4
        return good_graph_rounds(k, n) * math.comb(2 * k, 4) / 4
    raise ValueError(f"unsupported sunflower type (r,t)=({r},{t})")


def good_graph_rounds(k: int, n: int) -> int:
    return (n * n) // (48 * k * k)


def _split_construction(shape: SunflowerShape, n: int) -> Hypergraph:
    # B = {0..k-1} gets two vertices of every edge; A = the rest gets r-2
    k, r = shape.k, shape.r
    B, A = range(k), range(k, n)
    edges = [pair + rest for pair in combinations(B, 2) for rest in combinations(A, r - 2)]
    return Hypergraph(r, n, tuple(edges))


def _steiner_union(shape: SunflowerShape, n: int, seed: int) -> Hypergraph:
    r = shape.r
    edges: set[Edge] = set()
    for copy in range(shape.k - 1):
        edges.update(partial_steiner(r - 1, r, n, _sub_seed(seed, copy)).edges)
    return Hypergraph(r, n, tuple(edges))


def _good_graphs(k: int, n: int, seed: int) -> tuple[Hypergraph, list[int]]:
    rng = _rng(seed)
    used: set[tuple[int, int]] = set()
    quads: set[Edge] = set()
    per_round = []
    for _ in range(good_graph_rounds(k, n)):
        verts = sorted({rng.randrange(n) for _ in range(2 * k)})
        pairs = {p for p in combinations(verts, 2) if p not in used}
        k4s = [q for q in combinations(verts, 4) if all(p in pairs for p in combinations(q, 2))]
        keep = {p for q in k4s for p in combinations(q, 2)}
        used |= keep
        quads.update(k4s)
        per_round.append(len(k4s))
    return Hypergraph(4, n, tuple(quads)), per_round


def sunflower_certificate(G: Hypergraph, shape: SunflowerShape) -> list[str]:
    """Structural reasons the construction is Sf-free; empty list means certified."""
    r, t, k = shape.r, shape.t, shape.k
    if (r, t) in {(3, 1), (4, 1)}:
        B = set(range(k))
        bad = [e for e in G.edges if len(B.intersection(e)) != 2]
        return [f"edge {e} does not meet B in exactly two vertices" for e in bad[:3]]
    if (r, t) in {(3, 2), (4, 3)}:
        heavy = [(S, c) for S, c in codegree_table(G, r - 1).items() if c >= k]
        return [f"{r - 1}-set {S} has codegree {c} >= {k}" for S, c in heavy[:3]]
    if (r, t) == (4, 2):
        # every pair's edges must live inside one <= 2k vertex set
        out = []
        spans: dict = {}
        for e in G.edges:
            for p in combinations(e, 2):
                spans.setdefault(p, set()).update(e)
        for p, span in spans.items():
            if len(span) > 2 * k:
                out.append(f"pair {p} spans {len(span)} > {2 * k} vertices")
        return out[:3]
    raise ValueError(f"unsupported sunflower type (r,t)=({r},{t})")


def sf_free(shape: SunflowerShape, n: int, seed: int = 0, constants: Constants = DEFAULT) -> Hypergraph:
    """An n-vertex r-graph with no Sf_r(t,k), dispatched on (r,t)."""
    r, t, k = shape.r, shape.t, shape.k
    if (r, t) not in SUPPORTED_SUNFLOWERS:
        raise ValueError(f"unsupported sunflower type (r,t)=({r},{t})")
    if k < 2 or 2 * k > n:
        raise ValueError(f"need 2 <= k <= n/2, got k={k}, n={n}")
    if (r, t) == (4, 2):
        m = good_graph_rounds(k, n)
        if 6 * m * (2 * k / n) ** 2 > 0.5:
            raise ValueError("round count violates the union bound 6m(2k/n)^2 <= 1/2")

    bound = sf_free_bound(shape, n)
    for attempt in range(constants.construction_retries):
        s = seed if attempt == 0 else _sub_seed(seed, 1000 + attempt)
        if (r, t) in {(3, 1), (4, 1)}:
            G = _split_construction(shape, n)
        elif (r, t) in {(3, 2), (4, 3)}:
            G = _steiner_union(shape, n, s)
        else:
            G, _ = _good_graphs(k, n, s)
        if G.e >= bound and not sunflower_certificate(G, shape):
            return G
    raise ConstructionError(f"sf_free{(r, t, k)} n={n}: certificate failed {constants.construction_retries} times")


def er_lower(r: int, k: int) -> Hypergraph:
    """All transversals of r blocks of size k-1: (k-1)^r sets, no k-petal sunflower."""
    if r < 1 or k < 2:
        raise ValueError(f"need r >= 1 and k >= 2, got r={r}, k={k}")
    w = k - 1
    blocks = [range(i * w, (i + 1) * w) for i in range(r)]
    return Hypergraph(r, r * w, tuple(product(*blocks)))


# --- patterns -------------------------------------------------------------


def sunflower_pattern(shape: SunflowerShape) -> Hypergraph:
    """Kernel 0..t-1; petal i occupies t + i(r-t) .. t + (i+1)(r-t) - 1."""
    r, t, k = shape.r, shape.t, shape.k
    w = r - t
    kernel = tuple(range(t))
    edges = [kernel + tuple(range(t + i * w, t + (i + 1) * w)) for i in range(k)]
    return Hypergraph(r, shape.vertex_count, tuple(edges))


def _star_edges(degrees: tuple[int, ...], start: int) -> tuple[list[tuple[int, ...]], int]:
    """Edges of St(degrees) rooted at ``start``; returns (edges, next free label)."""
    apex = start
    nxt = start + 1
    if len(degrees) == 1:
        leaves = range(nxt, nxt + degrees[0])
        return [(apex, v) for v in leaves], nxt + degrees[0]
    edges = []
    for _ in range(degrees[0]):
        sub, nxt = _star_edges(degrees[1:], nxt)
        edges.extend((apex,) + e for e in sub)
    return edges, nxt


def star_pattern(shape: StarShape) -> Hypergraph:
    """Generalised star; apex 0, each sub-star laid out depth-first."""
    edges, n = _star_edges(shape.degrees, 0)
    return Hypergraph(shape.r, n, tuple(edges))


def star_layers(shape: StarShape) -> list[list[int]]:
    """Pattern vertices grouped by layer (apex is layer 0)."""
    layers: list[list[int]] = [[0]]
    G = star_pattern(shape)
    depth = {0: 0}
    for e in G.edges:
        for i, v in enumerate(e):
            depth.setdefault(v, i)
    for v in range(1, G.n):
        while len(layers) <= depth[v]:
            layers.append([])
        layers[depth[v]].append(v)
    return layers


def pattern(shape: SunflowerShape | StarShape) -> Hypergraph:
    if isinstance(shape, SunflowerShape):
        return sunflower_pattern(shape)
    if isinstance(shape, StarShape):
        return star_pattern(shape)
    raise TypeError(f"not a pattern shape: {shape!r}")


def complete_multipartite(r: int, sizes) -> Hypergraph:
    sizes = list(sizes)
    if len(sizes) != r or any(s < 1 for s in sizes):
        raise ValueError(f"need {r} positive part sizes, got {sizes}")
    parts, start = [], 0
    for s in sizes:
        parts.append(range(start, start + s))
        start += s
    return Hypergraph(r, start, tuple(product(*parts)))


# --- forcing families -----------------------------------------------------


def _need(params: dict, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ValueError(f"missing parameters: {missing}")
    return [int(params[k]) for k in keys]


def forcing_family(family: ForcingFamily | str, n: int, params: dict | None = None) -> Hypergraph:
    """Structured 4-graphs (by default) used to force the shape of unavoidable patterns.

    Vertex classes are always prefixes: V1 = {0..|V1|-1}, V2 = the rest.
    """
    params = dict(params or {})
    try:
        fam = ForcingFamily(family)
    except ValueError:
        raise ValueError(f"unknown forcing family {family!r}") from None

    if fam is ForcingFamily.steiner_34:
        seed = int(params.get("seed", 0))
        return partial_steiner(3, 4, n, seed)

    if fam is ForcingFamily.full_star:
        if n < 4:
            raise ValueError("full_star needs n >= 4")
        G = Hypergraph(4, n, tuple((0,) + rest for rest in combinations(range(1, n), 3)))
        return _check_count(G, math.comb(n - 1, 3), "full_star")

    if fam is ForcingFamily.linear_blowup:
        (k,) = _need(params, "k")
        if k < 4:
            raise ValueError("linear_blowup needs k >= 4 so that edges have 4-subsets")
        base = linear_partial_lines(k, n)
        G = Hypergraph(4, n, tuple(q for e in base.edges for q in combinations(e, 4)))
        return _check_count(G, n * n / (4 * k * k) * math.comb(k, 4), "linear_blowup")

    if fam is ForcingFamily.split_pairs:
        (v1,) = _need(params, "v1")
        if not 2 <= v1 <= n - 2:
            raise ValueError(f"split_pairs needs 2 <= |V1| <= n-2, got {v1}")
        G = Hypergraph(4, n, tuple(a + b for a in combinations(range(v1), 2) for b in combinations(range(v1, n), 2)))
        return _check_count(G, math.comb(v1, 2) * math.comb(n - v1, 2), "split_pairs")

    if fam is ForcingFamily.paired_set:
        # |S| = 2m vertices split into m consecutive pairs; m = k^2 in the sparse-regime argument
        m = int(params["pairs"]) if "pairs" in params else _need(params, "k")[0] ** 2
        if 2 * m + 2 > n:
            raise ValueError(f"paired_set needs 2*pairs + 2 <= n, got pairs={m}, n={n}")
        outside = list(combinations(range(2 * m, n), 2))
        G = Hypergraph(4, n, tuple((2 * i, 2 * i + 1) + b for i in range(m) for b in outside))
        return _check_count(G, m * math.comb(n - 2 * m, 2), "paired_set")

    if fam is ForcingFamily.biclique_blowup:
        (k,) = _need(params, "k")
        a = int(params.get("side", isqrt(k)))
        if a < 1:
            raise ValueError("biclique side must be >= 1")
        v1 = 2 * a * k
        if v1 + 2 > n:
            raise ValueError(f"biclique_blowup needs 2*side*k + 2 <= n, got {v1 + 2} > {n}")
        pairs = []
        for c in range(k):
            base = 2 * a * c
            pairs.extend((base + i, base + a + j) for i in range(a) for j in range(a))
        outside = list(combinations(range(v1, n), 2))
        G = Hypergraph(4, n, tuple(p + b for p in pairs for b in outside))
        return _check_count(G, k * a * a * math.comb(n - v1, 2), "biclique_blowup")

    if fam is ForcingFamily.triple_side:
        (v1,) = _need(params, "v1")
        if not 3 <= v1 <= n - 1:
            raise ValueError(f"triple_side needs 3 <= |V1| <= n-1, got {v1}")
        G = Hypergraph(4, n, tuple(a + (b,) for a in combinations(range(v1), 3) for b in range(v1, n)))
        return _check_count(G, math.comb(v1, 3) * (n - v1), "triple_side")

    if fam is ForcingFamily.disjoint_cliques:
        (t,) = _need(params, "t")
        r = int(params.get("r", 4))
        if t < r:
            raise ValueError(f"clique size t={t} must be >= r={r}")
        edges = [tuple(c * t + v for v in q) for c in range(n // t) for q in combinations(range(t), r)]
        G = Hypergraph(r, n, tuple(edges))
        return _check_count(G, (n // t) * math.comb(t, r), "disjoint_cliques")

    if fam is ForcingFamily.side_split:
        (v1,) = _need(params, "v1")
        if not 1 <= v1 <= n - 3:
            raise ValueError(f"side_split needs 1 <= |V1| <= n-3, got {v1}")
        G = Hypergraph(4, n, tuple((a,) + b for a in range(v1) for b in combinations(range(v1, n), 3)))
        return _check_count(G, v1 * math.comb(n - v1, 3), "side_split")

    raise AssertionError(fam)


# --- seeded test instances ------------------------------------------------


def random_hypergraph(r: int, n: int, e: int, seed: int = 0) -> Hypergraph:
    """e distinct r-sets drawn uniformly from [n] with a seeded generator."""
    total = math.comb(n, r)
    if not 0 <= e <= total:
        raise ValueError(f"need 0 <= e <= C(n,r) = {total}, got e={e}")
    rng = _rng(seed)
    if 3 * e > total:
        chosen = rng.sample(list(combinations(range(n), r)), e)
    else:
        seen: set[tuple[int, ...]] = set()
        while len(seen) < e:
            seen.add(tuple(sorted(rng.sample(range(n), r))))
        chosen = seen
    return Hypergraph(r, n, tuple(chosen))


def planted(patterns, core: int = 0, extra: int = 0) -> Hypergraph:
    """Disjoint copies of the given patterns, then a complete r-graph on ``core``
    fresh vertices, then ``extra`` isolated vertices."""
    patterns = list(patterns)
    if not patterns:
        raise ValueError("need at least one pattern")
    r = patterns[0].r
    parts = list(patterns)
    if core:
        parts.append(complete_core(r, core))
    G = disjoint_union(parts)
    return Hypergraph(r, G.n + extra, G.edges)


def complete_core(r: int, m: int) -> Hypergraph:
    return Hypergraph(r, m, tuple(combinations(range(m), r)))
