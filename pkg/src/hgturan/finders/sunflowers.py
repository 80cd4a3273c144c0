"""Sunflower search following the expanding-set deletion arguments."""

from __future__ import annotations

import math

from ..constructions import sunflower_pattern
from ..core import Embedding, Hypergraph, SunflowerShape
from ._base import FinderReport, Index, Run, adjacency, by_degree, greedy_matching, restrict

# a found sunflower: kernel vertices and one petal tuple per edge
Flower = tuple[tuple[int, ...], list[tuple[int, ...]]]


def sunflower_embedding(host: Hypergraph, kernel, petals) -> Embedding:
    shape = SunflowerShape(host.r, len(kernel), len(petals))
    vmap = tuple(kernel) + tuple(v for p in petals for v in p)
    return Embedding(sunflower_pattern(shape), host, vmap)


def default_thresholds(shape: SunflowerShape) -> dict[str, float]:
    k = shape.k
    if (shape.r, shape.t) == (3, 1):
        return {"pair": 2 * k}
    if (shape.r, shape.t) == (4, 1):
        return {"triple": 3 * k, "pair": 18 * k * k}
    if (shape.r, shape.t) == (4, 2):
        return {"pair": 2 * k}
    return {}


def _extend_star(index: Index, centre: int, leaves: list[int], used: set[int]) -> list[tuple[int, int]] | None:
    """Give each pair (centre, y) a fresh third vertex: the smallest unused one."""
    petals = []
    for y in leaves:
        for (z,) in index.over((centre, y)):
            if z not in used:
                used.add(z)
                petals.append(tuple(sorted((y, z))))
                break
        else:
            return None
    return petals


def sf31_core(G: Hypergraph, k: int, run: Run, pair_threshold: float | None = None) -> Flower | None:
    """Sf_3(1,k) in a 3-graph.

    1. D_v = link pairs of v that are expanding.  A k-star in D_v extends
       greedily (kernel = its centre); a k-matching in D_v is a sunflower
       with kernel v.
    2. Otherwise delete every edge holding an expanding pair; in what is
       left no link has a large star, so a greedy link matching works.
    """
    if G.r != 3:
        raise ValueError("expected a 3-graph")
    if k < 1 or G.e == 0:
        return None
    theta = 2 * k if pair_threshold is None else pair_threshold
    index = Index(G)
    expanding = set(index.expanding(2, theta))
    run.stats["expanding pairs"] += len(expanding)
    if expanding:
        run.phase("expanding pairs")
        for v in by_degree(G):
            D = [p for p in index.over((v,)) if p in expanding]
            if not D:
                continue
            adj = adjacency(D)
            for c in sorted(adj):
                if len(adj[c]) >= k:
                    leaves = adj[c][:k]
                    petals = _extend_star(index, c, leaves, set(leaves) | {c})
                    if petals is not None:
                        run.phase("star extension")
                        return (c,), petals
                    run.stats["failed extensions"] += 1
            m = greedy_matching(D, k, {v})
            if m is not None:
                run.phase("matching in D_v")
                return (v,), m
    run.phase("delete expanding-pair edges")
    rest = restrict(G, keep=lambda e: not any(p in expanding for p in ((e[0], e[1]), (e[0], e[2]), (e[1], e[2]))))
    run.stats["edges deleted"] += G.e - rest.e
    run.phase("link matching")
    rindex = Index(rest)
    for v in by_degree(rest):
        run.stats["greedy steps"] += 1
        m = greedy_matching(rindex.over((v,)), k, {v})
        if m is not None:
            return (v,), m
    return None


def pigeonhole_core(G: Hypergraph, k: int, run: Run) -> Flower | None:
    """Sf_r(r-1,k): an (r-1)-set lying in k edges is itself the kernel."""
    run.phase("heaviest (r-1)-set")
    index = Index(G)
    table = index.table(G.r - 1)
    if not table:
        return None
    S = min(table, key=lambda S: (-len(table[S]), S))
    if len(table[S]) < k:
        return None
    return S, list(table[S][:k])


def sf41_core(G: Hypergraph, k: int, run: Run, thresholds: dict) -> Flower | None:
    """Sf_4(1,k): expanding triples, then expanding pairs, then link matchings."""
    index = Index(G)
    t3 = thresholds.get("triple", 3 * k)
    t2 = thresholds.get("pair", 18 * k * k)
    expanding3 = set(index.expanding(3, t3))
    run.stats["expanding triples"] += len(expanding3)
    if expanding3:
        run.phase("expanding triples")
        owners = {}
        for e in G.edges:
            for i, v in enumerate(e):
                X = e[:i] + e[i + 1:]
                if X in expanding3:
                    owners.setdefault(v, []).append(X)
        for v in sorted(owners, key=lambda v: (-len(owners[v]), v)):
            Dv = Hypergraph(3, G.n, tuple(owners[v]))
            inner = Run("inner")
            found = sf31_core(Dv, k, inner)
            run.stats["inner sf31 calls"] += 1
            if found is None:
                continue
            (c,), petals = found
            used = {c} | {x for p in petals for x in p}
            new = []
            for p in petals:
                for (z,) in index.over((c,) + p):
                    if z not in used:
                        used.add(z)
                        new.append(tuple(sorted(p + (z,))))
                        break
                else:
                    break
            if len(new) == k:
                run.phase("Sf3 in D_v extension")
                return (c,), new
            run.stats["failed extensions"] += 1
    run.phase("delete expanding-triple edges")
    G1 = restrict(G, keep=lambda e: not any(e[:i] + e[i + 1:] in expanding3 for i in range(4)))
    run.stats["edges deleted"] += G.e - G1.e
    idx1 = Index(G1)
    pairs = idx1.expanding(2, t2)
    run.stats["expanding pairs"] += len(pairs)
    if pairs:
        run.phase("star of expanding pairs")
        adj = adjacency(pairs)
        for c in sorted(adj, key=lambda v: (-len(adj[v]), v)):
            if len(adj[c]) < k:
                break
            leaves = adj[c][:k]
            used = {c} | set(leaves)
            petals = []
            for y in leaves:
                for ab in idx1.over((c, y)):
                    if not used.intersection(ab):
                        used.update(ab)
                        petals.append(tuple(sorted((y,) + ab)))
                        break
                else:
                    break
            if len(petals) == k:
                return (c,), petals
            run.stats["failed extensions"] += 1
    run.phase("link matching")
    for v in by_degree(G):
        run.stats["greedy steps"] += 1
        m = greedy_matching(index.over((v,)), k, {v})
        if m is not None:
            return (v,), m
    return None


def sf42_core(G: Hypergraph, k: int, run: Run) -> Flower | None:
    """Sf_4(2,k): Sf_3(1,k) in the link of a high-degree vertex."""
    index = Index(G)
    run.phase("Sf3 in a vertex link")
    for v in by_degree(G):
        L = Hypergraph(3, G.n, tuple(index.over((v,))))
        inner = Run("inner")
        found = sf31_core(L, k, inner)
        run.stats["links tried"] += 1
        if found is not None:
            (c,), petals = found
            return tuple(sorted((v, c))), petals
    return None


SUPPORTED = {(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)}


def find_sunflower(G: Hypergraph, shape: SunflowerShape, thresholds: dict | None = None) -> FinderReport:
    if shape.r != G.r:
        raise ValueError(f"shape is {shape.r}-uniform but host is {G.r}-uniform")
    key = (shape.r, shape.t)
    if key not in SUPPORTED and shape.t != shape.r - 1:
        raise ValueError(f"unsupported sunflower shape Sf_{shape.r}({shape.t},{shape.k})")
    run = Run("find_sunflower")
    th = default_thresholds(shape)
    th.update(thresholds or {})
    run.info["thresholds"] = th
    k = shape.k
    if shape.vertex_count > G.n:
        run.phase("size check")
        return run.fail("size check")
    if shape.t == shape.r - 1:
        found = pigeonhole_core(G, k, run)
    elif key == (3, 1):
        found = sf31_core(G, k, run, th.get("pair"))
    elif key == (4, 1):
        found = sf41_core(G, k, run, th)
    else:
        found = sf42_core(G, k, run)
    if found is None:
        return run.fail(run.trace[-1] if run.trace else "start")
    kernel, petals = found
    return run.done([sunflower_embedding(G, kernel, petals)])


def guarantee_edges(shape: SunflowerShape, n: int, constants) -> float:
    """Edge count above which the transcribed proof always succeeds."""
    k, r, t = shape.k, shape.r, shape.t
    if (r, t) == (3, 1):
        return constants.sf31_density * k * k * n
    if (r, t) == (4, 1):
        return constants.sf41_density * k * k * n * n
    if (r, t) == (4, 2):
        return constants.sf42_density * k * k * n * n
    if t == r - 1:
        return constants.pigeonhole_density * (k - 1) * math.comb(n, r - 1) + 1
    raise ValueError(f"no guarantee for Sf_{r}({t},{k})")
