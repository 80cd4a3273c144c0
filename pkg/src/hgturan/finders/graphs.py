"""Matchings and stars in ordinary graphs."""

from __future__ import annotations

from math import isqrt

from ..constructions import star_pattern, sunflower_pattern
from ..core import Embedding, Hypergraph, StarShape, SunflowerShape
from ._base import FinderReport, Run, adjacency, greedy_matching, greedy_stars, leaf, preorder


def _require_graph(G: Hypergraph) -> None:
    if G.r != 2:
        raise ValueError(f"expected a 2-uniform graph, got r={G.r}")


def star_embedding(host: Hypergraph, centre: int, leaves: list[int]) -> Embedding:
    return Embedding(star_pattern(StarShape.of(len(leaves))), host, tuple(preorder((centre, [leaf(u) for u in leaves]))))


def matching_embedding(host: Hypergraph, edges: list[tuple]) -> Embedding:
    shape = SunflowerShape(host.r, 0, len(edges))
    return Embedding(sunflower_pattern(shape), host, tuple(v for e in edges for v in e))


def match_or_star(G2: Hypergraph, k: int, l: int) -> FinderReport:
    """A k-star if some vertex has degree >= k, else a greedy l-matching.

    Without a k-star every chosen edge kills fewer than 2k others, so
    2kl edges always leave room for the next one.
    """
    _require_graph(G2)
    if k < 1 or l < 1:
        raise ValueError("need k >= 1 and l >= 1")
    run = Run("match_or_star")
    run.phase("star scan")
    adj = adjacency(G2.edges)
    for v in sorted(adj):
        if len(adj[v]) >= k:
            run.info["kind"] = "star"
            return run.done([star_embedding(G2, v, adj[v][:k])])
    run.phase("greedy matching")
    run.stats["edges"] = G2.e
    run.info["guaranteed"] = G2.e >= 2 * k * l
    m = greedy_matching(G2.edges, l)
    if m is None:
        return run.fail("greedy matching")
    run.info["kind"] = "matching"
    return run.done([matching_embedding(G2, m)])


def disjoint_star_target(n: int, k: int, s: int) -> int:
    """min(s, floor(sqrt(s n) / k))."""
    return min(s, isqrt(s * n) // k)


def disjoint_stars_graph(G2: Hypergraph, k: int, s: int) -> FinderReport:
    """At least min(s, sqrt(sn)/k) vertex-disjoint k-stars when |E| >= 6sn and s >= k.

    Phase one uses t high-degree vertices as centres; otherwise those
    vertices are stripped and a maximal collection is grown greedily.
    """
    _require_graph(G2)
    run = Run("disjoint_stars_graph")
    n = G2.n
    if s < k or G2.e < 6 * s * n or k < 1:
        run.phase("precondition")
        return run.fail("precondition")
    t = disjoint_star_target(n, k, s)
    run.info["target"] = t
    if t == 0:
        return run.done([], disjoint=True)
    adj = adjacency(G2.edges)
    heavy = sorted(v for v in adj if len(adj[v]) >= t * (k + 1) - 1)
    run.stats["heavy"] = len(heavy)
    if len(heavy) >= t:
        run.phase("high-degree centres")
        centres = heavy[:t]
        used = set(centres)
        stars = []
        for c in centres:
            leaves = [u for u in adj[c] if u not in used][:k]
            if len(leaves) < k:
                return run.fail("high-degree centres")
            used.update(leaves)
            stars.append((c, leaves))
    else:
        run.phase("strip heavy vertices")
        hv = set(heavy)
        rest = [e for e in G2.edges if not hv.intersection(e)]
        run.stats["edges stripped"] = G2.e - len(rest)
        run.phase("maximal collection")
        stars = greedy_stars(rest, k, t)
        if len(stars) < t:
            return run.fail("maximal collection")
    return run.done([star_embedding(G2, c, ls) for c, ls in stars], disjoint=True)
