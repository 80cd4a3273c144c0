"""3-uniform generalised stars and disjoint sunflower families."""

from __future__ import annotations

import math
from typing import Callable

from ..constructions import star_pattern
from ..core import Embedding, Hypergraph, StarShape, level_sets
from ._base import FinderReport, Index, Run, adjacency, by_degree, count_types, extend_sets, greedy_matching, greedy_stars, leaf, preorder, restrict
from .sunflowers import sf31_core, sunflower_embedding

# (apex, [(second-layer vertex, [leaves]), ...])
Star3 = tuple[int, list[tuple[int, list[int]]]]


class CodegreeError(ValueError):
    def __init__(self, pair, codegree, cap):
        super().__init__(f"pair {pair} has codegree {codegree} > {cap:.3f}")
        self.pair = pair
        self.codegree = codegree


def star3_tree(star: Star3):
    apex, branches = star
    return (apex, [(c, [leaf(u) for u in ls]) for c, ls in branches])


def star3_embedding(host: Hypergraph, star: Star3) -> Embedding:
    h = len(star[1])
    k = len(star[1][0][1])
    return Embedding(star_pattern(StarShape.of(h, k)), host, tuple(preorder(star3_tree(star))))


def star3_vertices(star: Star3) -> set[int]:
    apex, branches = star
    out = {apex}
    for c, ls in branches:
        out.add(c)
        out.update(ls)
    return out


def _pair_in(e, pairs) -> bool:
    return (e[0], e[1]) in pairs or (e[0], e[2]) in pairs or (e[1], e[2]) in pairs


def star3_core(G: Hypergraph, h: int, k: int, run: Run, threshold: float | None = None) -> Star3 | None:
    """St_3(h,k) by the two-branch argument.

    Expanding-pair branch: D_v holds the expanding link pairs of v.  An h-star
    in D_v extends greedily (every pair has room for k fresh leaves); else h
    disjoint k-stars of D_v sit under apex v.  Deletion branch: drop edges
    with an expanding pair and collect k-stars in a heavy vertex's link.
    """
    if G.e == 0 or h < 1 or k < 1:
        return None
    if 1 + h + h * k > G.n:
        return None
    theta = 3 * h * k if threshold is None else threshold
    index = Index(G)
    pairs = set(index.expanding(2, theta))
    holding = sum(1 for e in G.edges if _pair_in(e, pairs)) if pairs else 0
    run.stats["expanding pairs"] += len(pairs)
    order = ["expanding", "deletion"] if 2 * holding >= G.e else ["deletion", "expanding"]
    for branch in order:
        if branch == "expanding" and pairs:
            run.phase("expanding-pair branch")
            owners: dict[int, list] = {}
            for e in G.edges:
                for i, v in enumerate(e):
                    Y = e[:i] + e[i + 1:]
                    if Y in pairs:
                        owners.setdefault(v, []).append(Y)
            for v in sorted(owners, key=lambda v: (-len(owners[v]), v)):
                D = owners[v]
                adj = adjacency(D)
                for c in sorted(adj):
                    if len(adj[c]) < h:
                        continue
                    ys = adj[c][:h]
                    used = {c, *ys}
                    ext = extend_sets(index, [tuple(sorted((c, y))) for y in ys], k, used)
                    if ext is not None:
                        return c, list(zip(ys, ext))
                    run.stats["failed extensions"] += 1
                stars = greedy_stars(D, k, h, {v})
                run.stats["greedy steps"] += len(stars)
                if len(stars) >= h:
                    return v, stars
        elif branch == "deletion":
            run.phase("deletion branch")
            rest = restrict(G, keep=lambda e: not _pair_in(e, pairs)) if pairs else G
            run.stats["edges deleted"] += G.e - rest.e
            ridx = Index(rest)
            for v in by_degree(rest):
                stars = greedy_stars(ridx.over((v,)), k, h, {v})
                run.stats["greedy steps"] += len(stars)
                if len(stars) >= h:
                    return v, stars
    return None


def find_st3(G3: Hypergraph, h: int, k: int, threshold: float | None = None) -> FinderReport:
    if G3.r != 3:
        raise ValueError("expected a 3-graph")
    run = Run("find_st3")
    run.info["threshold"] = 3 * h * k if threshold is None else threshold
    if 1 + h + h * k > G3.n:
        run.phase("size check")
        return run.fail("size check")
    star = star3_core(G3, h, k, run, threshold)
    if star is None:
        return run.fail(run.trace[-1] if run.trace else "start")
    return run.done([star3_embedding(G3, star)])


def st3_guarantee_edges(n: int, h: int, k: int, constants) -> float:
    return constants.st3_density * max(k * n * n, h * h * k * k * n)


# --- disjoint Sf_3(1,k) under a codegree cap ----------------------------


def codegree_cap(k: int) -> float:
    return 3 * k ** 1.5


def check_codegree(G: Hypergraph, cap: float) -> None:
    index = Index(G)
    for pair, lst in sorted(index.table(2).items()):
        if len(lst) > cap:
            raise CodegreeError(pair, len(lst), cap)


def disjoint_sf3_core(G: Hypergraph, k: int, count: int, run: Run) -> list | None:
    """``count`` vertex-disjoint Sf_3(1,k).

    Branch 1: enough vertices of degree >= 18k^3 each take a k-matching from
    their link.  Branch 2: strip those vertices and extract sunflowers one by
    one from the edges avoiding everything used so far.
    """
    index = Index(G)
    deg = G.degrees
    heavy = sorted(v for v in range(G.n) if deg[v] >= 18 * k ** 3)
    run.stats["heavy vertices"] = len(heavy)
    if len(heavy) >= count:
        run.phase("heavy centres")
        centres = heavy[:count]
        used = set(centres)
        flowers = []
        wide = math.ceil(codegree_cap(k))
        for c in centres:
            full = greedy_matching(index.over((c,)), wide, {c}) or []
            m = [p for p in full if not used.intersection(p)][:k]
            if len(m) < k:
                m = greedy_matching(index.over((c,)), k, used)
            if m is None:
                break
            used.update(v for p in m for v in p)
            flowers.append(((c,), m))
        if len(flowers) == count:
            return flowers
        run.stats["heavy branch shortfall"] += 1
    run.phase("strip heavy vertices")
    base = restrict(G, avoid=heavy) if len(heavy) < count else G
    run.stats["edges deleted"] += G.e - base.e
    run.phase("iterated extraction")
    used: set[int] = set()
    flowers = []
    for _ in range(count):
        H = restrict(base, avoid=used)
        got = sf31_core(H, k, Run("inner"))
        run.stats["greedy steps"] += 1
        if got is None:
            return None
        (c,), petals = got
        used.add(c)
        used.update(v for p in petals for v in p)
        flowers.append(((c,), petals))
    return flowers


def find_disjoint_sf3_bounded_codegree(G3: Hypergraph, k: int, count: int | None = None) -> FinderReport:
    if G3.r != 3:
        raise ValueError("expected a 3-graph")
    count = math.ceil(math.sqrt(k)) if count is None else count
    check_codegree(G3, codegree_cap(k))
    run = Run("find_disjoint_sf3_bounded_codegree")
    run.info["count"] = count
    flowers = disjoint_sf3_core(G3, k, count, run)
    if flowers is None:
        return run.fail(run.trace[-1])
    return run.done([sunflower_embedding(G3, c, p) for c, p in flowers], disjoint=True)


def disjoint_sf3_guarantee_edges(n: int, k: int, constants) -> float:
    return constants.disjoint_sf3_density * max(k * k * n, k ** 4.5)


# --- well-behaved disjoint St_3(h,k) -------------------------------------


def st3_levels(e: int, h: int, k: int, t: int) -> tuple[float, float]:
    return e / (3 * h * t), e / (3 * h * k * t)


def is_well_behaved3(star: Star3, deg, L2: float, L3: float) -> bool:
    _, branches = star
    return all(deg[c] <= L2 and all(deg[u] <= L3 for u in ls) for c, ls in branches)


def layered_star3(G: Hypergraph, h: int, k: int, used: set[int], run: Run,
                  ok2: Callable[[int], bool], ok3: Callable[[int], bool],
                  apexes=None) -> Star3 | None:
    """Greedy St_3(h,k) with second-layer and leaf vertices restricted."""
    index = Index(G)
    for v in (by_degree(G) if apexes is None else apexes):
        if v in used:
            continue
        link = [p for p in index.over((v,)) if not used.intersection(p)]
        stars = greedy_stars(link, k, h, used | {v}, centre_ok=ok2, leaf_ok=ok3)
        run.stats["greedy steps"] += 1
        if len(stars) >= h:
            return v, stars
    return None


def find_disjoint_st3_wellbehaved(G3: Hypergraph, h: int, k: int, t: int, constants=None,
                                  thresholds: dict | None = None) -> FinderReport:
    """t vertex-disjoint well-behaved St_3(h,k) by the level-set argument.

    Second-layer vertices must have degree <= L2 = e/(3ht), leaves degree
    <= L3 = e/(3hkt).  Each round sorts the unused edges into the 10 types by
    how many vertices they have in A, B, C and works the largest type first.
    ``thresholds["pair"]`` is the codegree an A/B pair needs before case (iv)
    tries to hang k leaves on it (default k, the least that can work).
    """
    from ..config import DEFAULT

    if G3.r != 3:
        raise ValueError("expected a 3-graph")
    constants = constants or DEFAULT
    run = Run("find_disjoint_st3_wellbehaved")
    n, e = G3.n, G3.e
    if e == 0 or t < 1:
        run.phase("empty")
        return run.fail("empty") if t >= 1 else run.done([], disjoint=True)
    L2, L3 = st3_levels(e, h, k, t)
    part = level_sets(G3, L2, L3, 0)
    s = e / (constants.st3_disjoint_density * n * n)
    run.info.update({"L2": L2, "L3": L3, "s": s,
                     "precondition": t <= min(s, math.sqrt(s * n) / h, s ** (1 / 3) * n ** (2 / 3) / (h * k))})
    bucket = {v: 0 if v in part.A else 1 if v in part.B else 2 for v in range(n)}
    inC = lambda v: bucket[v] == 2
    inB = lambda v: bucket[v] == 1
    deg = G3.degrees
    pair_theta = (thresholds or {}).get("pair", k)
    stars: list[Star3] = []
    used: set[int] = set()
    while len(stars) < t:
        live = [x for x in G3.edges if not used.intersection(x)]
        groups = count_types(live, bucket, 3)
        found = None
        tried = []
        for typ in sorted(groups, key=lambda ty: (-len(groups[ty]), ty)):
            F = Hypergraph(3, n, tuple(groups[typ]))
            c_count = typ[2]
            if c_count == 0:
                tried.append("case (i)")
                continue
            if c_count == 3:
                tried.append("case (ii)")
                run.phase("case (ii): all vertices in C")
                found = star3_core(F, h, k, run)
            elif c_count == 2:
                tried.append("case (iii)")
                run.phase("case (iii): two vertices in C")
                found = layered_star3(F, h, k, used, run, inC, inC)
            else:
                tried.append("case (iv)")
                run.phase("case (iv): expanding pairs in A and B")
                found = _case_iv(F, h, k, used, run, inB, inC, pair_theta)
            if found is not None:
                break
        if found is None:
            run.info["cases tried"] = tried
            return run.fail(tried[-1] if tried else "no live edges")
        if not is_well_behaved3(found, deg, L2, L3):
            raise AssertionError("level-set argument produced a badly behaved star")
        stars.append(found)
        used |= star3_vertices(found)
        run.stats["copies"] += 1
    return run.done([star3_embedding(G3, s) for s in stars], disjoint=True)


def _case_iv(F: Hypergraph, h: int, k: int, used: set[int], run: Run, inB, inC, theta) -> Star3 | None:
    """An h-star of A/B pairs with B leaves, each pair extended by k vertices of C."""
    index = Index(F)
    pairs = [p for p in index.expanding(2, theta) if not inC(p[0]) and not inC(p[1])]
    run.stats["expanding pairs"] += len(pairs)
    adj = adjacency(pairs)
    for c in sorted(adj, key=lambda v: (-sum(1 for u in adj[v] if inB(u)), v)):
        ys = [u for u in adj[c] if inB(u)][:h]
        if len(ys) < h:
            continue
        taken = used | {c, *ys}
        ext = extend_sets(index, [tuple(sorted((c, y))) for y in ys], k, taken, ok=inC)
        if ext is not None:
            return c, list(zip(ys, ext))
    return None
