"""4-uniform generalised stars: single copies and well-behaved disjoint families."""

from __future__ import annotations

import math

from ..constructions import star_pattern
from ..core import Embedding, Hypergraph, StarShape, level_sets
from ..params import iroot, isqrt, star_width
from ._base import FinderReport, Index, Run, adjacency, by_degree, count_types, extend_sets, greedy_matching, greedy_stars, leaf, preorder, restrict
from .stars3 import Star3, disjoint_sf3_core, layered_star3, star3_core, star3_tree, star3_vertices


def tree_vertices(tree) -> list[int]:
    return preorder(tree)


def star4_embedding(host: Hypergraph, tree, shape: StarShape) -> Embedding:
    return Embedding(star_pattern(shape), host, tuple(preorder(tree)))


def _triple_in(e, triples) -> bool:
    return any(e[:i] + e[i + 1:] in triples for i in range(4))


def _owners(G: Hypergraph, triples: set) -> dict[int, list[tuple]]:
    owners: dict[int, list[tuple]] = {}
    for e in G.edges:
        for i, v in enumerate(e):
            X = e[:i] + e[i + 1:]
            if X in triples:
                owners.setdefault(v, []).append(X)
    return owners


def disjoint_star3s(G3: Hypergraph, h: int, k: int, count: int, used: set[int], run: Run) -> list[Star3] | None:
    """``count`` disjoint St_3(h,k), extracted one at a time from the unused part."""
    taken = set(used)
    out = []
    for _ in range(count):
        H = restrict(G3, avoid=taken)
        s = star3_core(H, h, k, run)
        if s is None:
            return None
        out.append(s)
        taken |= star3_vertices(s)
    return out


def _under(apex: int, stars: list[Star3]):
    return (apex, [star3_tree(s) for s in stars])


def _extend_tree3(index: Index, apex: int, branches, per_leaf: int, used: set[int], ok=None):
    """Turn an St_3 made of expanding triples' first three vertices into an St_4."""
    kids = []
    for c, ls in branches:
        sub = []
        for u in ls:
            ext = extend_sets(index, [tuple(sorted((apex, c, u)))], per_leaf, used, ok)
            if ext is None:
                return None
            sub.append((u, [leaf(z) for z in ext[0]]))
        kids.append((c, sub))
    return apex, kids


# --- St_4(sqrt k, k, 1) ----------------------------------------------------


def middle_core(G: Hypergraph, h: int, k: int, run: Run, theta: float | None = None):
    """St_4(h,k,1) with h = sqrt(k), by the D_x / D_xy argument."""
    theta = math.ceil(3 * k ** 1.5) if theta is None else theta
    index = Index(G)
    triples = set(index.expanding(3, theta))
    run.stats["expanding triples"] += len(triples)
    holding = sum(1 for e in G.edges if _triple_in(e, triples)) if triples else 0
    order = ["deletion", "expanding"] if 2 * holding <= G.e else ["expanding", "deletion"]
    for branch in order:
        if branch == "deletion":
            run.phase("delete expanding-triple edges")
            rest = restrict(G, keep=lambda e: not _triple_in(e, triples)) if triples else G
            run.stats["edges deleted"] += G.e - rest.e
            ridx = Index(rest)
            run.phase("disjoint Sf3 in a vertex link")
            for x in by_degree(rest):
                if rest.degree(x) < h * k:
                    break
                L = Hypergraph(3, G.n, tuple(ridx.over((x,))))
                flowers = disjoint_sf3_core(L, k, h, Run("inner"))
                run.stats["links tried"] += 1
                if flowers is not None:
                    return (x, [(c, [(a, [leaf(b)]) for a, b in petals]) for (c,), petals in flowers])
        elif triples:
            found = _middle_expanding(G, index, triples, h, k, theta, run)
            if found is not None:
                return found
    return None


def _middle_expanding(G, index, triples, h, k, theta, run):
    owners = _owners(G, triples)
    for x in sorted(owners, key=lambda v: (-len(owners[v]), v)):
        Dx = Hypergraph(3, G.n, tuple(owners[x]))
        dix = Index(Dx)
        pairs = set(dix.expanding(2, theta))
        # claim A: an h-star of expanding pairs inside D_x
        run.phase("claim A: star of expanding pairs in D_x")
        adj = adjacency(pairs)
        for v0 in sorted(adj):
            if len(adj[v0]) < h:
                continue
            ys = adj[v0][:h]
            used = {v0, *ys}
            mids = extend_sets(dix, [tuple(sorted((v0, y))) for y in ys], k, used)
            if mids is None:
                continue
            kids = []
            ok = True
            for y, zs in zip(ys, mids):
                sub = []
                for z in zs:
                    ext = extend_sets(index, [tuple(sorted((v0, y, z)))], 1, used)
                    if ext is None:
                        ok = False
                        break
                    sub.append((z, [leaf(ext[0][0])]))
                if not ok:
                    break
                kids.append((y, sub))
            if ok:
                return v0, kids
            run.stats["failed extensions"] += 1
        # claims B and C work with D_xy: expanding pairs completing y inside D_x
        Dxy: dict[int, list[tuple]] = {}
        for e in Dx.edges:
            for i, y in enumerate(e):
                X = e[:i] + e[i + 1:]
                if X in pairs:
                    Dxy.setdefault(y, []).append(X)
        run.phase("claim B: disjoint stars in D_xy")
        for y in sorted(Dxy, key=lambda v: (-len(Dxy[v]), v)):
            stars = greedy_stars(Dxy[y], k, h, {y})
            if len(stars) < h:
                continue
            used = {y} | {v for c, ls in stars for v in (c, *ls)}
            tree = _extend_tree3(index, y, stars, 1, used)
            if tree is not None:
                return tree
            run.stats["failed extensions"] += 1
        run.phase("claim C: matchings in D_xy")
        heavy = sorted(Dxy, key=lambda v: (-len(Dxy[v]), v))[:h]
        if len(heavy) == h:
            used = {x, *heavy}
            kids = []
            for y in heavy:
                m = greedy_matching(Dxy[y], k, used)
                if m is None:
                    break
                used.update(v for p in m for v in p)
                kids.append((y, [(a, [leaf(b)]) for a, b in m]))
            if len(kids) == h:
                return x, kids
        run.phase("bounded-codegree search in D_x")
        rest = restrict(Dx, keep=lambda e: not ((e[0], e[1]) in pairs or (e[0], e[2]) in pairs or (e[1], e[2]) in pairs))
        flowers = disjoint_sf3_core(rest, k, h, Run("inner"))
        if flowers is not None:
            return x, [(c, [(a, [leaf(b)]) for a, b in petals]) for (c,), petals in flowers]
    return None


# --- St_4(d,d,k) -------------------------------------------------------------


def bounded_codegree_st3s(H: Hypergraph, d: int, k: int, count: int, run: Run, used: set[int] | None = None) -> list[Star3] | None:
    """``count`` disjoint St_3(d,k) in a 3-graph whose pair codegrees are small.

    A holds the vertices of degree above e d/(8n).  Stars come from the
    all-B edges first, then from A centres over B-B link pairs, then from
    any remaining edges.
    """
    if H.e == 0:
        return None
    n = H.n
    deg = H.degrees
    cut = H.e * d / (8 * n)
    A = {v for v in range(n) if deg[v] > cut}
    H1 = restrict(H, keep=lambda e: sum(1 for v in e if v in A) <= 1)
    allB = restrict(H1, keep=lambda e: not A.intersection(e))
    run.stats["edges deleted"] += H.e - H1.e
    taken = set(used or ())
    out: list[Star3] = []
    while len(out) < count:
        s = star3_core(restrict(allB, avoid=taken), d, k, run)
        if s is None:
            s = layered_star3(H1, d, k, taken, run, lambda v: v not in A, lambda v: v not in A,
                              apexes=sorted(A, key=lambda v: (-deg[v], v)))
        if s is None:
            s = star3_core(restrict(H, avoid=taken), d, k, run)
        if s is None:
            return None
        out.append(s)
        taken |= star3_vertices(s)
    return out


def dense_core(G: Hypergraph, d: int, k: int, run: Run, theta: float | None = None):
    """St_4(d,d,k): expanding triples, else the bounded-codegree search in a link."""
    theta = 3 * k * d * d if theta is None else theta
    index = Index(G)
    triples = set(index.expanding(3, theta))
    run.stats["expanding triples"] += len(triples)
    holding = sum(1 for e in G.edges if _triple_in(e, triples)) if triples else 0
    order = ["expanding", "deletion"] if 2 * holding >= G.e else ["deletion", "expanding"]
    for branch in order:
        if branch == "expanding" and triples:
            run.phase("expanding-triple claim")
            owners = _owners(G, triples)
            for v in sorted(owners, key=lambda v: (-len(owners[v]), v)):
                Dv = Hypergraph(3, G.n, tuple(owners[v]))
                dix = Index(Dv)
                for w in by_degree(Dv):
                    if Dv.degree(w) < d * d:
                        break
                    stars = greedy_stars(dix.over((w,)), d, d, {w})
                    if len(stars) < d:
                        continue
                    used = {w} | {x for c, ls in stars for x in (c, *ls)}
                    tree = _extend_tree3(index, w, stars, k, used)
                    if tree is not None:
                        return tree
                    run.stats["failed extensions"] += 1
                many = disjoint_star3s(Dv, d, k, d, {v}, run)
                if many is not None:
                    return _under(v, many)
        elif branch == "deletion":
            run.phase("delete expanding-triple edges")
            rest = restrict(G, keep=lambda e: not _triple_in(e, triples)) if triples else G
            run.stats["edges deleted"] += G.e - rest.e
            ridx = Index(rest)
            run.phase("bounded-codegree search in a vertex link")
            for x in by_degree(rest):
                if rest.degree(x) < d * d * k:
                    break
                L = Hypergraph(3, G.n, tuple(ridx.over((x,))))
                many = bounded_codegree_st3s(L, d, k, d, run, {x})
                run.stats["links tried"] += 1
                if many is not None:
                    return _under(x, many)
    return None


def generic_core(G: Hypergraph, shape: StarShape, run: Run):
    """Apex by degree, then d1 disjoint St_3(d2,d3) in its link."""
    d1, d2, d3 = shape.degrees
    run.phase("generic link descent")
    index = Index(G)
    for v in by_degree(G):
        if G.degree(v) < shape.edge_count:
            break
        L = Hypergraph(3, G.n, tuple(index.over((v,))))
        many = disjoint_star3s(L, d2, d3, d1, {v}, run)
        run.stats["links tried"] += 1
        if many is not None:
            return _under(v, many)
    return None


def find_st4(G4: Hypergraph, shape: StarShape, thresholds: dict | None = None) -> FinderReport:
    if G4.r != 4 or shape.r != 4:
        raise ValueError("find_st4 works on 4-graphs and St_4 shapes")
    th = dict(thresholds or {})
    run = Run("find_st4")
    d1, d2, d3 = shape.degrees
    if shape.vertex_count > G4.n:
        run.phase("size check")
        return run.fail("size check")
    tree = None
    if d3 == 1:
        run.info["strategy"] = "middle"
        run.info["guaranteed_shape"] = d1 == isqrt(d2)
        tree = middle_core(G4, d1, d2, run, th.get("triple"))
    elif d1 == d2:
        run.info["strategy"] = "dense"
        run.info["guaranteed_shape"] = True
        tree = dense_core(G4, d1, d3, run, th.get("triple"))
    else:
        run.info["strategy"] = "generic"
        run.info["guaranteed_shape"] = False
    if tree is None:
        tree = generic_core(G4, shape, run)
    if tree is None:
        return run.fail(run.trace[-1] if run.trace else "start")
    return run.done([star4_embedding(G4, tree, shape)])


# --- disjoint well-behaved St_4(d,d,k) ------------------------------------


def st4_levels(e: int, d: int, k: int, t: int) -> tuple[float, float, float]:
    return e / (4 * t * d), e / (4 * t * d * d), e / (4 * t * d * d * k)


def tree_layers(tree) -> list[list[int]]:
    layers: list[list[int]] = []

    def walk(node, depth):
        v, kids = node
        while len(layers) <= depth:
            layers.append([])
        layers[depth].append(v)
        for kid in kids:
            walk(kid, depth + 1)

    walk(tree, 0)
    return layers


def well_behaved_problems(tree, deg, L2: float, L3: float, L4: float) -> list[str]:
    out = []
    layers = tree_layers(tree)
    for depth, cap in ((1, L2), (2, L3), (3, L4)):
        for v in layers[depth] if depth < len(layers) else []:
            if deg[v] > cap:
                out.append(f"layer {depth + 1} vertex {v} has degree {deg[v]} > {cap:.3f}")
    return out


def find_disjoint_st4(G4: Hypergraph, k: int, t: int, d: int | None = None,
                      thresholds: dict | None = None) -> FinderReport:
    """t vertex-disjoint well-behaved St_4(d,d,k) by the level-set argument.

    Layer-2, -3 and -4 vertices must have degree at most L2 = e/(4td),
    L3 = e/(4td^2) and L4 = e/(4td^2 k).  Each round discards edges with two
    vertices in A, three in A+B or four in A+B+C, sorts the rest into the 35
    types and dispatches on how many vertices a type has in D.
    """
    if G4.r != 4:
        raise ValueError("expected a 4-graph")
    run = Run("find_disjoint_st4")
    n, e = G4.n, G4.e
    d = star_width(n, k) if d is None else d
    shape = StarShape.of(d, d, k)
    th = dict(thresholds or {})
    run.info.update({"d": d, "t": t, "precondition": t <= min(k, iroot(d, 4))})
    if t < 1:
        return run.done([], disjoint=True)
    if d < 1 or e == 0:
        run.phase("degenerate parameters")
        return run.fail("degenerate parameters")
    L2, L3, L4 = st4_levels(e, d, k, t)
    run.info.update({"L2": L2, "L3": L3, "L4": L4})
    part = level_sets(G4, L2, L3, L4)
    bucket = {}
    for i, name in enumerate("ABCD"):
        for v in getattr(part, name):
            bucket[v] = i
    deg = G4.degrees
    inA = lambda v: bucket[v] == 0
    inB = lambda v: bucket[v] == 1
    inC = lambda v: bucket[v] == 2
    inD = lambda v: bucket[v] == 3
    trees = []
    used: set[int] = set()
    while len(trees) < t:
        live = []
        for x in G4.edges:
            if used.intersection(x):
                continue
            a = sum(1 for v in x if inA(v))
            ab = a + sum(1 for v in x if inB(v))
            abc = ab + sum(1 for v in x if inC(v))
            if a >= 2 or ab >= 3 or abc == 4:
                continue
            live.append(x)
        run.stats["live edges"] = len(live)
        groups = count_types(live, bucket, 4)
        found = None
        tried = []
        for typ in sorted(groups, key=lambda ty: (-len(groups[ty]), ty)):
            F = Hypergraph(4, n, tuple(groups[typ]))
            nD = typ[3]
            if nD == 4:
                tried.append("case (i)")
                run.phase("case (i): all four in D")
                found = dense_core(F, d, k, run, th.get("triple"))
            elif nD == 3:
                tried.append("case (ii)")
                run.phase("case (ii): three in D")
                found = _case_ii(F, d, k, used, run)
            elif nD == 2 and typ == (0, 2, 0, 2):
                tried.append("case (iii)(a)")
                run.phase("case (iii)(a): B-B pairs")
                found = _case_iii_a(F, d, k, used, run, inD)
            elif nD == 2 and typ[2] >= 1:
                tried.append("case (iii)(b)")
                run.phase("case (iii)(b): leaves outside C")
                found = _case_iii_b(F, d, k, used, run, inA, inC, inD)
            elif nD == 1:
                tried.append("case (iv)")
                run.phase("case (iv): leaves inside C")
                found = _case_iv(F, d, k, used, run, inA, inC, inD, th.get("triple", k))
            else:
                tried.append(f"type {typ} skipped")
                continue
            if found is not None:
                bad = well_behaved_problems(found, deg, L2, L3, L4)
                if not bad:
                    break
                run.stats["badly behaved candidates"] += 1
                found = None
        if found is None:
            run.info["cases tried"] = tried
            return run.fail(tried[-1] if tried else "no live edges")
        trees.append(found)
        used |= set(preorder(found))
        run.stats["copies"] += 1
    return run.done([star4_embedding(G4, tr, shape) for tr in trees], disjoint=True)


def _case_ii(F, d, k, used, run):
    index = Index(F)
    for v in by_degree(F):
        if v in used:
            continue
        L = Hypergraph(3, F.n, tuple(index.over((v,))))
        many = disjoint_star3s(L, d, k, d, used | {v}, run)
        if many is not None:
            return _under(v, many)
    return None


def _case_iii_a(F, d, k, used, run, inD):
    """A d-star of B-B pairs, each leaf pair carrying d disjoint k-stars of D-D pairs."""
    links: dict[tuple, list[tuple]] = {}
    for x in F.edges:
        B2 = tuple(v for v in x if not inD(v))
        links.setdefault(B2, []).append(tuple(v for v in x if inD(v)))
    adj = adjacency(links)
    for c in sorted(adj, key=lambda v: (-len(adj[v]), v)):
        if c in used:
            continue
        taken = set(used) | {c}
        kids = []
        for y in sorted(adj[c], key=lambda u: (-len(links[tuple(sorted((c, u)))]), u)):
            if y in taken:
                continue
            pairs = [p for p in links[tuple(sorted((c, y)))] if not taken.intersection(p)]
            stars = greedy_stars(pairs, k, d, taken | {y})
            if len(stars) < d:
                continue
            taken.add(y)
            taken |= {v for s, ls in stars for v in (s, *ls)}
            kids.append((y, [(s, [leaf(u) for u in ls]) for s, ls in stars]))
            if len(kids) == d:
                return c, kids
        run.stats["greedy steps"] += 1
    return None


def _case_iii_b(F, d, k, used, run, inA, inC, inD):
    """d disjoint St_3(d,k) in an apex link: middle layer in C or D, leaves in D."""
    index = Index(F)
    for v in by_degree(F):
        if v in used:
            continue
        L = Hypergraph(3, F.n, tuple(index.over((v,))))
        taken = set(used) | {v}
        stars = []
        while len(stars) < d:
            s = layered_star3(L, d, k, taken, run, lambda u: inC(u) or inD(u), inD,
                              apexes=[u for u in by_degree(L) if not inA(u)])
            if s is None:
                break
            stars.append(s)
            taken |= star3_vertices(s)
        if len(stars) == d:
            return _under(v, stars)
    return None


def _case_iv(F, d, k, used, run, inA, inC, inD, theta):
    """An St_3(d,d) of heavy non-D triples, second layer outside A and third in C,
    each triple extended by k fresh vertices of D."""
    index = Index(F)
    tops = {}
    for x in F.edges:
        X = tuple(v for v in x if not inD(v))
        tops[X] = tops.get(X, 0) + 1
    T = tuple(sorted(X for X, c in tops.items() if c >= theta))
    run.stats["expanding triples"] += len(T)
    if not T:
        return None
    TG = Hypergraph(3, F.n, T)
    for apex in by_degree(TG):
        if apex in used:
            continue
        s = layered_star3(TG, d, d, used, run, lambda u: not inA(u), inC, apexes=[apex])
        if s is None:
            continue
        taken = set(used) | star3_vertices(s)
        tree = _extend_tree3(index, s[0], s[1], k, taken, inD)
        if tree is not None:
            return tree
        run.stats["failed extensions"] += 1
    return None
