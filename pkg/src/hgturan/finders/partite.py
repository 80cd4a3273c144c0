"""Complete bipartite and r-partite blocks by the Kővári–Sós–Turán count."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

from ..constructions import complete_multipartite
from ..core import Embedding, Hypergraph
from ..params import isqrt
from ._base import FinderReport, Run, restrict


def gbinom(x, s: int) -> Fraction:
    """C(x, s) extended convexly to real x: the falling product for x >= s-1, else 0."""
    x = Fraction(x)
    if x < s - 1:
        return Fraction(0)
    out = Fraction(1)
    for i in range(s):
        out *= x - i
    return out / math.factorial(s)


def kst_hypothesis(a_size: int, b_size: int, m: int, s: int, t: int) -> bool:
    """t * C(|A|, s) < |B| * C(|E|/|B|, s)."""
    if b_size == 0:
        return False
    return t * math.comb(a_size, s) < b_size * gbinom(Fraction(m, b_size), s)


def kst_bipartite(a_size: int, b_size: int, edge_set, s: int, t: int) -> FinderReport:
    """K_{s,t} with the s-class in A, found by tallying s-subsets of neighbourhoods.

    Each B-vertex votes for every s-subset of its neighbourhood; the first
    subset to collect t votes is returned with those voters.  The host is
    the bipartite graph on A = 0..|A|-1 and B = |A|..|A|+|B|-1.
    """
    edges = sorted({(int(a), int(b)) for a, b in edge_set})
    for a, b in edges:
        if not (0 <= a < a_size and 0 <= b < b_size):
            raise ValueError(f"edge ({a}, {b}) is not between A (size {a_size}) and B (size {b_size})")
    if not (1 <= s <= a_size and 1 <= t <= b_size):
        raise ValueError("need 1 <= s <= |A| and 1 <= t <= |B|")
    run = Run("kst_bipartite")
    run.info["hypothesis"] = kst_hypothesis(a_size, b_size, len(edges), s, t)
    host = Hypergraph(2, a_size + b_size, tuple((a, a_size + b) for a, b in edges))
    nbr: dict[int, list[int]] = {}
    for a, b in edges:
        nbr.setdefault(b, []).append(a)
    run.phase("tally s-subsets")
    tally: dict[tuple, list[int]] = {}
    for b in sorted(nbr):
        for S in combinations(nbr[b], s):
            voters = tally.setdefault(S, [])
            voters.append(b)
            run.stats["tallies"] += 1
            if len(voters) == t:
                pat = complete_multipartite(2, [s, t])
                vmap = tuple(S) + tuple(a_size + x for x in voters)
                run.info["blocks"] = [list(S), list(voters)]
                return run.done([Embedding(pat, host, vmap)])
    return run.fail("tally s-subsets")


@dataclass
class Blocks:
    found: bool
    blocks: tuple[tuple, ...] = ()
    stats: dict = field(default_factory=dict)

    def product(self):
        return product(*self.blocks)


def _tuples(M) -> list[tuple]:
    M = sorted({tuple(x) for x in M})
    if not M:
        return M
    r = len(M[0])
    for x in M:
        if len(x) != r:
            raise ValueError(f"tuple {x} has arity {len(x)}, expected {r}")
    return M


def kst_rpartite(M, s: int, last_size: int | None = None, n: int | None = None, attempts: int = 4) -> Blocks:
    """Blocks A_1 x ... x A_r inside M with |A_i| = s (i < r) and |A_r| = last_size.

    Splits off the first coordinate against the rest, picks an s-set of
    first coordinates whose common suffix set is largest, and recurses on
    those suffixes.  ``last_size`` defaults to floor(sqrt(n)), with n the
    largest coordinate range seen.
    """
    M = _tuples(M)
    stats = {"nodes": 0}
    if not M:
        return Blocks(False, (), stats)
    r = len(M[0])
    if r < 2:
        raise ValueError("need tuples of arity at least 2")
    if n is None:
        n = max(len({x[i] for x in M}) for i in range(r))
    last = isqrt(n) if last_size is None else last_size
    found = _rpartite(set(M), r, s, last, attempts, stats)
    if found is None:
        return Blocks(False, (), stats)
    Mset = set(M)
    if not all(x in Mset for x in product(*found)):
        raise AssertionError("block product escaped M")
    return Blocks(True, tuple(found), stats)


def _rpartite(M: set, r: int, s: int, last: int, attempts: int, stats) -> list[tuple] | None:
    stats["nodes"] += 1
    if r == 2:
        firsts = sorted({x[0] for x in M})
        seconds = sorted({x[1] for x in M})
        if len(firsts) < s or len(seconds) < last:
            return None
        ai = {v: i for i, v in enumerate(firsts)}
        bi = {v: i for i, v in enumerate(seconds)}
        rep = kst_bipartite(len(firsts), len(seconds), [(ai[a], bi[b]) for a, b in M], s, last)
        if not rep.found:
            return None
        S, T = rep.info["blocks"]
        return [tuple(firsts[i] for i in S), tuple(seconds[j] for j in T)]
    nbr: dict[tuple, list] = {}
    for x in M:
        nbr.setdefault(x[1:], []).append(x[0])
    tally: dict[tuple, list[tuple]] = {}
    for suffix in sorted(nbr):
        for S in combinations(sorted(nbr[suffix]), s):
            tally.setdefault(S, []).append(suffix)
    ranked = sorted(tally, key=lambda S: (-len(tally[S]), S))
    for S in ranked[:attempts]:
        sub = _rpartite(set(tally[S]), r - 1, s, last, attempts, stats)
        if sub is not None:
            return [tuple(S)] + sub
    return None


def find_disjoint_4partite(G4: Hypergraph, s: int, t: int, target: int) -> FinderReport:
    """``target`` vertex-disjoint K_4(s,s,s,t) with the t-class on non-expanding vertices.

    A vertex is expanding when its degree is at least 4 e^(3/4).  Each round
    drops edges touching used vertices or lying inside the expanding set,
    builds the ordered tuples whose last entry is non-expanding, and asks
    kst_rpartite for blocks.
    """
    if G4.r != 4:
        raise ValueError("expected a 4-graph")
    run = Run("find_disjoint_4partite")
    e = G4.e
    cut = 4 * e ** 0.75
    deg = G4.degrees
    expanding = {v for v in range(G4.n) if deg[v] >= cut}
    run.stats["expanding vertices"] = len(expanding)
    run.info["threshold"] = cut
    pat = complete_multipartite(4, [s, s, s, t])
    used: set[int] = set()
    out = []
    while len(out) < target:
        run.phase("maximal collection step")
        H = restrict(G4, avoid=used, keep=lambda x: not expanding.issuperset(x))
        run.stats["edges deleted"] += G4.e - H.e
        M = set()
        for x in H.edges:
            for i, v in enumerate(x):
                if v in expanding:
                    continue
                rest = x[:i] + x[i + 1:]
                for p in permutations(rest):
                    M.add(p + (v,))
        run.stats["tuples"] += len(M)
        if not M:
            return run.fail("maximal collection step")
        blocks = kst_rpartite(M, s, last_size=t, n=G4.n)
        run.stats["kst nodes"] += blocks.stats["nodes"]
        if not blocks.found:
            return run.fail("kst_rpartite")
        vmap = tuple(v for b in blocks.blocks for v in b)
        out.append(Embedding(pat, G4, vmap))
        used.update(vmap)
    return run.done(out, disjoint=True)


def unavoidable_edge_bound(p: float, n: int, r: int, e: float) -> float:
    """p log n / log(C(n,r)/e): an (n,e)-unavoidable r-graph on p vertices has fewer edges."""
    total = math.comb(n, r)
    if n < 2 or p <= 0 or r <= 0:
        raise ValueError("need p > 0, r > 0 and n >= 2")
    if not 0 < e < total:
        raise ValueError(f"need 0 < e < C(n,r) = {total}, got e={e}")
    return p * math.log(n) / math.log(total / e)
