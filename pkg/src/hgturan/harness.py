"""Reproducible experiment runner: a closed registry of checks over parameter grids.

A report has a deterministic ``body`` (hashed into ``digest``) and a separate
``timing`` section, so two runs of the same spec agree byte for byte on the
body whatever the worker count.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path
from typing import Callable

from . import __version__
from .config import DEFAULT, Constants
from .constructions import (
    SUPPORTED_SUNFLOWERS,
    er_lower,
    linear_partial_lines,
    partial_steiner,
    pattern,
    planted,
    random_hypergraph,
    sf_free,
    sf_free_bound,
    star_layers,
)
from .core import Embedding, Hypergraph, StarShape, SunflowerShape, build, canonical_form, complete, parse, serialize
from .finders import (
    FinderReport,
    find_disjoint_4partite,
    find_disjoint_st4,
    find_st3,
    find_st4,
    find_sunflower,
    guarantee_edges,
    kst_bipartite,
    kst_hypothesis,
    kst_rpartite,
    match_or_star,
)
from .finders.partite import complete_multipartite
from .oracles import (
    ABSENT,
    FOUND,
    YES,
    BudgetExceeded,
    OracleCache,
    SearchBudget,
    contains_exact,
    ex_by_dfs,
    ex_exact,
    f_exact,
    erdos_rado_bounds,
    is_unavoidable,
    un_exact,
    max_packing,
    max_sunflower_exact,
    _Meter,
)
from .params import iroot, isqrt, star_width

PASS, FAIL, BUDGET = "pass", "fail", "budget"


class SpecError(ValueError):
    """An experiment spec or one of its grid points is invalid."""


# --- pattern specs ------------------------------------------------------------


def _ints(body: str, spec: str) -> list[int]:
    try:
        return [int(x) for x in body.split(",") if x.strip()]
    except ValueError:
        raise SpecError(f"bad pattern spec {spec!r}") from None


def parse_pattern_spec(spec: str):
    """``sf:r,t,k``, ``st:d1,d2[,d3]``, ``k4p:s,s,s,t``, ``matching:k`` or ``star:k``.

    Returns (kind, shape-or-parameters).
    """
    kind, _, body = spec.partition(":")
    vals = _ints(body, spec)
    if kind == "sf" and len(vals) == 3:
        return "sf", SunflowerShape(*vals)
    if kind == "st" and len(vals) in (2, 3):
        return "st", StarShape.of(*vals)
    if kind == "k4p" and len(vals) == 4:
        if len(set(vals[:3])) != 1:
            raise SpecError(f"k4p needs three equal class sizes, got {vals[:3]}")
        return "k4p", tuple(vals)
    if kind in ("matching", "star") and len(vals) == 1:
        return kind, vals[0]
    raise SpecError(f"bad pattern spec {spec!r}")


def pattern_from_spec(spec: str, r: int = 2) -> Hypergraph:
    kind, val = parse_pattern_spec(spec)
    if kind in ("sf", "st"):
        return pattern(val)
    if kind == "k4p":
        return complete_multipartite(4, list(val))
    if kind == "matching":
        return pattern(SunflowerShape(r, 0, val))
    return pattern(SunflowerShape(r, r - 1, val)) if r > 2 else pattern(StarShape.of(val))


def run_finder(spec: str, host: Hypergraph, params: dict | None = None) -> FinderReport:
    """Dispatch a pattern spec to the matching finder."""
    params = dict(params or {})
    kind, val = parse_pattern_spec(spec)
    if kind == "sf":
        return find_sunflower(host, val, params.get("thresholds"))
    if kind == "st":
        if val.r != host.r:
            raise SpecError(f"{spec} is {val.r}-uniform but the host is {host.r}-uniform")
        if val.r == 3:
            return find_st3(host, *val.degrees)
        if val.r == 4:
            return find_st4(host, val, params.get("thresholds"))
        return match_or_star(host, val.degrees[0], 1)
    if kind == "k4p":
        s, _, _, t = val
        return find_disjoint_4partite(host, s, t, int(params.get("copies", 1)))
    if host.r != 2:
        raise SpecError(f"{kind} finder needs a 2-graph")
    if kind == "matching":
        return match_or_star(host, int(params.get("star", host.n)), val)
    return match_or_star(host, val, int(params.get("matching", 1)))


# --- certificates -------------------------------------------------------------


def _embedding_cert(host: Hypergraph, embeddings: list[Embedding], disjoint: bool = False) -> dict:
    return {
        "kind": "embedding",
        "host": serialize(host),
        "copies": [{"pattern": serialize(e.pattern), "vertex_map": list(e.vertex_map)} for e in embeddings],
        "disjoint": disjoint,
    }


def certificate_problems(cert: dict) -> list[str]:
    """Re-check a certificate from scratch; empty list means it holds."""
    kind = cert.get("kind")
    if kind == "embedding":
        host = parse(cert["host"])
        out, seen = [], set()
        for i, c in enumerate(cert["copies"]):
            emb = Embedding(parse(c["pattern"]), host, tuple(c["vertex_map"]))
            out.extend(f"copy {i}: {p}" for p in emb.problems())
            if cert.get("disjoint") and seen & emb.host_vertices:
                out.append(f"copy {i} overlaps an earlier copy")
            seen |= emb.host_vertices
        return out
    if kind == "sunflower-free":
        host, t, k = parse(cert["host"]), cert["t"], cert["k"]
        res = max_sunflower_exact(host, t, stop_at=k)
        return [] if res.exact and res.value < k else [f"host has a {res.value}-petal sunflower with kernel size {t}"]
    if kind == "avoids":
        host, pat = parse(cert["host"]), parse(cert["pattern"])
        res = contains_exact(host, pat)
        return [] if res.status == ABSENT else [f"host contains the pattern ({res.status})"]
    if kind == "turan":
        wit, pat = parse(cert["witness"]), parse(cert["pattern"])
        out = []
        if wit.e != cert["lower"] or wit.n != cert["n"]:
            out.append("witness size does not match the recorded lower bound")
        if contains_exact(wit, pat.strip_isolated()).status != ABSENT:
            out.append("witness contains the pattern")
        return out
    return [f"unknown certificate kind {kind!r}"]


def load_certificate(path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text())
    except OSError as exc:
        raise OSError(f"{path}: {exc.strerror}") from exc


# --- golden set for the two Turán solvers ---------------------------------------

GOLDEN_PATTERNS: dict[str, Hypergraph] = {
    "edge3": build(3, 3, [(0, 1, 2)]),
    "sf3_2_2": pattern(SunflowerShape(3, 2, 2)),
    "sf3_1_2": pattern(SunflowerShape(3, 1, 2)),
    "sf3_0_2": pattern(SunflowerShape(3, 0, 2)),
    "sf3_2_3": pattern(SunflowerShape(3, 2, 3)),
    "k4_3": complete(3, 4),
    "k4_minus": build(3, 4, [(0, 1, 2), (0, 1, 3), (0, 2, 3)]),
    "loose_path3": build(3, 5, [(0, 1, 2), (2, 3, 4)]),
    "st3_2_1": pattern(StarShape.of(2, 1)),
    "triangle": complete(2, 3),
    "path2": build(2, 3, [(0, 1), (1, 2)]),
    "c4": build(2, 4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
    "star3": pattern(StarShape.of(3)),
    "matching2": pattern(SunflowerShape(2, 0, 2)),
    "sf4_3_2": pattern(SunflowerShape(4, 3, 2)),
    "sf4_2_2": pattern(SunflowerShape(4, 2, 2)),
}

# (pattern, n): every instance with C(n, r) <= 35 that the pattern fits into
GOLDEN: tuple[tuple[str, int], ...] = tuple(
    (name, n)
    for name, P in GOLDEN_PATTERNS.items()
    for n in range(max(P.n, P.r), 10)
    if math.comb(n, P.r) <= 35
)


# --- experiments ----------------------------------------------------------------


@dataclass(frozen=True)
class Experiment:
    id: str
    claim: str
    grid_keys: tuple[str, ...]
    validate: Callable[[dict, Constants, dict], list[str]]
    run: Callable[[dict, Constants, dict], dict]


def _budget(params: dict) -> SearchBudget:
    return SearchBudget(params.get("node_limit"), params.get("time_limit"))


def _record(status: str, **fields) -> dict:
    return {"status": status, **fields}


def _shape_key(raw) -> tuple[int, int]:
    if isinstance(raw, str):
        r, t = (int(x) for x in raw.split(","))
        return r, t
    r, t = raw
    return int(r), int(t)


def _validate_freeness(p: dict, constants: Constants, params: dict) -> list[str]:
    out = []
    r, t = _shape_key(p["shape"])
    if (r, t) not in SUPPORTED_SUNFLOWERS:
        out.append(f"unsupported shape {(r, t)}")
    if not 2 <= p["k"] <= p["n"] // 2:
        out.append("need 2 <= k <= n/2")
    return out


def _run_freeness(p: dict, constants: Constants, params: dict) -> dict:
    r, t = _shape_key(p["shape"])
    shape = SunflowerShape(r, t, p["k"])
    G = sf_free(shape, p["n"], p.get("seed", 0), constants)
    bound = sf_free_bound(shape, p["n"])
    res = max_sunflower_exact(G, t, _budget(params), stop_at=shape.k)
    stats = {"edges": G.e, "bound": bound, "largest_sunflower": res.value, "nodes": res.nodes}
    if not res.exact:
        return _record(BUDGET, stats=stats)
    ok = res.value < shape.k and G.e >= bound
    cert = {"kind": "sunflower-free", "host": serialize(G), "t": t, "k": shape.k}
    return _record(PASS if ok else FAIL, stats=stats, certificate=cert)


def _validate_linearity(p: dict, constants: Constants, params: dict) -> list[str]:
    return [] if p["k"] >= 2 and p["n"] >= p["k"] else ["need 2 <= k <= n"]


def _run_linearity(p: dict, constants: Constants, params: dict) -> dict:
    k, n = p["k"], p["n"]
    G = linear_partial_lines(k, n)
    worst = max((len(set(a) & set(b)) for a, b in combinations(G.edges, 2)), default=0)
    need = n * n / (4 * k * k)
    ok = worst <= 1 and G.e >= need
    return _record(PASS if ok else FAIL, stats={"edges": G.e, "needed": need, "max_intersection": worst})


def _validate_er(p: dict, constants: Constants, params: dict) -> list[str]:
    return [] if p["r"] >= 1 and p["k"] >= 2 else ["need r >= 1 and k >= 2"]


def _largest_sunflower_any_kernel(G: Hypergraph, k: int) -> int:
    return max(max_sunflower_exact(G, t, stop_at=k).value for t in range(G.r))


def _run_er(p: dict, constants: Constants, params: dict) -> dict:
    r, k = p["r"], p["k"]
    lo, hi = erdos_rado_bounds(r, k)
    res = f_exact(r, k, _budget(params))
    L = er_lower(r, k)
    petals = _largest_sunflower_any_kernel(L, k) if L.e else 0
    stats = {"lower": res.lower, "upper": res.upper, "er_low": lo, "er_high": hi,
             "lower_family": L.e, "lower_family_petals": petals, "nodes": res.nodes}
    ok = lo <= res.lower <= res.upper <= hi and L.e == (k - 1) ** r and petals < k
    if p.get("expect") is not None and res.exact:
        ok = ok and res.lower == p["expect"]
    if ok and not res.exact:
        return _record(BUDGET, stats=stats)
    return _record(PASS if ok else FAIL, stats=stats)


def _guarantee_host(p: dict, constants: Constants, params: dict) -> tuple[SunflowerShape, int]:
    shape = SunflowerShape(3, 1, p["k"])
    factor = Fraction(str(params.get("factor", 1)))
    e = math.ceil(factor * Fraction(str(guarantee_edges(shape, p["n"], constants))))
    return shape, e


def _validate_guarantee(p: dict, constants: Constants, params: dict) -> list[str]:
    if p["k"] < 1:
        return ["need k >= 1"]
    _, e = _guarantee_host(p, constants, params)
    return [] if e <= math.comb(p["n"], 3) else [f"e={e} exceeds C({p['n']},3)"]


def _run_guarantee(p: dict, constants: Constants, params: dict) -> dict:
    shape, e = _guarantee_host(p, constants, params)
    G = random_hypergraph(3, p["n"], e, p.get("seed", 0))
    rep = find_sunflower(G, shape)
    ok = rep.found and not rep.problems()
    stats = {"edges": e, "trace": rep.trace}
    rec = _record(PASS if ok else FAIL, stats=stats, outcome=rep.outcome, failed_phase=rep.failed_phase)
    if rep.found:
        rec["certificate"] = _embedding_cert(G, rep.embeddings)
    return rec


SANDWICH_PATTERNS = ("sf:3,1,2", "sf:3,2,2", "st:2,2")


def _validate_sandwich(p: dict, constants: Constants, params: dict) -> list[str]:
    try:
        kind, val = parse_pattern_spec(p["pattern"])
    except SpecError as exc:
        return [str(exc)]
    return [] if val.r == 3 else ["sandwich patterns must be 3-uniform"]


def _run_sandwich(p: dict, constants: Constants, params: dict) -> dict:
    rng = random.Random(p["seed"])
    n = rng.randint(3, params.get("n_max", 6))
    e = rng.randint(0, math.comb(n, 3))
    G = random_hypergraph(3, n, e, p["seed"])
    pat = pattern_from_spec(p["pattern"], 3)
    rep = run_finder(p["pattern"], G)
    orc = contains_exact(G, pat, _budget(params))
    violations = []
    if rep.found and (rep.problems() or orc.status != FOUND):
        violations.append("finder found but oracle does not confirm")
    if orc.status == ABSENT and rep.found:
        violations.append("oracle absent but finder found")
    if orc.status == FOUND and not orc.embedding.is_valid():
        violations.append("oracle witness does not validate")
    stats = {"n": n, "edges": e, "finder": rep.outcome, "oracle": orc.status}
    if orc.status not in (FOUND, ABSENT):
        return _record(BUDGET, stats=stats)
    return _record(FAIL if violations else PASS, stats=stats, violations=violations)


def _validate_cross(p: dict, constants: Constants, params: dict) -> list[str]:
    return [] if p["pattern"] in GOLDEN_PATTERNS else [f"unknown golden pattern {p['pattern']!r}"]


def _run_cross(p: dict, constants: Constants, params: dict) -> dict:
    P, n = GOLDEN_PATTERNS[p["pattern"]], p["n"]
    a = ex_exact(n, P, _budget(params))
    b = ex_by_dfs(n, P, _budget(params))
    stats = {"conflict": [a.lower, a.upper], "dfs": [b.lower, b.upper]}
    if not (a.exact and b.exact):
        agree = max(a.lower, b.lower) <= min(a.upper, b.upper)
        return _record(BUDGET if agree else FAIL, stats=stats)
    cert = {"kind": "turan", "n": n, "pattern": serialize(P), "lower": a.lower, "witness": serialize(a.witness)}
    return _record(PASS if a.value == b.value else FAIL, stats=stats, certificate=cert)


def two_edge_patterns(r: int) -> dict[int, Hypergraph]:
    """The r-graphs with two edges, keyed by the size of their intersection."""
    return {i: build(r, 2 * r - i, [tuple(range(r)), tuple(range(r - i, 2 * r - i))]) for i in range(r)}


def fixed_pair_host(n: int) -> Hypergraph:
    """Every 4-set through {0, 1}: any two edges share at least two vertices."""
    return Hypergraph(4, n, tuple((0, 1) + b for b in combinations(range(2, n), 2)))


def _validate_unavoid(p: dict, constants: Constants, params: dict) -> list[str]:
    return [] if p["n"] >= 8 else ["need n >= 8 so every two-edge pattern fits"]


def _run_unavoid(p: dict, constants: Constants, params: dict) -> dict:
    n = p["n"]
    linear = partial_steiner(2, 4, n, p.get("seed", 0))
    pair = fixed_pair_host(n)
    e = min(linear.e, pair.e)
    hosts = {"linear": linear.subgraph(linear.edges[:e]), "fixed_pair": pair.subgraph(pair.edges[:e])}
    avoided, certs, budget_hit = {}, [], False
    for i, P in two_edge_patterns(4).items():
        avoided[i] = None
        for name, H in hosts.items():
            res = contains_exact(H, P, _budget(params))
            if res.status == ABSENT:
                avoided[i] = name
                certs.append({"kind": "avoids", "host": serialize(H), "pattern": serialize(P)})
                break
            budget_hit |= res.status not in (FOUND, ABSENT)
    single = is_unavoidable(build(4, 4, [(0, 1, 2, 3)]), n, e)
    # second route: orderly growth over patterns, deciding each by its Turán number;
    # an interval ex in [lo, hi] with lo >= e already proves avoidability
    un = un_exact(4, n, e, budget=SearchBudget(params.get("un_node_limit", 2000)))
    stats = {"e": e, "linear_edges": linear.e, "fixed_pair_edges": pair.e,
             "avoided_by": {str(i): h for i, h in avoided.items()}, "single_edge": single.answer,
             "un": [un.lower, un.upper], "patterns_checked": un.patterns_checked}
    ok = all(avoided.values()) and single.answer == YES and un.lower == un.upper == 1
    budget_hit |= un.upper is None
    if not ok and budget_hit:
        return _record(BUDGET, stats=stats)
    return _record(PASS if ok else FAIL, stats=stats, certificates=certs)


def kst_instance(a: int, b: int, s: int, t: int, seed: int) -> list[tuple[int, int]]:
    """A random bipartite edge set just dense enough for the counting hypothesis."""
    m = 0
    while not kst_hypothesis(a, b, m, s, t):
        m += 1
        if m > a * b:
            raise SpecError(f"no edge count satisfies the hypothesis for {(a, b, s, t)}")
    rng = random.Random(seed)
    return sorted(rng.sample([(x, y) for x in range(a) for y in range(b)], m))


def _validate_kst(p: dict, constants: Constants, params: dict) -> list[str]:
    a, b, s, t = p["a"], p["b"], p["s"], p["t"]
    if not (1 <= s <= a and 1 <= t <= b):
        return ["need 1 <= s <= a and 1 <= t <= b"]
    if not kst_hypothesis(a, b, a * b, s, t):
        return ["even the complete bipartite graph misses the hypothesis"]
    return []


def _run_kst(p: dict, constants: Constants, params: dict) -> dict:
    a, b, s, t, seed = p["a"], p["b"], p["s"], p["t"], p["seed"]
    edges = kst_instance(a, b, s, t, seed)
    hyp = kst_hypothesis(a, b, len(edges), s, t)
    rep = kst_bipartite(a, b, edges, s, t)
    # a random 3-partite tuple set of the same density for the r-partite search
    rng = random.Random(seed)
    M = [x for x in product(range(a), range(a), range(b)) if rng.random() < len(edges) / (a * b)]
    blocks = kst_rpartite(M, s, last_size=t) if M else None
    member = True
    if blocks is not None and blocks.found:
        Mset = set(M)
        member = all(x in Mset for x in blocks.product())
    ok = hyp and rep.found and not rep.problems() and member
    stats = {"edges": len(edges), "hypothesis": hyp, "bipartite": rep.outcome,
             "rpartite": None if blocks is None else blocks.found, "blocks_inside": member}
    rec = _record(PASS if ok else FAIL, stats=stats)
    if rep.found:
        rec["certificate"] = _embedding_cert(rep.embeddings[0].host, rep.embeddings)
    return rec


def level_set_instance(n: int, k: int, t: int) -> tuple[Hypergraph, int]:
    """t planted St_4(d,d,k) for d read off the nominal n, plus a clique big
    enough that e >= 4td^2 k."""
    d = star_width(n, k)
    shape = StarShape.of(d, d, k)
    core = 4
    while math.comb(core, 4) + t * shape.edge_count < 4 * t * d * d * k:
        core += 1
    return planted([pattern(shape)] * t, core=core), d


def recheck_well_behaved(host: Hypergraph, emb: Embedding, d: int, k: int, t: int) -> list[str]:
    """Layer degrees against L2 = e/(4td), L3 = e/(4td^2), L4 = e/(4td^2 k), from scratch."""
    e = host.e
    caps = [None, e / (4 * t * d), e / (4 * t * d * d), e / (4 * t * d * d * k)]
    deg = [0] * host.n
    for edge in host.edges:
        for v in edge:
            deg[v] += 1
    out = []
    for depth, layer in enumerate(star_layers(StarShape.of(d, d, k))):
        if depth == 0:
            continue
        for v in layer:
            w = emb.vertex_map[v]
            if deg[w] > caps[depth]:
                out.append(f"layer {depth + 1} vertex {w}: degree {deg[w]} > {caps[depth]:.3f}")
    return out


def _validate_level(p: dict, constants: Constants, params: dict) -> list[str]:
    if p["t"] < 1 or p["k"] < 1:
        return ["need t >= 1 and k >= 1"]
    return [] if star_width(p["n"], p["k"]) >= 1 else ["star width is zero"]


def _run_level(p: dict, constants: Constants, params: dict) -> dict:
    n, k, t = p["n"], p["k"], p["t"]
    G, d = level_set_instance(n, k, t)
    rep = find_disjoint_st4(G, k, t, d=d)
    problems = rep.problems()
    if rep.found:
        if len(rep.embeddings) != t:
            problems.append(f"{len(rep.embeddings)} copies instead of {t}")
        for i, emb in enumerate(rep.embeddings):
            problems.extend(f"copy {i}: {x}" for x in recheck_well_behaved(G, emb, d, k, t))
    ok = rep.found and not problems
    stats = {"host_vertices": G.n, "edges": G.e, "d": d, "trace": rep.trace, "problems": problems}
    rec = _record(PASS if ok else FAIL, stats=stats, outcome=rep.outcome)
    if rep.found:
        rec["certificate"] = _embedding_cert(G, rep.embeddings, disjoint=True)
    return rec


REGISTRY: dict[str, Experiment] = {
    x.id: x
    for x in [
        Experiment("construction-freeness", "sunflower-free constructions hit their edge bound",
                   ("shape", "k", "n", "seed"), _validate_freeness, _run_freeness),
        Experiment("linearity", "linear partial lines are linear and large",
                   ("k", "n"), _validate_linearity, _run_linearity),
        Experiment("erdos-rado", "f_r(k) sits inside the Erdős–Rado bounds",
                   ("r", "k", "expect"), _validate_er, _run_er),
        Experiment("finder-guarantee", "Sf_3(1,k) is found above the density threshold",
                   ("k", "n", "seed"), _validate_guarantee, _run_guarantee),
        Experiment("oracle-sandwich", "finders never contradict the exact containment oracle",
                   ("pattern", "seed"), _validate_sandwich, _run_sandwich),
        Experiment("cross-oracle", "the conflict and DFS Turán solvers agree",
                   ("pattern", "n"), _validate_cross, _run_cross),
        Experiment("unavoidability", "two-edge 4-graphs are avoidable below n^2 edges",
                   ("n", "seed"), _validate_unavoid, _run_unavoid),
        Experiment("kst", "K_{s,t} is found whenever the counting hypothesis holds",
                   ("a", "b", "s", "t", "seed"), _validate_kst, _run_kst),
        Experiment("level-set", "disjoint well-behaved St_4(d,d,k) on planted hosts",
                   ("n", "k", "t"), _validate_level, _run_level),
    ]
}


# --- specs and reports ----------------------------------------------------------


@dataclass
class ExperimentSpec:
    experiment: str
    grid: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    constants: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentSpec:
        unknown = set(data) - {"experiment", "grid", "params", "constants", "outputs"}
        if unknown:
            raise SpecError(f"unknown spec keys: {sorted(unknown)}")
        if "experiment" not in data:
            raise SpecError("spec needs an 'experiment' id")
        return cls(data["experiment"], dict(data.get("grid", {})), dict(data.get("params", {})),
                   dict(data.get("constants", {})), dict(data.get("outputs", {})))

    @classmethod
    def load(cls, path) -> ExperimentSpec:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise OSError(f"{path}: {exc.strerror}") from exc
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"experiment": self.experiment, "grid": self.grid, "params": self.params,
                "constants": self.constants, "outputs": self.outputs}

    def points(self) -> list[dict]:
        """Grid points in seed-major order; other keys vary in sorted-name order."""
        if not self.grid:
            return []
        keys = sorted(self.grid, key=lambda k: (k != "seed", k))
        for k in keys:
            if not isinstance(self.grid[k], list):
                raise SpecError(f"grid entry {k!r} must be a list")
        return [dict(zip(keys, combo)) for combo in product(*(self.grid[k] for k in keys))]


@dataclass
class Report:
    body: dict
    timing: dict

    @property
    def digest(self) -> str:
        return body_digest(self.body)

    @property
    def summary(self) -> dict:
        return self.body["summary"]

    @property
    def ok(self) -> bool:
        return self.summary["fail"] == 0

    def to_dict(self) -> dict:
        return {"body": self.body, "digest": self.digest, "timing": self.timing}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def body_digest(body: dict) -> str:
    return hashlib.sha256(canonical_json(body).encode()).hexdigest()


def validate_spec(spec: ExperimentSpec) -> list[dict]:
    """All grid points, after checking every one of them; raises SpecError listing every problem."""
    if spec.experiment not in REGISTRY:
        raise SpecError(f"unknown experiment {spec.experiment!r}; known: {sorted(REGISTRY)}")
    exp = REGISTRY[spec.experiment]
    stray = set(spec.grid) - set(exp.grid_keys)
    if stray:
        raise SpecError(f"grid keys {sorted(stray)} not used by {exp.id} (expects {list(exp.grid_keys)})")
    try:
        constants = DEFAULT.override(**spec.constants)
    except (KeyError, TypeError) as exc:
        raise SpecError(str(exc)) from None
    points = spec.points()
    problems = []
    for i, p in enumerate(points):
        try:
            bad = exp.validate(p, constants, spec.params)
        except (KeyError, TypeError, ValueError) as exc:
            bad = [f"{type(exc).__name__}: {exc}"]
        problems.extend(f"point {i} {p}: {msg}" for msg in bad)
    if problems:
        raise SpecError("invalid grid:\n  " + "\n  ".join(problems))
    return points


def _run_point(args) -> tuple[dict, float]:
    exp_id, point, constants, params = args
    start = time.perf_counter()
    try:
        rec = REGISTRY[exp_id].run(point, DEFAULT.override(**constants), params)
    except Exception as exc:  # a crashing point is a failed expectation, not a crashed run
        rec = _record(FAIL, error=f"{type(exc).__name__}: {exc}")
    return rec, time.perf_counter() - start


def _write_certs(rec: dict, cert_dir: Path, stem: str) -> None:
    certs = []
    if "certificate" in rec:
        certs.append(rec.pop("certificate"))
    certs.extend(rec.pop("certificates", []))
    refs = []
    for j, cert in enumerate(certs):
        text = canonical_json(cert)
        ref = {"sha256": hashlib.sha256(text.encode()).hexdigest()}
        if cert_dir is not None:
            path = cert_dir / f"{stem}-{j}.json"
            path.write_text(text + "\n")
            ref["path"] = str(path)
        refs.append(ref)
    if refs:
        rec["certificates"] = refs


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> Report:
    points = validate_spec(spec)
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    cert_dir = Path(spec.outputs["certificates"]) if spec.outputs.get("certificates") else None
    if cert_dir is not None:
        cert_dir.mkdir(parents=True, exist_ok=True)
    jobs = [(spec.experiment, p, spec.constants, spec.params) for p in points]
    t0 = time.perf_counter()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_point, jobs))
    else:
        results = [_run_point(j) for j in jobs]
    records, walls = [], []
    for i, (p, (rec, wall)) in enumerate(zip(points, results)):
        _write_certs(rec, cert_dir, f"{spec.experiment}-{i:04d}")
        records.append({"index": i, "inputs": p, **rec})
        walls.append(round(wall, 6))
    counts = {s: sum(r["status"] == s for r in records) for s in (PASS, FAIL, BUDGET)}
    body = {
        "toolkit": {"name": "hgturan", "version": __version__},
        "experiment": spec.experiment,
        "claim": REGISTRY[spec.experiment].claim,
        "spec": {"grid": spec.grid, "params": spec.params, "constants": spec.constants},
        "constants": DEFAULT.override(**spec.constants).snapshot(),
        "records": records,
        "summary": {"points": len(records), **counts},
    }
    timing = {"started": started, "workers": workers, "total_seconds": round(time.perf_counter() - t0, 6),
              "point_seconds": walls}
    report = Report(json.loads(canonical_json(body)), timing)
    write_report(report, spec.outputs)
    return report


CSV_FIELDS = ("index", "status", "inputs", "stats")


def write_report(report: Report, outputs: dict) -> None:
    if outputs.get("report"):
        path = Path(outputs["report"])
        try:
            path.write_text(report.to_json())
        except OSError as exc:
            raise OSError(f"{path}: {exc.strerror}") from exc
    if outputs.get("csv"):
        path = Path(outputs["csv"])
        try:
            with path.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(CSV_FIELDS)
                for rec in report.body["records"]:
                    w.writerow([rec["index"], rec["status"], canonical_json(rec["inputs"]),
                                canonical_json(rec.get("stats", {}))])
        except OSError as exc:
            raise OSError(f"{path}: {exc.strerror}") from exc


# --- Turán tables ---------------------------------------------------------------


@dataclass
class TableCell:
    pattern: str
    n: int
    lower: int
    upper: int
    nodes: int
    witness: str | None = None
    cross_check: int | None = None

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_dict(self) -> dict:
        return {"pattern": self.pattern, "n": self.n, "lower": self.lower, "upper": self.upper,
                "exact": self.exact, "interval": not self.exact, "nodes": self.nodes,
                "witness": self.witness, "cross_check": self.cross_check}


def steiner_packing_number(t: int, r: int, n: int, budget: SearchBudget | None = None) -> int | None:
    """Largest family of r-sets on n points with every t-set in at most one member,
    by exact set packing over t-subsets.  None when the budget runs out."""
    subsets = {S: i for i, S in enumerate(combinations(range(n), t))}
    masks = [sum(1 << subsets[S] for S in combinations(e, t)) for e in combinations(range(n), r)]
    meter = _Meter(budget)
    try:
        return len(max_packing(masks, math.comb(r, t), meter))
    except BudgetExceeded:
        return None


def turan_table(r: int, n_max: int, patterns: dict[str, Hypergraph], budget: SearchBudget | None = None,
                cache: OracleCache | None = None, witness_dir=None) -> list[TableCell]:
    """ex(n, H) for every listed pattern and every n from |V(H)| up to n_max.

    Columns for the sunflower Sf_r(r-1, 2) are cross-checked by exact packing.
    """
    cells = []
    wdir = Path(witness_dir) if witness_dir else None
    if wdir is not None:
        wdir.mkdir(parents=True, exist_ok=True)
    steiner_key = canonical_form(pattern(SunflowerShape(r, r - 1, 2))) if r >= 2 else None
    for name, P in patterns.items():
        if P.r != r:
            raise ValueError(f"pattern {name} is {P.r}-uniform, table is {r}-uniform")
        core = P.strip_isolated()
        is_steiner = core.n <= 12 and canonical_form(core) == steiner_key
        for n in range(max(core.n, r), n_max + 1):
            res = ex_exact(n, P, budget, cache)
            cell = TableCell(name, n, res.lower, res.upper, res.nodes)
            if wdir is not None:
                path = wdir / f"ex-{name}-n{n}.hg"
                path.write_text(serialize(res.witness))
                cell.witness = str(path)
            if is_steiner and res.exact:
                cell.cross_check = steiner_packing_number(r - 1, r, n, budget)
            cells.append(cell)
    return cells


def write_table(cells: list[TableCell], json_path=None, csv_path=None) -> None:
    if json_path:
        Path(json_path).write_text(json.dumps([c.to_dict() for c in cells], indent=2) + "\n")
    if csv_path:
        with Path(csv_path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["pattern", "n", "lower", "upper", "interval", "cross_check", "witness"])
            for c in cells:
                w.writerow([c.pattern, c.n, c.lower, c.upper, int(not c.exact), c.cross_check, c.witness])


# --- regime arithmetic -----------------------------------------------------------

REGIMES = ("sparse", "middle", "dense", "very-dense")
VERY_DENSE_EXPONENT = Fraction(4) - Fraction(1, 216)


def regime_of(n: int, e: int) -> str:
    """Which regime holds (n, e); shared boundaries go to the lower regime."""
    total = math.comb(n, 4)
    if not 1 <= e < total:
        raise ValueError(f"need 1 <= e < C(n,4) = {total}, got e={e}")
    if e <= n**2:
        return "sparse"
    if e <= n**3:
        return "middle"
    # e <= n^(4 - 1/216), compared exactly; floats overflow long before this regime exists
    q = VERY_DENSE_EXPONENT
    if e ** q.denominator <= n ** q.numerator:
        return "dense"
    return "very-dense"


def _pow(x: int, a: float) -> float:
    """x**a through logs, so huge integers do not overflow."""
    return math.exp(a * math.log(x))


def _log_ratio(a: int, b: int) -> float:
    """log(a/b) for positive ints, accurate when a/b is close to 1."""
    q = Fraction(a - b, b)
    return math.log1p(float(q)) if abs(q) < 1 else math.log(a) - math.log(b)


def _log_log_ratio(a: int, b: int) -> float:
    """log(log(a/b)) for a > b; log(a/b) ~ (a-b)/b once the ratio underflows."""
    lr = _log_ratio(a, b)
    return math.log(lr) if lr > 1e-12 else math.log(a - b) - math.log(b)


def very_dense_s(n: int, e: int) -> float:
    """(1/12) (log n / log(n^4/e))^(1/3), the real class size in the very dense regime."""
    return (math.log(n) / _log_ratio(n**4, e)) ** (1 / 3) / 12


def _predicted(regime: str, n: int, e: int) -> tuple[str, float]:
    """The predicted un_4 expression and its natural log."""
    ln, le = math.log(n), math.log(e)
    if regime == "sparse":
        return "1", 0.0
    if regime == "middle":
        return "min{(e/n^2)^(3/4), (e/n)^(1/3)}", min(0.75 * (le - 2 * ln), (le - ln) / 3)
    return ("min{e^(4/3)/n^(10/3), e^(1/4) log n / log(C(n,4)/e)}",
            min(4 / 3 * le - 10 / 3 * ln, le / 4 + math.log(ln) - _log_log_ratio(math.comb(n, 4), e)))


def derive_parameters(regime: str | None, n: int, e: int, c: float = 1.0) -> dict:
    """Integer parameters the matching construction/finder pair consumes.

    ``regime`` None means infer it.  ``c`` is the middle-regime constant in
    k = c sqrt(e)/n.
    """
    actual = regime_of(n, e)
    if regime is None:
        regime = actual
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; known: {list(REGIMES)}")
    if regime != actual:
        raise ValueError(f"(n={n}, e={e}) lies in the {actual} regime, not {regime}")
    expr, log_value = _predicted(regime, n, e)
    out: dict = {"regime": regime, "n": n, "e": e, "predicted_un4": expr, "predicted_log_value": log_value,
                 "predicted_value": math.exp(log_value) if log_value < 700 else None}
    if regime == "sparse":
        out.update(pattern="single edge", pattern_edges=1)
    elif regime == "middle":
        k = iroot(Fraction(c) ** 2 * e / n**2, 2)
        shape = StarShape.of(max(isqrt(k), 1), max(k, 1), 1)
        out.update(k=k, pattern=f"St4({isqrt(k)},{k},1)", pattern_edges=shape.edge_count if k else 0,
                   k_three_halves=iroot(k**3, 2))
    elif regime == "dense":
        k = max(e // n**3, 1)
        d = star_width(n, k)
        t = min(k, iroot(d, 4))
        out.update(k=k, d=d, t=t, pattern=f"{t} x St4({d},{d},{k})", pattern_edges=t * d * d * k)
    else:
        s_real = very_dense_s(n, e)
        copies = math.floor(math.exp(_log_ratio(e, n) / 4) / 24)
        out.update(s_real=s_real, s=math.floor(s_real), t_real=_pow(n, 0.25), t=iroot(n, 4),
                   copies=copies, pattern=f"{copies} x K4(s,s,s,t)")
    return out
