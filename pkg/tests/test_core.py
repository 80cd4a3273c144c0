import random
from itertools import combinations, permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FANO_LINES, hypergraphs, random_graph
from hgturan.constructions import pattern, random_hypergraph
from hgturan.core import (
    CanonicalBudgetError,
    Embedding,
    HypergraphError,
    HypergraphParseError,
    StarShape,
    SunflowerShape,
    are_isomorphic,
    build,
    canonical_form,
    codegree,
    codegree_table,
    complete,
    disjoint_union,
    expanding_sets,
    level_sets,
    link,
    parse,
    read_hg,
    serialize,
    write_hg,
)


def test_build_collapses_duplicates():
    G = build(3, 4, [(0, 1, 2), (2, 1, 0)])
    assert G.e == 1


def test_build_path():
    G = build(2, 3, [(0, 1), (1, 2)])
    assert G.edges == ((0, 1), (1, 2))
    assert G.degrees == (1, 2, 1)


@pytest.mark.parametrize(
    "r, n, edges",
    [(4, 3, [(0, 1, 2, 3)]), (3, 3, [(0, 0, 1)]), (3, 3, [(0, 1)]), (2, 2, [(-1, 0)])],
)
def test_build_rejects_bad_edges(r, n, edges):
    with pytest.raises(HypergraphError):
        build(r, n, edges)


def test_link_of_single_edge():
    L = link(build(3, 3, [(0, 1, 2)]), [0])
    assert (L.r, L.edges) == (2, ((1, 2),))


def test_link_of_sunflower_centre_is_matching():
    G = pattern(SunflowerShape(3, 1, 3))
    L = link(G, [0])
    assert L.e == 3
    assert len({v for e in L.edges for v in e}) == 6


def test_fano_link_is_three_disjoint_pairs(fano):
    L = link(fano, [0])
    assert L.edges == ((1, 2), (3, 4), (5, 6))


@pytest.mark.parametrize(
    "G, S, expected",
    [
        (pattern(SunflowerShape(4, 2, 5)), (0, 1), 5),
        (complete(3, 4), (0, 1), 2),
        (build(3, 7, FANO_LINES), (0,), 3),
        (build(3, 7, FANO_LINES), (0, 1, 2), 1),
        (build(3, 7, FANO_LINES), (0, 1, 3), 0),
    ],
)
def test_codegree(G, S, expected):
    assert codegree(G, S) == expected


def test_expanding_sets_examples(fano):
    star = pattern(SunflowerShape(3, 1, 4))
    assert expanding_sets(star, 1, 4) == [(0,)]
    assert expanding_sets(star, 2, 2) == []
    assert len(expanding_sets(fano, 2, 1)) == 21


def test_level_sets_matching():
    G = build(2, 6, [(0, 1), (2, 3)])
    P = level_sets(G, 2, 1, 0)
    assert (P.A, P.B, P.C) == (frozenset(), frozenset(), frozenset({0, 1, 2, 3}))
    assert P.D == {4, 5}


def test_level_sets_star():
    G = build(2, 6, [(0, i) for i in range(1, 6)])
    P = level_sets(G, 4, 1, 0)
    assert P.A == {0} and P.B == frozenset() and P.C == {1, 2, 3, 4, 5}
    assert P.bucket_of(0) == "A"


def test_level_sets_handshaking_bounds():
    G = random_hypergraph(3, 30, 200, seed=7)
    e = G.e
    L2, L3, L4 = e / 4, e / 16, e / 64
    P = level_sets(G, L2, L3, L4)
    deg = [sum(v in x for x in G.edges) for v in range(G.n)]
    assert P.A == {v for v in range(G.n) if deg[v] > L2}
    assert len(P.A) <= 3 * e / L2
    assert len(P.A | P.B) <= 3 * e / L3
    assert len(P.A | P.B | P.C) <= 3 * e / L4
    assert P.A | P.B | P.C | P.D == set(range(G.n))


def test_level_sets_rejects_unordered_thresholds():
    with pytest.raises(ValueError):
        level_sets(complete(3, 4), 1, 2, 0)


def test_handshaking_over_seeds():
    for seed in range(1000):
        rng = random.Random(seed)
        r = rng.randint(2, 4)
        G = random_graph(r, rng.randint(r, 9), rng.random(), seed)
        assert sum(codegree(G, [v]) for v in range(G.n)) == r * G.e


@given(hypergraphs())
def test_link_size_equals_codegree(G):
    for size in range(1, G.r):
        for S in combinations(range(G.n), size):
            assert link(G, S).e == codegree(G, S)


@given(hypergraphs(max_n=8), st.integers(1, 4))
def test_expanding_sets_match_enumeration(G, theta):
    for size in range(1, G.r):
        direct = [S for S in combinations(range(G.n), size) if codegree(G, S) >= theta]
        assert expanding_sets(G, size, theta) == direct


def test_codegree_table_agrees(fano):
    table = codegree_table(fano, 2)
    assert set(table.values()) == {1} and len(table) == 21


def test_canonical_form_fano_relabelled(fano):
    perm = [3, 6, 0, 5, 1, 2, 4]
    assert canonical_form(fano) == canonical_form(fano.relabel(perm))


def test_canonical_form_separates_sunflowers():
    assert canonical_form(pattern(SunflowerShape(3, 1, 2))) != canonical_form(pattern(SunflowerShape(3, 2, 2)))


def _iso_brute(G, H):
    return any(sorted(tuple(sorted(p[v] for v in e)) for e in G.edges) == list(H.edges) for p in permutations(range(G.n)))


def test_canonical_classes_on_four_vertices():
    triples = list(combinations(range(4), 3))
    graphs = [build(3, 4, [triples[i] for i in range(4) if mask >> i & 1]) for mask in range(16)]
    by_form = {canonical_form(G) for G in graphs}
    reps = []
    for G in graphs:
        if not any(_iso_brute(G, R) for R in reps):
            reps.append(G)
    assert len(by_form) == len(reps) == 5


def test_canonical_form_invariant_under_permutation():
    for seed in range(500):
        rng = random.Random(seed)
        r = rng.randint(2, 4)
        G = random_graph(r, rng.randint(r, 8), rng.random(), seed)
        perm = list(range(G.n))
        rng.shuffle(perm)
        assert canonical_form(G) == canonical_form(G.relabel(perm))


def test_canonical_form_budget():
    with pytest.raises(CanonicalBudgetError):
        canonical_form(complete(2, 13))


def test_are_isomorphic(fano):
    assert are_isomorphic(fano, fano.relabel([1, 2, 3, 4, 5, 6, 0]))
    assert not are_isomorphic(fano, complete(3, 7).subgraph(complete(3, 7).edges[:7]))


def test_round_trip_random():
    G = random_hypergraph(3, 20, 100, seed=3)
    assert parse(serialize(G)) == G


def test_serialization_ignores_build_order():
    edges = [(0, 1, 2), (1, 2, 3), (0, 2, 3)]
    assert serialize(build(3, 4, edges)) == serialize(build(3, 4, edges[::-1]))


def test_parse_error_names_line():
    with pytest.raises(HypergraphParseError) as err:
        parse("r=3 n=7\n0 1 2\n# comment\n0 1 2 3\n")
    assert err.value.line_no == 4


@pytest.mark.parametrize("text", ["", "r=3\n", "r=3 n=x\n", "r=2 n=3\n0 5\n", "r=2 n=3\n1 1\n"])
def test_parse_rejects(text):
    with pytest.raises(HypergraphParseError):
        parse(text)


@given(hypergraphs())
def test_parse_serialize_identity(G):
    assert parse(serialize(G)) == G


def test_file_round_trip(tmp_path, fano):
    path = tmp_path / "fano.hg"
    write_hg(fano, path)
    assert read_hg(path) == fano


def test_embedding_problems(fano):
    P = build(3, 3, [(0, 1, 2)])
    assert Embedding(P, fano, (0, 1, 2)).is_valid()
    assert Embedding(P, fano, (0, 1, 3)).problems() == ["image edge (0, 1, 3) missing from host"]
    assert "not injective" in Embedding(P, fano, (0, 0, 1)).problems()[0]


def test_shapes():
    assert SunflowerShape(3, 1, 3).vertex_count == 7
    assert StarShape.of(2, 3).edge_count == 6 and StarShape.of(2, 3).vertex_count == 9
    assert StarShape.of(2, 2, 2).edge_count == 8


def test_disjoint_union_offsets():
    G = disjoint_union([complete(2, 2), complete(2, 3)])
    assert G.n == 5 and G.edges == ((0, 1), (2, 3), (2, 4), (3, 4))
