import math
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgturan.constructions import (
    ConstructionError,
    ForcingFamily,
    complete_multipartite,
    er_lower,
    forcing_family,
    line_prime,
    linear_partial_lines,
    partial_steiner,
    pattern,
    planted,
    random_hypergraph,
    sf_free,
    sf_free_bound,
    star_layers,
    sunflower_certificate,
)
from hgturan.core import StarShape, SunflowerShape, codegree_table, link, parse, serialize
from hgturan.oracles import contains_exact, max_sunflower_exact


def max_intersection(G):
    return max((len(set(a) & set(b)) for a, b in combinations(G.edges, 2)), default=0)


@pytest.mark.parametrize("seed", range(5))
def test_steiner_triples_on_seven_points(seed):
    G = partial_steiner(2, 3, 7, seed)
    assert G.e >= 5
    assert max(codegree_table(G, 2).values()) == 1


def test_steiner_greedy_reaches_fano():
    # lexicographic greedy saturates at the Fano plane
    assert partial_steiner(2, 3, 7, 0).e == 7


@pytest.mark.parametrize("seed", range(3))
def test_steiner_matching(seed):
    G = partial_steiner(1, 2, 6, seed)
    assert G.e == 3 and max(G.degrees) == 1


def test_steiner_quadruples_codegree():
    G = partial_steiner(3, 4, 8, 1)
    assert all(c <= 1 for c in codegree_table(G, 3).values())


def test_lines_small():
    assert line_prime(2, 8) == 3
    G = linear_partial_lines(2, 8)
    assert G.e == 9 and len(G.non_isolated()) == 6
    assert max_intersection(G) <= 1


def test_lines_prime_range():
    p = line_prime(3, 50)
    assert 50 / 6 <= p <= 50 / 3
    assert max_intersection(linear_partial_lines(3, 50)) <= 1


def test_lines_precondition():
    with pytest.raises(ValueError):
        linear_partial_lines(2, 4)


@given(st.integers(2, 5), st.integers(8, 60))
def test_lines_linear_and_large(k, n):
    if k * k * 2 > n:
        with pytest.raises(ValueError):
            linear_partial_lines(k, n)
        return
    G = linear_partial_lines(k, n)
    assert max_intersection(G) <= 1
    assert G.e >= n * n / (4 * k * k)


def test_sf31_construction():
    G = sf_free(SunflowerShape(3, 1, 4), 20)
    assert G.e == 96 == sf_free_bound(SunflowerShape(3, 1, 4), 20)
    assert max_sunflower_exact(G, 1).value <= 3


def test_sf43_construction():
    G = sf_free(SunflowerShape(4, 3, 3), 10, seed=5)
    assert max(codegree_table(G, 3).values()) <= 2
    assert max_sunflower_exact(G, 3).value <= 2


def test_sf32_single_copy_is_linear():
    G = sf_free(SunflowerShape(3, 2, 2), 9)
    assert max(codegree_table(G, 2).values()) == 1


@pytest.mark.parametrize("r, t", [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)])
@pytest.mark.parametrize("k", [2, 3])
def test_sf_free_certified(r, t, k):
    shape = SunflowerShape(r, t, k)
    for n in (2 * k, 10, 14):
        G = sf_free(shape, n, seed=n)
        assert G.e >= sf_free_bound(shape, n)
        assert not sunflower_certificate(G, shape)
        res = max_sunflower_exact(G, t, stop_at=k)
        assert res.exact and res.value < k


def test_sf_free_rejects_unsupported():
    with pytest.raises(ValueError):
        sf_free(SunflowerShape(4, 0, 2), 10)
    with pytest.raises(ValueError):
        sf_free(SunflowerShape(3, 1, 6), 10)


def test_sf_free_deterministic():
    shape = SunflowerShape(4, 3, 2)
    assert serialize(sf_free(shape, 12, seed=9)) == serialize(sf_free(shape, 12, seed=9))


def test_er_lower_two_three():
    G = er_lower(2, 3)
    assert G.e == 4
    assert sorted(G.degrees) == [2, 2, 2, 2]
    assert all(max_sunflower_exact(G, t, stop_at=3).value < 3 for t in range(2))


def test_er_lower_singletons():
    G = er_lower(1, 5)
    assert G.e == 4 and max(G.degrees) == 1


def test_er_lower_single_set():
    assert er_lower(3, 2).e == 1


@pytest.mark.parametrize("r, k", [(2, 2), (2, 4), (3, 3), (4, 3), (2, 10)])
def test_er_lower_sunflower_free(r, k):
    G = er_lower(r, k)
    assert G.e == (k - 1) ** r
    for t in range(r):
        assert max_sunflower_exact(G, t, stop_at=k).value < k


def test_forcing_full_star():
    G = forcing_family("full_star", 8)
    assert G.e == 35 and G.degree(0) == 35


def test_forcing_disjoint_cliques():
    G = forcing_family(ForcingFamily.disjoint_cliques, 12, {"t": 6, "r": 4})
    assert G.e == 30
    assert all(e[-1] // 6 == e[0] // 6 for e in G.edges)


def test_forcing_split_pairs():
    G = forcing_family("split_pairs", 10, {"v1": 4})
    assert G.e == 90
    assert all(sum(v < 4 for v in e) == 2 for e in G.edges)


@pytest.mark.parametrize(
    "family, n, params, count",
    [
        ("paired_set", 12, {"pairs": 2}, 2 * math.comb(8, 2)),
        ("biclique_blowup", 20, {"k": 4}, 4 * 2 * 2 * math.comb(4, 2)),
        ("triple_side", 9, {"v1": 4}, math.comb(4, 3) * 5),
        ("side_split", 9, {"v1": 2}, 2 * math.comb(7, 3)),
        ("linear_blowup", 40, {"k": 4}, None),
        ("steiner_34", 9, {"seed": 2}, None),
    ],
)
def test_forcing_families_round_trip(family, n, params, count):
    G = forcing_family(family, n, params)
    assert G.r == 4
    if count is not None:
        assert G.e == count
    assert parse(serialize(G)) == G


def test_forcing_unknown():
    with pytest.raises(ValueError):
        forcing_family("nope", 10)


def test_forcing_biclique_too_small():
    with pytest.raises(ValueError):
        forcing_family("biclique_blowup", 14, {"k": 4})


def test_sunflower_pattern():
    G = pattern(SunflowerShape(3, 1, 3))
    assert (G.n, G.e) == (7, 3)
    assert all(set(a) & set(b) == {0} for a, b in combinations(G.edges, 2))


def test_star_patterns():
    G = pattern(StarShape.of(2, 3))
    assert (G.n, G.e) == (9, 6)
    H = pattern(StarShape.of(2, 2, 2))
    assert H.e == 8
    L = link(H, [0]).strip_isolated()
    assert L.n == 2 * pattern(StarShape.of(2, 2)).n
    assert contains_exact(L, pattern(StarShape.of(2, 2))).status == "found"


def test_star_layers_sizes():
    assert [len(x) for x in star_layers(StarShape.of(2, 2, 3))] == [1, 2, 4, 12]


@pytest.mark.parametrize("sizes, edges", [([1, 1, 1, 1], 1), ([2, 2, 2, 3], 24), ([2, 2, 2], 8)])
def test_complete_multipartite(sizes, edges):
    G = complete_multipartite(len(sizes), sizes)
    assert G.e == edges


def test_k3_222_has_no_pair_in_two_parts_twice():
    G = complete_multipartite(3, [2, 2, 2])
    # each cross pair lies in exactly the two edges through the third part
    assert set(codegree_table(G, 2).values()) == {2}
    assert max_sunflower_exact(G, 2).value == 2


def test_random_hypergraph_deterministic():
    a, b = random_hypergraph(4, 12, 100, 5), random_hypergraph(4, 12, 100, 5)
    assert a == b and a.e == 100
    with pytest.raises(ValueError):
        random_hypergraph(3, 5, 11)


def test_planted_layout():
    G = planted([pattern(SunflowerShape(3, 1, 2))] * 2, core=4, extra=3)
    assert G.n == 5 + 5 + 4 + 3 and G.e == 2 + 2 + 4


def test_construction_error_is_runtime():
    assert issubclass(ConstructionError, RuntimeError)
