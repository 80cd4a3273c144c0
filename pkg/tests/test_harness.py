import csv
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hgturan.constructions import pattern
from hgturan.core import StarShape, SunflowerShape, build, parse
from hgturan.harness import (
    REGISTRY,
    ExperimentSpec,
    SpecError,
    certificate_problems,
    derive_parameters,
    load_certificate,
    parse_pattern_spec,
    pattern_from_spec,
    regime_of,
    run_experiment,
    steiner_packing_number,
    turan_table,
    very_dense_s,
    write_table,
)
from hgturan.oracles import SearchBudget


def spec(experiment, grid, **kw):
    return ExperimentSpec.from_dict({"experiment": experiment, "grid": grid, **kw})


# --- pattern specs ------------------------------------------------------------------


@pytest.mark.parametrize(
    "text, kind, value",
    [
        ("sf:3,1,2", "sf", SunflowerShape(3, 1, 2)),
        ("st:2,3", "st", StarShape.of(2, 3)),
        ("st:2,2,1", "st", StarShape.of(2, 2, 1)),
        ("k4p:1,1,1,2", "k4p", (1, 1, 1, 2)),
        ("matching:3", "matching", 3),
        ("star:4", "star", 4),
    ],
)
def test_parse_pattern_spec(text, kind, value):
    assert parse_pattern_spec(text) == (kind, value)


@pytest.mark.parametrize("text", ["sf:3,1", "st:1,2,3,4", "k4p:1,2,1,2", "blob:1", "sf:a,b,c", ""])
def test_bad_pattern_specs(text):
    with pytest.raises(SpecError):
        parse_pattern_spec(text)


def test_pattern_from_spec_uniformity():
    assert pattern_from_spec("matching:2", 3).e == 2
    assert pattern_from_spec("star:3", 2).n == 4
    assert pattern_from_spec("star:3", 3) == pattern(SunflowerShape(3, 2, 3))


# --- specs --------------------------------------------------------------------------


def test_empty_grid_is_an_empty_passing_report():
    report = run_experiment(spec("linearity", {}))
    assert report.ok and report.summary == {"points": 0, "pass": 0, "fail": 0, "budget": 0}
    assert report.body["records"] == []


def test_points_are_seed_major():
    pts = spec("kst", {"seed": [0, 1], "b": [3, 4], "a": [5]}).points()
    assert [(p["seed"], p["a"], p["b"]) for p in pts] == [(0, 5, 3), (0, 5, 4), (1, 5, 3), (1, 5, 4)]


@pytest.mark.parametrize(
    "data",
    [
        {"experiment": "nope", "grid": {}},
        {"grid": {}},
        {"experiment": "linearity", "grid": {}, "extra": 1},
        {"experiment": "linearity", "grid": {"k": [2], "n": [10], "zzz": [1]}},
        {"experiment": "linearity", "grid": {"k": 2, "n": [10]}},
        {"experiment": "linearity", "grid": {"k": [2]}, "constants": {"not_a_constant": 3}},
    ],
)
def test_invalid_specs_are_rejected(data):
    with pytest.raises(SpecError):
        run_experiment(ExperimentSpec.from_dict(data))


def test_invalid_point_rejects_whole_run(tmp_path):
    out = tmp_path / "r.json"
    s = spec("linearity", {"k": [2, 9], "n": [5]}, outputs={"report": str(out)})
    with pytest.raises(SpecError, match="point 1"):
        run_experiment(s)
    assert not out.exists()


def test_every_experiment_has_a_claim():
    for exp in REGISTRY.values():
        assert exp.claim and exp.grid_keys


# --- reports -------------------------------------------------------------------------


def test_report_digest_stable_across_runs_and_workers():
    s = spec("oracle-sandwich", {"pattern": ["sf:3,2,2", "st:2,2"], "seed": list(range(6))})
    a = run_experiment(s)
    b = run_experiment(s)
    c = run_experiment(s, workers=4)
    assert a.digest == b.digest == c.digest
    assert a.body == c.body
    assert a.timing["workers"] == 1 and c.timing["workers"] == 4


def test_constant_overrides_change_the_snapshot():
    a = run_experiment(spec("linearity", {"k": [3], "n": [12]}))
    b = run_experiment(spec("linearity", {"k": [3], "n": [12]}, constants={"sf42_density": 2.0}))
    assert a.body["constants"] != b.body["constants"]
    assert a.digest != b.digest


def test_certificates_written_and_revalidate(tmp_path):
    certs = tmp_path / "certs"
    s = spec("construction-freeness", {"shape": ["3,1", "4,3"], "k": [2], "n": [8], "seed": [0]},
             outputs={"certificates": str(certs), "report": str(tmp_path / "r.json"), "csv": str(tmp_path / "r.csv")})
    report = run_experiment(s)
    assert report.ok
    paths = [ref["path"] for rec in report.body["records"] for ref in rec["certificates"]]
    assert len(paths) == 2
    for path in paths:
        assert certificate_problems(load_certificate(path)) == []
    saved = json.loads((tmp_path / "r.json").read_text())
    assert saved["digest"] == report.digest
    rows = list(csv.DictReader((tmp_path / "r.csv").open()))
    assert [r["status"] for r in rows] == ["pass", "pass"]


def test_tampered_certificate_is_caught(tmp_path):
    certs = tmp_path / "certs"
    report = run_experiment(spec("finder-guarantee", {"k": [2], "n": [30], "seed": [0]},
                                 outputs={"certificates": str(certs)}))
    path = report.body["records"][0]["certificates"][0]["path"]
    cert = load_certificate(path)
    assert certificate_problems(cert) == []
    host = parse(cert["host"])
    cert["copies"][0]["vertex_map"][-1] = next(v for v in range(host.n) if v not in cert["copies"][0]["vertex_map"])
    assert certificate_problems(cert)


def test_unknown_certificate_kind():
    assert certificate_problems({"kind": "mystery"})


def test_failures_are_reported_not_raised():
    # the erdos-rado check with a wrong expectation fails its point but the run completes
    report = run_experiment(spec("erdos-rado", {"r": [1], "k": [3], "expect": [4]}))
    assert not report.ok and report.summary["fail"] == 1


def test_report_io_error_names_the_path(tmp_path):
    bad = tmp_path / "missing" / "r.json"
    with pytest.raises(OSError, match="missing"):
        run_experiment(spec("linearity", {"k": [2], "n": [6]}, outputs={"report": str(bad)}))


# --- Turán tables --------------------------------------------------------------------


def test_sf3_2_2_column_matches_packing():
    cells = turan_table(3, 7, {"sf3_2_2": pattern(SunflowerShape(3, 2, 2))})
    assert [c.n for c in cells] == [4, 5, 6, 7]
    assert [c.lower for c in cells] == [1, 2, 4, 7]
    assert all(c.exact and c.cross_check == c.lower for c in cells)


def test_steiner_packing_number_independent():
    # the Fano plane is the unique maximum packing of pairs on 7 points
    assert steiner_packing_number(2, 3, 7) == 7
    assert steiner_packing_number(2, 3, 6) == 4


def test_single_edge_column_is_zero():
    cells = turan_table(3, 6, {"edge": build(3, 3, [(0, 1, 2)])})
    assert [c.lower for c in cells] == [0] * 4 and all(c.exact for c in cells)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_star_column_matches_degree_cap(k):
    cells = turan_table(2, 7, {"star": pattern_from_spec(f"star:{k}", 2)})
    assert cells and all(c.exact for c in cells)
    assert [c.lower for c in cells] == [c.n * (k - 1) // 2 for c in cells]


def test_budget_cells_are_flagged(tmp_path):
    cells = turan_table(3, 7, {"sf": pattern_from_spec("sf:3,2,2", 3)}, SearchBudget(node_limit=1))
    assert any(not c.exact for c in cells)
    write_table(cells, tmp_path / "t.json", tmp_path / "t.csv")
    rows = json.loads((tmp_path / "t.json").read_text())
    assert all(r["interval"] == (r["lower"] != r["upper"]) for r in rows)


def test_table_witnesses_archived(tmp_path):
    cells = turan_table(2, 5, {"tri": build(2, 3, [(0, 1), (1, 2), (0, 2)])}, witness_dir=tmp_path)
    for c in cells:
        w = parse((tmp_path / f"ex-tri-n{c.n}.hg").read_text())
        assert w.e == c.lower


def test_table_rejects_mixed_uniformity():
    with pytest.raises(ValueError):
        turan_table(3, 5, {"tri": build(2, 3, [(0, 1), (1, 2), (0, 2)])})


# --- regimes -------------------------------------------------------------------------


@pytest.mark.parametrize("k", [2, 4, 9, 16, 25])
@pytest.mark.parametrize("c", [1.0, 0.5])
def test_middle_regime_inverts_k(k, c):
    n = 4000
    e = round(n * n * k * k / (c * c))
    out = derive_parameters("middle", n, e, c)
    assert out["k"] == k
    assert out["pattern"] == f"St4({math.isqrt(k)},{k},1)"
    assert out["k_three_halves"] == math.isqrt(k**3)


@pytest.mark.parametrize("n, k", [(100, 2), (100, 3), (300, 2), (1000, 7)])
def test_dense_regime_formula(n, k):
    e = k * n**3
    out = derive_parameters("dense", n, e)
    d = out["d"]
    assert d**3 <= n // k < (d + 1) ** 3
    t = out["t"]
    assert t == min(k, math.isqrt(math.isqrt(d)))


def test_very_dense_s_formula_at_two_to_the_ten():
    n = 2**10
    for e in (n**3 * 7, n**3 * 50, math.comb(n, 4) - 1):
        expected = (1 / 12) * (math.log2(n) / math.log2(n**4 / e)) ** (1 / 3)
        assert abs(very_dense_s(n, e) - expected) < 1e-9


def test_very_dense_parameters_at_threshold_scale():
    n = 25**216
    e = math.comb(n, 4) - 1
    out = derive_parameters("very-dense", n, e)
    assert out["t"] ** 4 <= n < (out["t"] + 1) ** 4
    assert out["s"] == math.floor(out["s_real"]) and 0 < out["s_real"] < 1


@given(st.integers(8, 400), st.floats(0.01, 0.99))
def test_regime_ratios_base_invariant(n, frac):
    total = math.comb(n, 4)
    e = max(1, int(frac * total))
    if e >= total:
        return
    r_nat = math.log(n) / math.log(total / e)
    r_two = math.log2(n) / math.log2(total / e)
    r_ten = math.log10(n) / math.log10(total / e)
    assert r_nat == pytest.approx(r_two, rel=1e-9) == pytest.approx(r_ten, rel=1e-9)


def test_boundaries_go_to_the_lower_regime():
    n = 100
    assert regime_of(n, n**2) == "sparse"
    assert regime_of(n, n**2 + 1) == "middle"
    assert regime_of(n, n**3) == "middle"
    assert regime_of(n, n**3 + 1) == "dense"


def test_very_dense_unreachable_at_desk_scale():
    n = 2**10
    assert regime_of(n, math.comb(n, 4) - 1) == "dense"


@pytest.mark.parametrize(
    "regime, n, e",
    [("middle", 100, 50), ("dense", 100, 20000), ("very-dense", 1024, 10**10), ("sparse", 10, 0),
     ("sparse", 10, 210), ("bogus", 100, 50)],
)
def test_out_of_regime_rejected(regime, n, e):
    with pytest.raises(ValueError):
        derive_parameters(regime, n, e)
