"""Acceptance criteria 1-10, each driven through the experiment harness."""

import math
import time
from contextlib import contextmanager

import pytest

from conftest import CRITERIA
from hgturan.constructions import er_lower, sf_free_bound
from hgturan.core import SunflowerShape
from hgturan.harness import (
    GOLDEN,
    SANDWICH_PATTERNS,
    ExperimentSpec,
    canonical_json,
    certificate_problems,
    load_certificate,
    run_experiment,
)
from hgturan.oracles import f_exact, max_sunflower_exact

pytestmark = pytest.mark.acceptance


@contextmanager
def criterion(number, title, limit=None):
    """Record one PASS/FAIL line for the criterion, then let the assertion surface."""
    start = time.perf_counter()
    notes = {}
    try:
        yield notes
    except BaseException as exc:
        CRITERIA[number] = f"criterion {number}: FAIL  {title}  ({type(exc).__name__}: {str(exc).splitlines()[0][:120]})"
        raise
    wall = time.perf_counter() - start
    extra = "  ".join(f"{k}={v}" for k, v in notes.items())
    if limit is not None and wall > limit:
        CRITERIA[number] = f"criterion {number}: FAIL  {title}  ({wall:.1f}s over the {limit}s limit) {extra}"
        pytest.fail(f"criterion {number} took {wall:.1f}s, limit {limit}s")
    CRITERIA[number] = f"criterion {number}: PASS  {title}  ({wall:.1f}s) {extra}"


def run(experiment, grid, workers=1, **kw):
    return run_experiment(ExperimentSpec.from_dict({"experiment": experiment, "grid": grid, **kw}), workers)


def all_certificates_hold(report):
    for rec in report.body["records"]:
        for ref in rec.get("certificates", []):
            assert certificate_problems(load_certificate(ref["path"])) == [], ref


def test_criterion_1_construction_freeness(tmp_path):
    with criterion(1, "sunflower-free constructions certified and meet their bound", limit=300) as notes:
        points = 0
        for k in (2, 3):
            rep = run("construction-freeness",
                      {"shape": ["3,1", "3,2", "4,1", "4,2", "4,3"], "k": [k], "n": list(range(2 * k, 15)), "seed": [0]},
                      outputs={"certificates": str(tmp_path / f"k{k}")})
            assert rep.summary["pass"] == rep.summary["points"], rep.summary
            for rec in rep.body["records"]:
                r, t = (int(x) for x in rec["inputs"]["shape"].split(","))
                bound = sf_free_bound(SunflowerShape(r, t, k), rec["inputs"]["n"])
                # the split constructions hit their count exactly; the rest clear a lower bound
                if t == 1:
                    assert rec["stats"]["edges"] == bound
                else:
                    assert rec["stats"]["edges"] >= bound
            all_certificates_hold(rep)
            points += rep.summary["points"]
        notes["points"] = points


def test_criterion_2_linearity():
    with criterion(2, "linear partial lines are linear with >= n^2/4k^2 edges") as notes:
        grid = []
        for k in range(2, 6):
            rep = run("linearity", {"k": [k], "n": [n for n in range(k, 61) if 2 * k * k <= n]})
            assert rep.ok and rep.summary["pass"] == rep.summary["points"], rep.summary
            grid.append(rep.summary["points"])
        notes["points"] = sum(grid)


def test_criterion_3_erdos_rado():
    with criterion(3, "f_2(3) in [5, 9], er_lower certified, f_1(k) = k", limit=120) as notes:
        f23 = f_exact(2, 3)
        assert f23.exact and 5 <= f23.lower <= 9
        L = er_lower(2, 3)
        assert L.e == 4
        assert all(max_sunflower_exact(L, t).value < 3 for t in range(2))
        rep = run("erdos-rado", {"r": [1], "k": list(range(2, 7)), "expect": [None]})
        assert rep.ok and rep.summary["pass"] == 5
        for rec in rep.body["records"]:
            assert rec["stats"]["lower"] == rec["stats"]["upper"] == rec["inputs"]["k"]
        assert f_exact(1, 1).lower == 1
        notes["f_2(3)"] = f23.lower


def test_criterion_4_finder_guarantee(tmp_path):
    with criterion(4, "Sf_3(1,k) found on 100/100 seeded hosts with 4k^2 n edges", limit=180) as notes:
        rep = run("finder-guarantee", {"k": [2, 3], "n": [30, 60], "seed": list(range(100))},
                  outputs={"certificates": str(tmp_path)})
        assert rep.summary["pass"] == rep.summary["points"] == 400, rep.summary
        for rec in rep.body["records"]:
            assert rec["stats"]["edges"] == 4 * rec["inputs"]["k"] ** 2 * rec["inputs"]["n"]
        all_certificates_hold(rep)
        notes["found"] = f"{rep.summary['pass']}/400"


def test_criterion_5_oracle_sandwich():
    with criterion(5, "finders never contradict the containment oracle") as notes:
        rep = run("oracle-sandwich", {"pattern": list(SANDWICH_PATTERNS), "seed": list(range(500))})
        violations = [rec for rec in rep.body["records"] if rec.get("violations")]
        assert not violations, violations[:3]
        assert rep.summary["budget"] == 0 and rep.ok
        notes["checks"] = rep.summary["points"]


def test_criterion_6_cross_oracle():
    with criterion(6, "conflict and DFS Turán solvers agree on the golden set", limit=600) as notes:
        values = {}
        for name, n in GOLDEN:
            rep = run("cross-oracle", {"pattern": [name], "n": [n]})
            rec = rep.body["records"][0]
            assert rec["status"] == "pass", (name, n, rec)
            values[(name, n)] = rec["stats"]["conflict"][0]
        notes["instances"] = len(values)


def test_criterion_7_unavoidability():
    with criterion(7, "two-edge 4-graphs avoidable, single edge unavoidable", limit=900) as notes:
        rep = run("unavoidability", {"n": [8, 9], "seed": [0]})
        for rec in rep.body["records"]:
            assert rec["status"] == "pass", rec
            assert all(rec["stats"]["avoided_by"].values())
            assert rec["stats"]["single_edge"] == "yes"
            assert rec["stats"]["e"] <= math.comb(rec["inputs"]["n"], 2)
        notes["e"] = [rec["stats"]["e"] for rec in rep.body["records"]]


def test_criterion_8_kst(tmp_path):
    with criterion(8, "K_{s,t} found whenever the counting hypothesis holds", limit=120) as notes:
        shapes = [(6, 8, 2, 2), (5, 10, 2, 3), (8, 6, 3, 2), (4, 12, 1, 4)]
        total = 0
        for a, b, s, t in shapes:
            rep = run("kst", {"a": [a], "b": [b], "s": [s], "t": [t], "seed": list(range(50))},
                      outputs={"certificates": str(tmp_path)})
            assert rep.summary["pass"] == rep.summary["points"] == 50, rep.summary
            assert all(rec["stats"]["hypothesis"] and rec["stats"]["blocks_inside"] for rec in rep.body["records"])
            all_certificates_hold(rep)
            total += rep.summary["pass"]
        notes["found"] = f"{total}/200"


def test_criterion_9_level_sets():
    with criterion(9, "disjoint well-behaved St_4(d,d,k) copies on planted hosts") as notes:
        rep = run("level-set", {"n": [16, 54], "k": [2], "t": [1, 2]})
        for rec in rep.body["records"]:
            assert rec["status"] == "pass", rec
            assert rec["stats"]["problems"] == []
        notes["points"] = rep.summary["points"]


DETERMINISM_SPECS = [
    ("construction-freeness", {"shape": ["3,1", "4,2"], "k": [2], "n": [8, 10], "seed": [0, 1]}),
    ("finder-guarantee", {"k": [2], "n": [30], "seed": list(range(6))}),
    ("oracle-sandwich", {"pattern": list(SANDWICH_PATTERNS), "seed": list(range(8))}),
    ("kst", {"a": [6], "b": [8], "s": [2], "t": [2], "seed": list(range(6))}),
    ("level-set", {"n": [16], "k": [2], "t": [1, 2]}),
    ("cross-oracle", {"pattern": ["sf3_2_2", "triangle"], "n": [5, 6]}),
]


def test_criterion_10_determinism():
    with criterion(10, "identical specs give byte-identical report bodies", limit=600) as notes:
        for experiment, grid in DETERMINISM_SPECS:
            bodies = {canonical_json(run(experiment, grid, workers=w).body) for w in (1, 1, 4, 4)}
            assert len(bodies) == 1, experiment
        notes["specs"] = len(DETERMINISM_SPECS)
