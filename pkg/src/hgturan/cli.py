"""hgturan command line: generate hosts, run finders and oracles, run experiments."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import cache_dir
from .constructions import (
    ForcingFamily,
    complete_core,
    er_lower,
    forcing_family,
    linear_partial_lines,
    partial_steiner,
    random_hypergraph,
    sf_free,
)
from .core import SunflowerShape, read_hg, serialize, write_hg
from .harness import (
    ExperimentSpec,
    SpecError,
    derive_parameters,
    pattern_from_spec,
    run_experiment,
    run_finder,
    turan_table,
    write_table,
)
from .oracles import OracleCache, SearchBudget, contains_exact, ex_by_dfs, ex_exact, f_exact, is_unavoidable, max_sunflower_exact

GENERATORS = ("sf_free", "steiner", "lines", "er_lower", "random", "complete", "pattern")


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _key_values(items) -> dict:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise SpecError(f"expected key=value, got {item!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise SpecError(f"{args.name} needs " + ", ".join(f"--{m}" for m in missing))


def _load_pattern(value: str, r: int | None):
    """A pattern from a .hg path, or from a pattern spec when no such file exists."""
    path = Path(value)
    if path.exists():
        return read_hg(path)
    return pattern_from_spec(value, r or 2)


def _budget(args) -> SearchBudget:
    return SearchBudget(args.budget_nodes, args.budget_seconds)


def _cache(args):
    directory = args.cache_dir or cache_dir()
    return OracleCache(directory) if directory else None


# --- subcommands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    extra = _key_values(args.param)
    name = args.name
    if name == "sf_free":
        _need(args, "r", "t", "k", "n")
        G = sf_free(SunflowerShape(args.r, args.t, args.k), args.n, args.seed)
    elif name == "steiner":
        _need(args, "t", "k", "n")
        G = partial_steiner(args.t, args.k, args.n, args.seed)
    elif name == "lines":
        _need(args, "k", "n")
        G = linear_partial_lines(args.k, args.n)
    elif name == "er_lower":
        _need(args, "r", "k")
        G = er_lower(args.r, args.k)
    elif name == "random":
        _need(args, "r", "n", "e")
        G = random_hypergraph(args.r, args.n, args.e, args.seed)
    elif name == "complete":
        _need(args, "r", "n")
        G = complete_core(args.r, args.n)
    elif name == "pattern":
        if not args.spec:
            raise SpecError("pattern needs --spec")
        G = pattern_from_spec(args.spec, args.r or 2)
    else:
        _need(args, "n")
        params = {k: getattr(args, k) for k in ("k", "t", "r") if getattr(args, k) is not None}
        params.update(extra)
        if args.seed:
            params["seed"] = args.seed
        G = forcing_family(name, args.n, params)
    if args.output:
        write_hg(G, args.output)
    else:
        sys.stdout.write(serialize(G))
    print(f"r={G.r} n={G.n} e={G.e}", file=sys.stderr)
    return 0


def cmd_find(args) -> int:
    host = read_hg(args.input)
    rep = run_finder(args.pattern, host, _key_values(args.param))
    if args.json:
        _emit(rep.to_dict(), args.json)
    line = f"{rep.finder}: {rep.outcome}"
    line += f", {len(rep.embeddings)} cop{'y' if len(rep.embeddings) == 1 else 'ies'}" if rep.found else f" at {rep.failed_phase}"
    print(line)
    for emb in rep.embeddings:
        print("  " + " ".join(map(str, emb.vertex_map)))
    return 0 if rep.found else 1


def cmd_oracle(args) -> int:
    budget = _budget(args)
    if args.query == "ex":
        P = _load_pattern(args.pattern, args.r)
        if args.method == "dfs":
            res = ex_by_dfs(args.n, P, budget)
        else:
            res = ex_exact(args.n, P, budget, _cache(args))
        out = res.to_dict()
        out.pop("witness")
        out["witness"] = _witness(res.witness, args.witness)
        out["value"] = res.lower if res.exact else None
        out["interval"] = [res.lower, res.upper]
        _emit(out)
        return 0
    if args.query == "contains":
        host, P = read_hg(args.host), _load_pattern(args.pattern, None)
        res = contains_exact(host, P, budget)
        out = {"status": res.status, "nodes": res.nodes,
               "vertex_map": list(res.embedding.vertex_map) if res.embedding else None}
        _emit(out)
        return 0
    if args.query == "sunflower":
        host = read_hg(args.host)
        res = max_sunflower_exact(host, args.t, budget)
        _emit({"value": res.value, "exact": res.exact, "kernel": res.kernel,
               "petals": [list(e) for e in res.witness], "nodes": res.nodes})
        return 0
    if args.query == "unavoidable":
        P = _load_pattern(args.pattern, args.r)
        res = is_unavoidable(P, args.n, args.e, budget, _cache(args))
        out = {"answer": res.answer, "witness": _witness(res.witness, args.witness)}
        if res.turan is not None:
            out["ex_interval"] = [res.turan.lower, res.turan.upper]
        _emit(out)
        return 0
    res = f_exact(args.r, args.k, budget)
    _emit({"value": res.lower if res.exact else None, "interval": [res.lower, res.upper],
           "nodes": res.nodes, "witness": _witness(res.witness, args.witness)})
    return 0


def _witness(G, path):
    if G is None:
        return None
    if path:
        write_hg(G, path)
        return str(path)
    return serialize(G)


def cmd_run(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    if args.out:
        spec.outputs["report"] = args.out
    if args.csv:
        spec.outputs["csv"] = args.csv
    report = run_experiment(spec, workers=args.workers)
    s = report.summary
    print(f"{spec.experiment}: {s['pass']} pass, {s['fail']} fail, {s['budget']} budget "
          f"of {s['points']} points; digest {report.digest[:16]}")
    if not spec.outputs.get("report"):
        sys.stdout.write(report.to_json())
    return 0 if report.ok else 1


def cmd_table(args) -> int:
    patterns = {}
    for item in args.pattern:
        name, sep, value = item.partition("=")
        if not sep:
            name, value = item, item
        patterns[name] = _load_pattern(value, args.r)
    cells = turan_table(args.r, args.n_max, patterns, _budget(args), _cache(args), args.witness_dir)
    write_table(cells, args.json, args.csv)
    for c in cells:
        val = str(c.lower) if c.exact else f"[{c.lower}, {c.upper}]"
        check = "" if c.cross_check is None else f"  packing={c.cross_check}"
        print(f"{c.pattern:>16} n={c.n:<3} ex={val}{check}")
    return 0


def cmd_params(args) -> int:
    _emit(derive_parameters(args.regime, args.n, args.e, args.c))
    return 0


# --- parser ----------------------------------------------------------------------


def _budget_args(p) -> None:
    p.add_argument("--budget-nodes", type=int, default=None, help="search node limit")
    p.add_argument("--budget-seconds", type=float, default=None, help="wall-clock limit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgturan", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated hypergraph in .hg format")
    g.add_argument("name", help=f"one of {', '.join(GENERATORS)} or a forcing family "
                                f"({', '.join(f.value for f in ForcingFamily)})")
    for flag in ("r", "n", "k", "t", "e"):
        g.add_argument(f"--{flag}", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--spec", help="pattern spec for the 'pattern' generator")
    g.add_argument("--param", action="append", metavar="KEY=VALUE", help="extra forcing-family parameter")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    f = sub.add_parser("find", help="run the finder for a pattern spec on a host")
    f.add_argument("pattern", help="sf:r,t,k | st:d1,d2[,d3] | k4p:s,s,s,t | matching:k | star:k")
    f.add_argument("-i", "--input", required=True, help="host .hg file")
    f.add_argument("--param", "--params", action="append", metavar="KEY=VALUE")
    f.add_argument("--json", help="write the full report here")
    f.set_defaults(func=cmd_find)

    o = sub.add_parser("oracle", help="exact answers for small instances")
    osub = o.add_subparsers(dest="query", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _budget_args(common)
    common.add_argument("--cache-dir", help="result cache (defaults to $HGTURAN_CACHE_DIR or the config file)")
    common.add_argument("--witness", help="write the witness .hg here instead of inlining it")
    q = osub.add_parser("ex", parents=[common], help="Turán number ex(n, pattern)")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--pattern", required=True, help=".hg file or pattern spec")
    q.add_argument("--r", type=int, help="uniformity for matching/star specs")
    q.add_argument("--method", choices=("conflict", "dfs"), default="conflict")
    q = osub.add_parser("contains", parents=[common], help="is the pattern a subgraph of the host")
    q.add_argument("--host", required=True)
    q.add_argument("--pattern", required=True)
    q = osub.add_parser("sunflower", parents=[common], help="largest sunflower with kernel size t")
    q.add_argument("--host", required=True)
    q.add_argument("--t", type=int, required=True)
    q = osub.add_parser("unavoidable", parents=[common], help="is the pattern (n, e)-unavoidable")
    q.add_argument("--pattern", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--e", type=int, required=True)
    q.add_argument("--r", type=int)
    q = osub.add_parser("f", parents=[common], help="Erdős–Rado function f_r(k)")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--k", type=int, required=True)
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("run", help="run an experiment spec")
    r.add_argument("--spec", required=True)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--out", help="report JSON path")
    r.add_argument("--csv", help="optional CSV summary path")
    r.set_defaults(func=cmd_run)

    t = sub.add_parser("table", help="table of ex(n, H) for small n")
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--n-max", type=int, required=True)
    t.add_argument("--pattern", action="append", required=True, metavar="[NAME=]SPEC_OR_FILE")
    t.add_argument("--json")
    t.add_argument("--csv")
    t.add_argument("--witness-dir")
    t.add_argument("--cache-dir")
    _budget_args(t)
    t.set_defaults(func=cmd_table)

    p = sub.add_parser("params", help="parameters for a density regime")
    p.add_argument("--regime", choices=("sparse", "middle", "dense", "very-dense"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--c", type=float, default=1.0, help="middle-regime constant in k = c sqrt(e)/n")
    p.set_defaults(func=cmd_params)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"hgturan: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
