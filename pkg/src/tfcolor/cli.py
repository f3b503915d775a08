"""Command-line front end.

Exit codes: 0 success, 1 theorem-typed verification failure, 2 usage or
input error, 3 refusal by a resource guard.  Exact numbers print as decimal
integers or ``p/q``; floats print with 6 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__
from .budget import Budget, default_budget
from .chromatic import (
    chromatic_polynomial,
    coloring_ratio,
    count_colorings,
    format_polynomial,
)
from .coupon import (
    BoundParams,
    CouponInstance,
    amgm_lower_bound,
    enumerate_uncovered,
    exact_uncovered_expectation,
    final_bound,
    monte_carlo_uncovered,
    pairwise_covariances,
    reordering_lower_bound,
    uncovered_variance,
)
from .errors import GraphParseError, NoColoringError, ResourceGuardError, ZeroDenominatorError
from .graph import (
    Graph,
    gen_random_triangle_free,
    mycielski_tower,
    named_graph,
    parse_dimacs,
    write_dimacs,
)
from .params import default_ell, loglog_eps, palette_size
from .rng import DEFAULT_SEED, make_rng
from .sampling import UniformSampler, measure_neighborhood, run_glauber
from .verify import SuiteOptions, any_failures, run_suite, summarize, write_reports

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


def fmt_exact(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def fmt_float(x: float) -> str:
    return f"{x:.6g}"


def _add_graph_args(p):
    src = p.add_argument_group("graph input (one of)")
    src.add_argument("--dimacs", metavar="PATH", help="DIMACS .col file")
    src.add_argument("--json", dest="json_path", metavar="PATH", help='JSON graph {"n": .., "edges": [..]}')
    src.add_argument("--graph", metavar="NAME", help="named graph, e.g. petersen, c5, grotzsch")


def _load_graph(args) -> Graph:
    given = [x for x in (args.dimacs, args.json_path, args.graph) if x]
    if len(given) != 1:
        raise UsageError("give exactly one of --dimacs, --json, --graph")
    try:
        if args.dimacs:
            with open(args.dimacs, "rb") as fh:
                return parse_dimacs(fh.read())
        if args.json_path:
            with open(args.json_path) as fh:
                return Graph.from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        return named_graph(args.graph)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None


def _open_out(args):
    if getattr(args, "out", None):
        return open(args.out, "w", newline="")
    return sys.stdout


def _emit(args, text: str):
    fh = _open_out(args)
    try:
        fh.write(text if text.endswith("\n") else text + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_gen(args, budget):
    if args.family == "random":
        if args.n is None:
            raise UsageError("gen random needs --n")
        g = gen_random_triangle_free(args.n, args.p, args.seed)
        note = f"random triangle-free n={args.n} p={args.p} seed={args.seed}"
    elif args.family == "mycielski":
        g = mycielski_tower(args.depth)
        note = f"mycielski tower depth={args.depth} from K2"
    else:
        if not args.name:
            raise UsageError("gen named needs --name")
        try:
            g = named_graph(args.name)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
        note = f"named graph {args.name}"
    if args.format == "json":
        _emit(args, json.dumps(g.to_json()))
    else:
        _emit(args, write_dimacs(g, f"tfcolor {__version__}: {note}"))
    return EXIT_OK


def cmd_count(args, budget):
    g = _load_graph(args)
    _emit(args, str(count_colorings(g, args.k, budget)))
    return EXIT_OK


def cmd_poly(args, budget):
    g = _load_graph(args)
    coeffs = chromatic_polynomial(g, budget)
    if args.format == "json":
        _emit(args, json.dumps({"n": g.n, "coefficients": [str(c) for c in coeffs]}))
    else:
        _emit(args, format_polynomial(coeffs))
    return EXIT_OK


def cmd_sample(args, budget):
    g = _load_graph(args)
    if args.vertex is not None:
        stats = measure_neighborhood(g, args.vertex, args.k, samples=args.draws, seed=args.seed,
                                     exact=args.exact, sampler=args.sampler, glauber_steps=args.steps,
                                     budget=budget)
        _emit(args, json.dumps(stats.to_json(), sort_keys=True))
        return EXIT_OK
    rng = make_rng(args.seed)
    lines = []
    if args.sampler == "exact":
        smp = UniformSampler(g, args.k, budget)
        for _ in range(args.draws):
            col, prob = smp.draw(rng)
            lines.append(json.dumps({"colors": [col.get(v) for v in range(g.n)], "probability": fmt_exact(prob)}))
    else:
        steps = args.steps if args.steps is not None else 50 * max(g.n, 1)
        for _ in range(args.draws):
            col = run_glauber(g, args.k, steps, rng.getrandbits(64))
            lines.append(json.dumps({"colors": [col.get(v) for v in range(g.n)]}))
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_ratio(args, budget):
    g = _load_graph(args)
    vertices = [args.vertex] if args.vertex is not None else list(range(g.n))
    rows = []
    for v in vertices:
        try:
            r = coloring_ratio(g, v, args.k, budget)
            row = {"v": v, "ratio": fmt_exact(r), "approx": fmt_float(float(r))}
            if args.ell is not None:
                row["at_least_ell"] = r >= Fraction(args.ell)
        except ZeroDenominatorError:
            row = {"v": v, "ratio": None, "note": "denominator zero"}
        rows.append(row)
    if args.vertex is not None and rows[0]["ratio"] is not None and args.ell is None:
        _emit(args, rows[0]["ratio"])
    else:
        _emit(args, "\n".join(json.dumps(r, sort_keys=True) for r in rows))
    return EXIT_OK


def cmd_coupon(args, budget):
    if args.instance:
        with open(args.instance) as fh:
            data = json.load(fh)
    elif args.lists:
        data = json.loads(args.lists)
    else:
        raise UsageError("give --instance PATH or --lists JSON")
    try:
        inst = CouponInstance.from_json(data)
    except (KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"bad coupon instance: {exc}") from None
    B = frozenset(int(x) for x in args.B.split(",") if x) if args.B else frozenset()
    out = {
        "instance": inst.to_json(),
        "expectation": fmt_exact(exact_uncovered_expectation(inst)),
        "variance": fmt_exact(uncovered_variance(inst)),
        "max_covariance": fmt_exact(max(pairwise_covariances(inst).values(), default=Fraction(0))),
        "conditional_expectation": fmt_exact(exact_uncovered_expectation(inst, BoundParams(t=args.t, B=B))),
    }
    try:
        out["pmf"] = {str(s): fmt_exact(p) for s, p in enumerate_uncovered(inst, budget).items()}
    except ResourceGuardError as exc:
        out["pmf"] = None
        out["pmf_note"] = str(exc)
    if len(B) < inst.k:
        am = amgm_lower_bound(inst, BoundParams(t=args.t, B=B))
        out["amgm"] = {"value": fmt_float(am.value), "inner_product": fmt_exact(am.inner_product), "holds": am.holds}
    if args.t >= 1:
        delta = args.delta if args.delta is not None else inst.delta
        ro = reordering_lower_bound(inst, BoundParams(t=args.t, B=B), delta)
        out["reordering"] = {"lhs": fmt_exact(ro.lhs), "rhs": fmt_exact(ro.rhs), "holds": ro.holds,
                             "reorder_identity": ro.reorder_identity}
    if args.mc_samples:
        out["monte_carlo"] = monte_carlo_uncovered(inst, args.mc_samples, args.seed).to_json()
    _emit(args, json.dumps(out, sort_keys=True))
    return EXIT_OK


def _bound_row(delta, eps, t, b):
    val = final_bound(delta, eps, t, b)
    ell = default_ell(delta)
    return {"delta": delta, "eps": eps, "t": t, "b": b, "k": palette_size(delta, eps),
            "bound": val, "ell": ell, "ratio": val / ell}


def cmd_bound(args, budget):
    deltas = [int(float(x)) for x in args.sweep.split(",")] if args.sweep else [args.delta]
    if deltas == [None]:
        raise UsageError("bound needs --delta or --sweep")
    rows = []
    for d in deltas:
        eps = loglog_eps(d, args.eps_loglog) if args.eps_loglog is not None else args.eps
        t = args.t if args.t is not None else max(2, math.ceil(math.sqrt(math.log(d))))
        try:
            rows.append(_bound_row(d, eps, t, args.b))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.format == "csv":
        lines = ["delta,eps,t,b,k,bound,ell,ratio"]
        lines += [",".join([str(r["delta"]), fmt_float(r["eps"]), str(r["t"]), str(r["b"]), str(r["k"]),
                            fmt_float(r["bound"]), fmt_float(r["ell"]), fmt_float(r["ratio"])]) for r in rows]
        _emit(args, "\n".join(lines))
    elif args.format == "json":
        _emit(args, "\n".join(json.dumps({k: fmt_float(v) if isinstance(v, float) else v for k, v in r.items()})
                              for r in rows))
    else:
        lines = []
        for r in rows:
            lines.append(f"delta {r['delta']} k {r['k']} bound {fmt_float(r['bound'])} "
                         f"ell {fmt_float(r['ell'])} ratio {fmt_float(r['ratio'])}")
        _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args, budget):
    seeds = [int(s) for s in args.seeds.split(",") if s]
    options = SuiteOptions(max_c0_per_vertex=args.max_c0, ell=args.ell)
    try:
        reports = run_suite(args.corpus, args.k, seeds=seeds, options=options, budget=budget, seed=args.seed)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    fh = _open_out(args)
    try:
        write_reports(reports, fh, args.format)
    finally:
        if fh is not sys.stdout:
            fh.close()
    summary = summarize(reports)
    failed = any_failures(reports)
    print(json.dumps({"reports": len(reports), "summary": summary, "theorem_failures": failed}, sort_keys=True),
          file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tfcolor", description="Exact coloring counts and proof-step checks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--budget", help="override budgets, e.g. max_vertices=50,max_enumeration=1e7 "
                                    "(default from $TFCOLOR_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph as DIMACS or JSON")
    g.add_argument("family", choices=["random", "mycielski", "named"])
    g.add_argument("--n", type=int)
    g.add_argument("--p", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--depth", type=int, default=2)
    g.add_argument("--name")
    g.add_argument("--format", choices=["dimacs", "json"], default="dimacs")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("count", help="number of proper k-colorings")
    _add_graph_args(c)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_count)

    c = sub.add_parser("poly", help="chromatic polynomial")
    _add_graph_args(c)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_poly)

    c = sub.add_parser("sample", help="uniform colorings, or neighbourhood statistics with --vertex")
    _add_graph_args(c)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--draws", type=int, default=1)
    c.add_argument("--sampler", choices=["exact", "glauber"], default="exact")
    c.add_argument("--steps", type=int, help="Glauber steps per draw (default 50n)")
    c.add_argument("--vertex", type=int, help="measure available colors around this vertex")
    c.add_argument("--exact", action="store_true", help="with --vertex: exact distributions instead of draws")
    c.add_argument("--out")
    c.set_defaults(func=cmd_sample)

    c = sub.add_parser("ratio", help="exact |C(G)|/|C(G-v)|")
    _add_graph_args(c)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--vertex", type=int)
    c.add_argument("--ell", type=float)
    c.add_argument("--out")
    c.set_defaults(func=cmd_ratio)

    c = sub.add_parser("coupon", help="exact uncovered-color statistics for a list instance")
    c.add_argument("--instance", metavar="PATH", help='JSON {"k": int, "lists": [[...], ...]}')
    c.add_argument("--lists", metavar="JSON", help="the same JSON inline")
    c.add_argument("--t", type=int, default=1)
    c.add_argument("--B", default="", help="comma-separated conditioned colors")
    c.add_argument("--delta", type=int)
    c.add_argument("--mc-samples", type=int, default=0)
    c.add_argument("--seed", type=int, default=DEFAULT_SEED)
    c.add_argument("--out")
    c.set_defaults(func=cmd_coupon)

    c = sub.add_parser("bound", help="evaluate the final lower bound against l(Delta) = ln^2 Delta")
    c.add_argument("--delta", type=lambda s: int(float(s)))
    c.add_argument("--sweep", help="comma-separated list of Delta values")
    c.add_argument("--eps", type=float, default=1.0)
    c.add_argument("--eps-loglog", type=float, metavar="C", help="use eps = C ln ln Delta / ln Delta")
    c.add_argument("--t", type=int)
    c.add_argument("--b", type=int, default=0)
    c.add_argument("--format", choices=["text", "json", "csv"], default="text")
    c.add_argument("--out")
    c.set_defaults(func=cmd_bound)

    c = sub.add_parser("verify", help="run the proof-step checks over a corpus")
    c.add_argument("--corpus", required=True, help="e.g. 'all-n5;petersen;mycielski:3;random:n=8,p=0.4,count=5'")
    c.add_argument("--k", default="3", help="'3', '2,3', 'paper:EPS' or 'delta+1'")
    c.add_argument("--seeds", default="0", help="comma-separated seeds for coupon harvesting")
    c.add_argument("--seed", type=int, default=0, help="seed for random corpus members")
    c.add_argument("--max-c0", type=int, default=50, help="outer colorings checked per vertex")
    c.add_argument("--ell", type=float)
    c.add_argument("--format", choices=["json", "csv"], default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        budget = Budget.from_string(args.budget, default_budget()) if args.budget else default_budget()
        return args.func(args, budget)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"tfcolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphParseError, ValueError) as exc:
        print(f"tfcolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceGuardError as exc:
        print(f"tfcolor: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (NoColoringError, ZeroDenominatorError) as exc:
        print(f"tfcolor: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
