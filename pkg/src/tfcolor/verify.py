"""Machine checks of the counting argument over graph corpora.

Theorem-typed checks must pass on every instance and a failure means a
defect.  Observation-typed checks (the ratio threshold at small degree,
factorisation on graphs with triangles) are recorded, never asserted.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .budget import Budget, default_budget
from .chromatic import (
    ExtensionCounter,
    PartialColoring,
    available_colors,
    count_colorings,
    iter_proper_colorings,
)
from .coupon import (
    BoundParams,
    CouponInstance,
    amgm_lower_bound,
    enumerate_uncovered,
    exact_uncovered_expectation,
    pairwise_covariances,
    pmf_moments,
    reordering_lower_bound,
    uncovered_variance,
)
from .errors import ResourceGuardError
from .graph import (
    Graph,
    all_graphs,
    delete_vertex,
    gen_random_graph,
    gen_random_triangle_free,
    induced_subgraph,
    is_triangle_free,
    mycielski_tower,
    named_graph,
)
from .params import default_ell, palette_size
from .rng import derive_seed, make_rng
from .sampling import UniformSampler, available_size_counts

THEOREM = "theorem"
OBSERVATION = "observation"

PASS, FAIL, INAPPLICABLE = "pass", "fail", "inapplicable"
HOLDS, FAILS_AT_SCALE = "holds", "fails-at-this-scale"
HYPOTHESIS_VIOLATED = "hypothesis-violated"


def witness(x) -> str | None:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


@dataclass
class VerificationReport:
    check: str
    instance: str
    params: dict
    status: str
    kind: str = THEOREM
    lhs: object = None
    rhs: object = None
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.kind == THEOREM and self.status == FAIL

    def sort_key(self):
        return (self.check, self.instance, json.dumps(self.params, sort_keys=True, default=str))

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "instance": self.instance,
            "kind": self.kind,
            "status": self.status,
            "params": {k: witness(v) if isinstance(v, (Fraction, float)) else v for k, v in self.params.items()},
            "lhs": witness(self.lhs),
            "rhs": witness(self.rhs),
            "note": self.note,
            "extra": {k: v if isinstance(v, (list, dict)) else witness(v) for k, v in self.extra.items()},
        }


def _ident(g: Graph, label: str | None = None) -> str:
    return f"{label}#{g.fingerprint()}" if label else g.fingerprint()


# identity, tail bound, factorisation, claim ratio

def verify_identity(g: Graph, v: int, k: int, label: str | None = None,
                    budget: Budget | None = None) -> VerificationReport:
    """Average of |L_c(v)| over c in C(G - v) against |C(G)| / |C(G - v)|."""
    params = {"k": k, "v": v}
    gv, mp = delete_vertex(g, v)
    den = count_colorings(gv, k, budget)
    if den == 0:
        return VerificationReport("identity", _ident(g, label), params, INAPPLICABLE, note="|C(G-v)| = 0")
    dist = available_size_counts(gv, [mp[u] for u in g.neighbors(v)], k, budget=budget)
    total = sum(dist.values())
    lhs = Fraction(sum(s * c for s, c in dist.items()), total)
    num = count_colorings(g, k, budget)
    rhs = Fraction(num, den)
    status = PASS if lhs == rhs and total == den else FAIL
    return VerificationReport("identity", _ident(g, label), params, status, lhs=lhs, rhs=rhs,
                              extra={"count_G": num, "count_G_minus_v": den})


def verify_tail_bounds(g: Graph, v: int, u: int, k: int, ts: Iterable[int], label: str | None = None,
                       budget: Budget | None = None) -> list[VerificationReport]:
    """Tail-bound reports for several thresholds sharing one distribution."""
    ts = list(ts)
    if u not in g.neighbors(v):
        raise ValueError(f"{u} is not a neighbour of {v}")
    gv, mp = delete_vertex(g, v)
    den = count_colorings(gv, k, budget)
    inst = _ident(g, label)
    if den == 0:
        return [VerificationReport("tail-bound", inst, {"k": k, "v": v, "u": u, "t": t}, INAPPLICABLE,
                                   note="|C(G-v)| = 0") for t in ts]
    gvu, _ = delete_vertex(gv, mp[u])
    small = count_colorings(gvu, k, budget)
    dist = available_size_counts(gv, sorted(gv.adjacency[mp[u]]), k, budget=budget)
    total = sum(dist.values())
    out = []
    for t in ts:
        lhs = Fraction(sum(c for s, c in dist.items() if s <= t), total)
        rhs = Fraction(t * small, den)
        relative = Fraction(t) / Fraction(den, small)
        status = PASS if lhs <= rhs and total == den else FAIL
        out.append(VerificationReport(
            "tail-bound", inst, {"k": k, "v": v, "u": u, "t": t}, status, lhs=lhs, rhs=rhs,
            extra={"equality": lhs == rhs, "claim_relative": relative, "count_G_minus_v_minus_u": small},
        ))
    return out


def verify_tail_bound(g: Graph, v: int, u: int, k: int, t: int, label: str | None = None,
                      budget: Budget | None = None) -> VerificationReport:
    return verify_tail_bounds(g, v, u, k, [t], label, budget)[0]


def outer_vertices(g: Graph, v: int) -> list[int]:
    """Vertices of G0 = G - v - N(v)."""
    skip = g.neighbors(v) | {v}
    return [x for x in range(g.n) if x not in skip]


def iter_outer_colorings(g: Graph, v: int, k: int):
    """Proper colorings of G0, as PartialColorings in the labels of ``g``."""
    outer = outer_vertices(g, v)
    g0, mp = induced_subgraph(g, outer)
    for col in iter_proper_colorings(g0, k):
        yield PartialColoring.of(k, {x: col[mp[x]] for x in outer})


def verify_factorization(g: Graph, v: int, k: int, c0: PartialColoring, label: str | None = None,
                         counter: ExtensionCounter | None = None,
                         budget: Budget | None = None) -> VerificationReport:
    """Completions of c0 to G - v against the product of |L_c0(u)| over u in N(v)."""
    budget = budget or default_budget()
    outer = outer_vertices(g, v)
    if sorted(c0.vertices()) != outer:
        raise ValueError("c0 must color exactly the vertices of G - v - N(v)")
    if not c0.is_proper(g):
        raise ValueError("c0 is not a proper coloring")
    triangle_free = is_triangle_free(g)
    gv, mp = delete_vertex(g, v)
    partial = c0.relabel(mp)
    nbrs = [mp[u] for u in sorted(g.neighbors(v))]
    counter = counter or ExtensionCounter(gv, k, budget)
    count = counter.count(partial)
    lists = [sorted(available_colors(gv, partial, u)) for u in nbrs]
    product = math.prod(len(L) for L in lists)
    params = {"k": k, "v": v, "c0": {str(x): c for x, c in c0.items}}
    combos_ok = None
    if max(product, count) <= budget.max_enumeration:
        seen = [tuple(col[u] for u in nbrs) for col in iter_proper_colorings(gv, k, partial)]
        combos_ok = len(seen) == len(set(seen)) and set(seen) == set(itertools.product(*lists))
    holds = count == product and combos_ok is not False
    extra = {"lists": lists, "every_combination_once": combos_ok, "formula_holds": holds}
    if not triangle_free:
        return VerificationReport("factorization", _ident(g, label), params, HYPOTHESIS_VIOLATED, OBSERVATION,
                                  lhs=count, rhs=product, note="graph contains a triangle", extra=extra)
    return VerificationReport("factorization", _ident(g, label), params, PASS if holds else FAIL,
                              lhs=count, rhs=product, extra=extra)


def verify_claim_ratio(g: Graph, k: int, ell: float, label: str | None = None,
                       budget: Budget | None = None) -> list[VerificationReport]:
    """Per-vertex ratio |C(G)|/|C(G-v)| against ell, recorded as an observation."""
    num = count_colorings(g, k, budget)
    out = []
    for v in range(g.n):
        gv, _ = delete_vertex(g, v)
        den = count_colorings(gv, k, budget)
        params = {"k": k, "v": v, "ell": float(ell)}
        if den == 0 or num == 0:
            status, ratio = INAPPLICABLE, None
            note = "|C(G-v)| = 0" if den == 0 else "|C(G)| = 0"
        else:
            ratio = Fraction(num, den)
            status = HOLDS if ratio >= Fraction(ell) else FAILS_AT_SCALE
            note = ""
        out.append(VerificationReport("claim-ratio", _ident(g, label), params, status, OBSERVATION,
                                      lhs=ratio, rhs=float(ell), note=note))
    return out


def construct_coloring_sequential(g: Graph, k: int, budget: Budget | None = None) -> PartialColoring | None:
    """Color vertices 0, 1, ... with the smallest color that still has a completion.

    Returns None when ``g`` has no proper k-coloring.
    """
    counter = ExtensionCounter(g, k, budget)
    partial: dict[int, int] = {}
    if counter.count(partial) == 0:
        return None
    for v in range(g.n):
        for c in range(1, k + 1):
            partial[v] = c
            if counter.count(partial) > 0:
                break
        else:
            raise AssertionError("a positive count must leave some color with a completion")
    return PartialColoring.of(k, partial)


def verify_construction(g: Graph, k: int, label: str | None = None,
                        budget: Budget | None = None) -> VerificationReport:
    total = count_colorings(g, k, budget)
    col = construct_coloring_sequential(g, k, budget)
    if col is None:
        ok = total == 0
        lhs = "infeasible"
    else:
        ok = total > 0 and col.is_total(g) and col.is_proper(g)
        lhs = json.dumps(col.to_json()["colors"], sort_keys=True)
    return VerificationReport("construct", _ident(g, label), {"k": k}, PASS if ok else FAIL, lhs=lhs, rhs=total)


# coupon checks

def harvest_coupon_instance(g: Graph, v: int, k: int, seed: int,
                            budget: Budget | None = None) -> tuple[CouponInstance, list[int]]:
    """Lists ``L_c0(u)`` for u in N(v), with c0 the G0 part of a uniform c in C(G - v).

    Also returns the colors c gave the neighbours, used as concrete values
    of the small-list picks.
    """
    gv, mp = delete_vertex(g, v)
    c = UniformSampler(gv, k, budget).draw(make_rng(seed))[0]
    inv = {new: old for old, new in mp.items()}
    outer = set(outer_vertices(g, v))
    c0 = PartialColoring.of(k, {inv[x]: col for x, col in c.items if inv[x] in outer})
    nbrs = sorted(g.neighbors(v))
    lists = [available_colors(g, c0, u) for u in nbrs]
    picks = [c.get(mp[u]) for u in nbrs]
    return CouponInstance.of(k, lists, delta=max(g.max_degree(), len(lists))), picks


def verify_coupon_instance(inst: CouponInstance, label: str | None = None, picks: list[int] | None = None,
                           ts: Iterable[int] = (1, 2, 3), budget: Budget | None = None) -> list[VerificationReport]:
    """Oracle equality, negative correlation, variance and bound-chain checks.

    B for threshold t is the set of values the lists of size <= t took:
    ``picks`` when given, otherwise the smallest color of each such list.
    """
    budget = budget or default_budget()
    out = []
    name = label or json.dumps(inst.to_json(), sort_keys=True)
    mean = exact_uncovered_expectation(inst)
    var = uncovered_variance(inst)
    try:
        emean, evar = pmf_moments(enumerate_uncovered(inst, budget))
        ok = emean == mean and evar == var
        out.append(VerificationReport("coupon-oracle", name, {}, PASS if ok else FAIL,
                                      lhs=f"{witness(mean)};{witness(var)}", rhs=f"{witness(emean)};{witness(evar)}"))
    except ResourceGuardError as exc:
        out.append(VerificationReport("coupon-oracle", name, {}, INAPPLICABLE, note=str(exc)))
    covs = pairwise_covariances(inst)
    worst = max(covs.values(), default=Fraction(0))
    out.append(VerificationReport("negative-correlation", name, {}, PASS if worst <= 0 else FAIL,
                                  lhs=worst, rhs=0, note="max pairwise covariance"))
    out.append(VerificationReport("variance-bound", name, {}, PASS if var <= mean else FAIL, lhs=var, rhs=mean))
    delta = inst.delta if inst.delta is not None else inst.d
    for t in ts:
        small = inst.small_lists(t)
        B = {picks[i] for i in small} if picks is not None else {min(inst.lists[i]) for i in small}
        params = {"t": t, "B": sorted(B), "delta": delta}
        bp = BoundParams(t=t, B=frozenset(B))
        if len(B) >= inst.k:
            out.append(VerificationReport("amgm-bound", name, params, INAPPLICABLE, note="|B| >= k"))
        else:
            am = amgm_lower_bound(inst, bp)
            out.append(VerificationReport("amgm-bound", name, params, PASS if am.holds else FAIL,
                                          lhs=am.expectation, rhs=am.value,
                                          extra={"inner_product": am.inner_product, "m": am.m}))
        ro = reordering_lower_bound(inst, bp, delta)
        ok = ro.holds and ro.reorder_identity
        out.append(VerificationReport("reordering-bound", name, params, PASS if ok else FAIL, lhs=ro.lhs, rhs=ro.rhs,
                                      extra={"reorder_identity": ro.reorder_identity}))
    return out


# corpus handling and the suite

def parse_corpus(spec: str, seed: int = 0) -> list[tuple[str, Graph]]:
    """Turn a corpus description into labelled graphs.

    Items are separated by ``;``:

    ``all-nN``            every labelled graph with 1..N vertices
    ``mycielski:D``       the first D graphs of the tower K2, C5, Grotzsch, ...
    ``random:n=8,p=0.4,count=5``       random triangle-free graphs
    ``random-any:n=6,p=0.5,count=5``   random graphs, triangles allowed
    ``named:petersen,c5`` or a bare graph name
    """
    out: list[tuple[str, Graph]] = []
    for raw in spec.split(";"):
        item = raw.strip()
        if not item:
            continue
        head, _, rest = item.partition(":")
        head = head.strip().lower()
        try:
            if head.startswith("all-n"):
                top = int(head[5:].lstrip("<="))
                for n in range(1, top + 1):
                    for i, g in enumerate(all_graphs(n)):
                        out.append((f"all-n{n}-{i}", g))
            elif head == "mycielski":
                for level in range(int(rest)):
                    out.append((f"mycielski-{level}", mycielski_tower(level)))
            elif head in ("random", "random-any"):
                opts = dict(kv.split("=") for kv in rest.split(",") if kv)
                n = int(opts.get("n", 8))
                p = float(opts.get("p", 0.5))
                count = int(opts.get("count", 5))
                gen = gen_random_triangle_free if head == "random" else gen_random_graph
                for i in range(count):
                    out.append((f"{head}-n{n}-p{p}-{i}", gen(n, p, derive_seed(seed, head, n, p, i))))
            elif head == "named":
                for name in rest.split(","):
                    out.append((name.strip(), named_graph(name.strip())))
            else:
                out.append((head, named_graph(head)))
        except (ValueError, KeyError) as exc:
            raise ValueError(f"bad corpus item {item!r}: {exc}") from None
    return out


def resolve_ks(policy, g: Graph) -> list[int]:
    """Palette sizes for ``g``: ints, ``"2,3"``, ``"paper:EPS"`` or ``"delta+1"``."""
    if isinstance(policy, int):
        return [policy]
    if not isinstance(policy, str):
        return [int(k) for k in policy]
    policy = policy.strip()
    if policy.startswith("paper:"):
        eps = float(policy.split(":", 1)[1])
        delta = g.max_degree()
        return [palette_size(delta, eps) if delta >= 2 else delta + 1]
    if policy == "delta+1":
        return [g.max_degree() + 1]
    return [int(x) for x in policy.split(",") if x.strip()]


def ell_for(delta: int) -> float:
    return default_ell(delta) if delta >= 2 else 0.0


@dataclass
class SuiteOptions:
    max_c0_per_vertex: int = 50
    coupon_ts: tuple = (1, 2, 3)
    ell: float | None = None
    claim_ratio: bool = True
    triangle_counterexamples: bool = True


def _star_of(g: Graph, v: int) -> Graph:
    return induced_subgraph(g, g.neighbors(v) | {v})[0]


def run_graph_checks(label: str, g: Graph, k: int, seeds: Iterable[int], options: SuiteOptions | None = None,
                     budget: Budget | None = None) -> list[VerificationReport]:
    options = options or SuiteOptions()
    budget = budget or default_budget()
    seeds = list(seeds)
    reports = [verify_construction(g, k, label, budget)]
    for v in range(g.n):
        reports.append(verify_identity(g, v, k, label, budget))
        for u in sorted(g.neighbors(v)):
            reports.extend(verify_tail_bounds(g, v, u, k, range(k + 1), label, budget))
    if options.claim_ratio:
        ell = options.ell if options.ell is not None else ell_for(g.max_degree())
        reports.extend(verify_claim_ratio(g, k, ell, label, budget))
    tf = is_triangle_free(g)
    if tf:
        for v in range(g.n):
            gv, _ = delete_vertex(g, v)
            counter = ExtensionCounter(gv, k, budget)
            for c0 in itertools.islice(iter_outer_colorings(g, v, k), options.max_c0_per_vertex):
                reports.append(verify_factorization(g, v, k, c0, label, counter, budget))
    elif options.triangle_counterexamples:
        v = next(v for v in range(g.n) if not is_triangle_free(_star_of(g, v)))
        c0 = next(iter_outer_colorings(g, v, k), None)
        if c0 is not None:
            reports.append(verify_factorization(g, v, k, c0, label, budget=budget))
    if tf and g.m:
        v = max(range(g.n), key=lambda x: (g.degree(x), -x))
        gv, _ = delete_vertex(g, v)
        if count_colorings(gv, k, budget):
            for s in seeds:
                inst, picks = harvest_coupon_instance(g, v, k, derive_seed(s, label, k, v), budget)
                reports.extend(verify_coupon_instance(inst, f"{_ident(g, label)}/v{v}/k{k}/s{s}",
                                                      picks, options.coupon_ts, budget))
    return reports


def run_suite(corpus, k_policy="3", seeds: Iterable[int] = (0,), options: SuiteOptions | None = None,
              budget: Budget | None = None, seed: int = 0) -> list[VerificationReport]:
    """Run every check over a corpus; reports come back in canonical order."""
    if isinstance(corpus, str):
        corpus = parse_corpus(corpus, seed)
    reports: list[VerificationReport] = []
    seeds = list(seeds)
    for label, g in corpus:
        for k in resolve_ks(k_policy, g):
            reports.extend(run_graph_checks(label, g, k, seeds, options, budget))
    reports.sort(key=VerificationReport.sort_key)
    return reports


def summarize(reports: Iterable[VerificationReport]) -> dict:
    out: dict = {}
    for r in reports:
        out.setdefault(r.check, {}).setdefault(r.status, 0)
        out[r.check][r.status] += 1
    return out


def any_failures(reports: Iterable[VerificationReport]) -> bool:
    return any(r.failed for r in reports)


CSV_FIELDS = ["check", "instance", "kind", "status", "params", "lhs", "rhs", "note"]


def write_reports(reports: Iterable[VerificationReport], fh, fmt: str = "json") -> None:
    if fmt == "json":
        for r in reports:
            fh.write(json.dumps(r.to_json(), sort_keys=True) + "\n")
    elif fmt == "csv":
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for r in reports:
            js = r.to_json()
            js["params"] = json.dumps(js["params"], sort_keys=True)
            w.writerow({k: js[k] for k in CSV_FIELDS})
    else:
        raise ValueError(f"unknown format {fmt!r}")


def reports_to_string(reports, fmt: str = "json") -> str:
    buf = io.StringIO()
    write_reports(reports, buf, fmt)
    return buf.getvalue()
