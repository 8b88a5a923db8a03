"""Command-line front end: ``agdg <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad arguments or
parameters, 3 a budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import constructions, datafiles, dkq, monodigraph, spectra
from .errors import AgdgError, BudgetExceeded, PolarityUnavailable, TooLarge
from .ffield import field_of_order, parse_field
from .fndsl import permpoly_table
from .graphcore import (components, diameter_of_component, girth, line, mono,
                        numeric_spectrum, point, report, verify_ncc)
from .graphcore.io import FORMATS, export_graph

UNKNOWN = "\u2014"      # marker for table cells the reference leaves empty

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class Budget:
    def __init__(self, vertices: int, ms: float | None):
        self.vertices = vertices
        self.ms = ms
        self.t0 = time.perf_counter()

    def check_order(self, n: int, what: str = "graph"):
        if n > self.vertices:
            raise BudgetExceeded(f"{what} has {n} vertices, budget is {self.vertices}")

    def tick(self):
        if self.ms is not None and (time.perf_counter() - self.t0) * 1000 > self.ms:
            raise BudgetExceeded(f"time budget of {self.ms} ms exceeded")


# -- argument helpers ------------------------------------------------------------

def int_range(text: str) -> list[int]:
    """``2..8``, ``3,4,7`` or a mix such as ``2..4,9``."""
    out: list[int] = []
    for part in filter(None, (s.strip() for s in text.split(","))):
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def parse_vertex(text: str):
    text = text.strip()
    body = text[1:-1] if text[:1] in "([<" else text
    coords = [int(c) for c in body.split(",") if c.strip()]
    if text.startswith("("):
        return point(*coords)
    if text.startswith("["):
        return line(*coords)
    return mono(*coords)


def _with_field(spec: str, args) -> str:
    """Inject the global --field into a construction lacking q/field."""
    if not args.field or spec.startswith("file:"):
        return spec
    name, params = constructions.parse_name(spec)
    if "q" in params or "field" in params:
        return spec
    params["field"] = args.field
    return name + ":" + ",".join(f"{k}={v}" for k, v in params.items())


def _build(spec: str, args):
    spec = _with_field(spec, args)
    entry = constructions.build_catalog(spec, verify=False)
    args.budget.check_order(entry.order, spec)
    constructions.self_verify(entry)
    return entry


def _emit(args, payload, text_lines):
    if args.json:
        sys.stdout.write(json.dumps(payload, sort_keys=True, default=str) + "\n")
    else:
        for ln in text_lines:
            sys.stdout.write(ln + "\n")


def _run_cells(fn, cells, jobs: int):
    """Evaluate independent cells, in parallel if asked; output follows sorted cell order."""
    cells = sorted(cells)
    if jobs <= 1 or len(cells) < 2:
        return [fn(c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, cells))


# -- build -------------------------------------------------------------------------

def cmd_build(args) -> int:
    t0 = time.perf_counter()
    entry = _build(args.construction, args)
    G = entry.graph
    if args.export:
        export_graph(G, args.export, args.out, budget=args.budget.vertices)
        if args.out is None:
            return EXIT_OK
    g = d = c = None
    if args.girth:
        g = girth(G, cap=args.cap, use_orbits=bool(getattr(G, "transitive_reps", None)))
        args.budget.tick()
    if args.diameter:
        v0 = int(G.vertex_codes()[0])
        d = diameter_of_component(G, v0, use_orbits=entry.transitive)
        args.budget.tick()
    if args.components:
        c = components(G, args.budget.vertices).count
    rep = report(args.construction, G, g, d, c, started=t0)
    if args.stats:
        prof = G.degree_profile()
        rep["order"] = G.num_vertices()
        rep["degrees"] = {str(k): v for k, v in sorted(prof.items())}
        lines = [f"construction {args.construction}", f"order {rep['order']}"]
        lines.append(f"regular {next(iter(prof))}" if len(prof) == 1
                     else "degrees " + " ".join(f"{k}:{v}" for k, v in sorted(prof.items())))
    else:
        lines = []
    for key in ("girth", "diameter", "components"):
        if rep[key] is not None:
            lines.append(f"{key} {rep[key]}")
    if args.json or not (args.stats or lines):
        sys.stdout.write(json.dumps(rep, sort_keys=True) + "\n")
    else:
        sys.stdout.write("".join(s + "\n" for s in lines))
    return EXIT_OK


# -- table -------------------------------------------------------------------------

def _expected(name: str) -> dict:
    out = {}
    for row in datafiles.read_tsv(name):
        if row[0] == "q":
            continue
        out[(int(row[0]), int(row[1]))] = row[2:]
    return out


def _girth_cell(cell):
    q, k, budget = cell
    if 2 * q**k > budget:
        raise BudgetExceeded(f"D({k},{q}) has {2 * q**k} vertices")
    return girth(dkq.d_graph(k, q), use_orbits=True)


def _diam_cell(cell):
    q, k, budget = cell
    C = dkq.cd_component(k, q, budget=budget)
    return diameter_of_component(C, 0, use_orbits=True)


def _comp_cell(cell):
    q, k, budget = cell
    if 2 * q**k > budget:
        raise BudgetExceeded(f"D({k},{q}) has {2 * q**k} vertices")
    return components(dkq.d_graph(k, q), budget).count


def _spec_cell(cell):
    q, m, budget = cell
    if 2 * q ** (m + 1) > min(budget, spectra.DENSE_CAP):
        raise BudgetExceeded(f"W_{m}({q}) is too large for a dense spectrum")
    rep = spectra.wenger_spectrum_closed(m, q)
    G = constructions.build_catalog("W", {"m": m, "q": q}, verify=False).graph
    return rep.compare(numeric_spectrum(G))


def cmd_table(args) -> int:
    ks = int_range(args.k) if args.k else None
    qs = int_range(args.q) if args.q else [3]
    b = args.budget.vertices
    rows = []
    if args.name == "spectrum-W":
        ms = int_range(args.m) if args.m else (ks or [1, 2])
        cells = [(q, m, b) for q in qs for m in ms]
        vals = _run_cells(_spec_cell, cells, args.jobs)
        for (q, m, _), res in zip(sorted(cells), vals):
            rows.append({"q": q, "m": m, "computed": f"{res:.2e}", "expected": "<1e-6",
                         "match": "yes" if res < 1e-6 else "no"})
        return _table_out(args, rows, ["q", "m", "computed", "expected", "match"])
    ks = ks or list(range(2, 9))
    cells = sorted((q, k, b) for q in qs for k in ks)
    if args.name == "girth-D":
        exp, fn = _expected("girth_dkq.tsv"), _girth_cell
    elif args.name == "diam-CD":
        exp, fn = _expected("diam_cd.tsv"), _diam_cell
    else:
        exp, fn = None, _comp_cell
    vals = _run_cells(fn, cells, args.jobs)
    args.budget.tick()
    for (q, k, _), got in zip(cells, vals):
        got = str(got)
        if exp is None:
            e = dkq.expected_components(k, q)
            e_txt, rel = (UNKNOWN, "=") if e is None else (str(e), "=")
        else:
            rec = exp.get((q, k))
            e_txt = rec[0] if rec and rec[0] else UNKNOWN
            rel = rec[1] if rec and len(rec) > 2 and rec[1] in ("=", "<=") else "="
        if e_txt == UNKNOWN:
            match = UNKNOWN
        elif rel == "<=":
            match = "yes" if got.isdigit() and int(got) <= int(e_txt) else "no"
            e_txt = "<=" + e_txt
        else:
            match = "yes" if got == e_txt else "no"
        rows.append({"q": q, "k": k, "computed": got, "expected": e_txt, "match": match})
    code = _table_out(args, rows, ["q", "k", "computed", "expected", "match"])
    return code


def _table_out(args, rows, cols) -> int:
    if args.json:
        sys.stdout.write(json.dumps(rows, sort_keys=True) + "\n")
    else:
        sys.stdout.write("\t".join(cols) + "\n")
        for r in rows:
            sys.stdout.write("\t".join(str(r[c]) for c in cols) + "\n")
    return EXIT_FAIL if any(r["match"] == "no" for r in rows) else EXIT_OK


# -- verify ------------------------------------------------------------------------

def _suite_ncc(args):
    spec = args.construction or "D:k=3,q=3"
    ok = verify_ncc(_build(spec, args).graph)
    return [(spec, ok, None if ok else "some vertex misses a colour in its neighbourhood")]


def _edge_sample(G, n, rng):
    u = rng.choice(G.vertex_codes(), size=n)
    t = G.neighbor_table(u)
    v = t[np.arange(n), rng.integers(0, t.shape[1], size=n)]
    return u, v


def _suite_invariants(args):
    k, q = args.k or 6, args.q or 3
    G = dkq.d_graph(k, q)
    args.budget.check_order(G.num_vertices(), f"D({k},{q})")
    kind = "b" if q == 4 else "a"
    rng = np.random.default_rng(args.seed)
    u, v = _edge_sample(G, args.samples, rng)
    iu, iv = dkq.invariants(G, u, kind), dkq.invariants(G, v, kind)
    if kind == "b":
        iu, iv = iu[:, 1:], iv[:, 1:]       # b_1 is only constant on components
    bad = np.nonzero(np.any(iu != iv, axis=1))[0]
    out = [(f"edge-constancy D({k},{q}) on {args.samples} edges", not len(bad),
            None if not len(bad) else f"{G.label(int(u[bad[0]]))} ~ {G.label(int(v[bad[0]]))}")]
    if G.num_vertices() <= min(args.budget.vertices, 2 * 10**6) and kind == "a":
        C = components(G, args.budget.vertices)
        inv = dkq.invariants(G, C.codes, kind)
        keys = [tuple(r) for r in inv.tolist()]
        pairs = set(zip(keys, C.labels.tolist()))
        ok = len(pairs) == len(set(keys)) == C.count
        out.append((f"invariant classes = components ({C.count})", ok,
                    None if ok else f"{len(set(keys))} invariant classes vs {C.count} components"))
    return out


def _auto_list(G, k, rng):
    F = G.F
    nz = lambda: int(rng.integers(1, F.q))
    autos = [("mult", nz(), nz())]
    autos += [("add", j, nz()) for j in range(0, k + 1)]
    if k % 2 == 0 or F.p == 2:
        autos.append(("polarity", "printed"))
    return autos


def _phi(G, which):
    if which[0] == "mult":
        return dkq.multiplicative(G, which[1], which[2])
    if which[0] == "add":
        return dkq.additive(G, which[1], which[2])
    return dkq.polarity(G, *which[1:])


def _suite_automorphisms(args):
    k, q = args.k or 6, args.q or 3
    G = dkq.d_graph(k, q)
    args.budget.check_order(G.num_vertices(), f"D({k},{q})")
    rng = np.random.default_rng(args.seed)
    out = []
    for which in _auto_list(G, k, rng):
        try:
            r = dkq.verify_automorphism(G, _phi(G, which), samples=args.samples, seed=args.seed)
        except PolarityUnavailable as e:
            out.append((repr(which), True, f"skipped: {e}"))
            continue
        ex = None if r.ok else f"{r.violations}/{r.checked} edges fail, e.g. {r.example}"
        out.append((f"{which} [{'exhaustive' if r.exhaustive else 'sampled'}]", r.ok, ex))
        args.budget.tick()
    return out


def _suite_decomposition(args):
    from .decomp import decomposition_check
    spec = args.construction or "BGamma:q=3,f=p1*l1"
    G = _build(spec, args).graph
    r = decomposition_check(G)
    note = f"{r.classes} classes of {r.class_sizes} over {r.pairs} pairs, isomorphism {r.isomorphic}"
    return [(spec, r.ok, None if r.ok else note)]


def _closed_spectrum(spec: str, args):
    name, params = constructions.parse_name(_with_field(spec, args))
    F = parse_field(params["field"]) if "field" in params else field_of_order(int(params["q"]))
    if name == "W":
        return spectra.wenger_spectrum_closed(int(params["m"]), F.q)
    if name == "L":
        return spectra.linearized_wenger_spectrum(int(params["m"]), F.q)
    if name == "G":
        return spectra.generalized_wenger_spectrum(params["g"].split(";"), F)
    raise AgdgError(f"no closed-form spectrum for {name}")


def _suite_spectra(args):
    spec = args.construction or "W:m=2,q=3"
    rep = _closed_spectrum(spec, args)
    G = _build(spec, args).graph
    res = rep.compare(numeric_spectrum(G))
    return [(spec, res < 1e-6, None if res < 1e-6 else f"max deviation {res:.3g}")]


def _suite_permpoly(args):
    F = parse_field(args.field) if args.field else field_of_order(args.q or 27)
    out = []
    for r in permpoly_table(F):
        out.append((f"GF({F.q}) k={r['k']}", r["ok"],
                    None if r["ok"] else f"A bijective {r['A']}, B bijective {r['B']}, "
                                         f"k power of p {r['predicted']}"))
    return out


SUITES = {
    "ncc": _suite_ncc, "invariants": _suite_invariants, "automorphisms": _suite_automorphisms,
    "decomposition": _suite_decomposition, "spectra": _suite_spectra, "permpoly": _suite_permpoly,
}


def cmd_verify(args) -> int:
    results = SUITES[args.suite](args)
    failed = [r for r in results if not r[1]]
    payload = {"suite": args.suite, "pass": not failed, "checks": len(results),
               "failures": [{"check": c, "counterexample": e} for c, _, e in failed]}
    lines = [f"{'PASS' if ok else 'FAIL'} {c}" + (f"  ({e})" if e and ok else "") for c, ok, e in results]
    if failed:
        lines.append(f"first counterexample: {failed[0][0]}: {failed[0][2]}")
    lines.append(f"{args.suite}: {'pass' if not failed else 'fail'}")
    _emit(args, payload, lines)
    return EXIT_FAIL if failed else EXIT_OK


# -- spectrum, digraph, decompose, dkq ------------------------------------------

def cmd_spectrum(args) -> int:
    out: dict = {"construction": args.construction, "mode": args.mode}
    lines = []
    rep = None
    if args.mode in ("closed", "both"):
        rep = _closed_spectrum(args.construction, args)
        out["closed"] = rep.as_dict()
        lines += [f"{rep.symbol(k)}\t{rep.mult[k]}" for k in rep.distinct()]
    if args.mode in ("numeric", "both"):
        G = _build(args.construction, args).graph
        ev = numeric_spectrum(G)
        vals, counts = np.unique(np.round(ev, 9) + 0.0, return_counts=True)
        out["numeric"] = [{"value": float(v), "multiplicity": int(c)} for v, c in zip(vals, counts)]
        if rep is not None:
            out["residual"] = rep.compare(ev)
            lines.append(f"residual {out['residual']:.3g}")
        else:
            lines += [f"{v:.9f}\t{c}" for v, c in zip(vals, counts)]
    _emit(args, out, lines)
    if rep is not None and args.mode == "both" and out["residual"] > 1e-6:
        return EXIT_FAIL
    return EXIT_OK


def cmd_digraph(args) -> int:
    D = monodigraph.build_digraph(parse_field(args.field) if args.field else args.q, args.m, args.n)
    args.budget.check_order(D.num_vertices(), D.name)
    wanted = [s.strip() for s in args.report.split(",") if s.strip()]
    out: dict = {"digraph": D.name}
    lines = []
    if "scc" in wanted:
        s = monodigraph.strong_components(D, args.budget.vertices)
        out["scc"] = s
        lines.append(f"scc {s['count']} sizes {' '.join(map(str, s['sizes']))}")
    if "diameter" in wanted:
        d = monodigraph.digraph_diameter(D)
        out["diameter"] = d if d != float("inf") else "inf"
        lines.append(f"diameter {out['diameter']}")
    if "census" in wanted:
        c = monodigraph.subdigraph_census(D, args.census_length)
        out["census"] = c
        lines.append("census " + " ".join(map(str, c)))
    _emit(args, out, lines)
    return EXIT_OK


def cmd_decompose(args) -> int:
    from .decomp import decomposition_check
    G = _build(args.construction, args).graph
    r = decomposition_check(G, args.mode)
    out = {"construction": args.construction, "mode": r.mode, "classes": r.classes,
           "expected_classes": r.expected_classes, "class_sizes": r.class_sizes,
           "expected_size": r.expected_size, "pairs": r.pairs, "base_matches": r.base_matches,
           "isomorphic": r.isomorphic, "ok": r.ok}
    lines = [f"{k} {v}" for k, v in out.items()]
    _emit(args, out, lines)
    return EXIT_OK if r.ok else EXIT_FAIL


def cmd_dkq(args) -> int:
    q = parse_field(args.field) if args.field else args.q
    if args.action == "invariant":
        if not args.vertex:
            raise AgdgError("--vertex is required")
        iv = dkq.invariant_vector(args.k, q, parse_vertex(args.vertex))
        _emit(args, {"kind": iv.kind, "entries": list(iv.entries)},
              [f"{iv.kind} " + " ".join(map(str, iv.entries))])
        return EXIT_OK
    if args.action == "components":
        G = dkq.d_graph(args.k, q)
        args.budget.check_order(G.num_vertices(), G.name)
        r = dkq.count_components_check(args.k, q, args.budget.vertices)
        _emit(args, r, [f"components {r['actual']} expected {r['expected']} "
                        f"{'match' if r['match'] else 'MISMATCH'}"])
        return EXIT_OK if r["match"] else EXIT_FAIL
    G = dkq.d_graph(args.k, q)
    args.budget.check_order(G.num_vertices(), G.name)
    if args.kind == "mult":
        which = ("mult", args.a, args.b)
    elif args.kind == "add":
        which = ("add", args.j, args.x)
    else:
        which = ("polarity", args.variant)
    r = dkq.verify_automorphism(G, _phi(G, which), samples=args.samples, seed=args.seed)
    out = {"automorphism": list(which), "ok": r.ok, "checked": r.checked, "violations": r.violations,
           "status": r.status, "example": list(r.example) if r.example else None}
    lines = [f"{'pass' if r.ok else 'fail'} {which} on {G.name}: "
             f"{r.violations}/{r.checked} violations [{'exhaustive' if r.exhaustive else 'sampled'}]"]
    if r.example:
        lines.append("counterexample " + " ".join(r.example))
    _emit(args, out, lines)
    return EXIT_OK if r.ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field as p^e, overrides q where one is needed")
    common.add_argument("--budget-vertices", type=int, default=10**7)
    common.add_argument("--budget-ms", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true")
    common.add_argument("--jobs", type=int, default=1)

    ap = argparse.ArgumentParser(prog="agdg", description="Algebraically defined graphs toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build a construction")
    b.add_argument("construction")
    b.add_argument("--export", choices=FORMATS)
    b.add_argument("--out")
    b.add_argument("--stats", action="store_true")
    b.add_argument("--girth", action="store_true")
    b.add_argument("--cap", type=int)
    b.add_argument("--diameter", action="store_true")
    b.add_argument("--components", action="store_true")
    b.set_defaults(func=cmd_build)

    t = sub.add_parser("table", parents=[common], help="computed vs reference tables")
    t.add_argument("name", choices=["girth-D", "diam-CD", "components", "spectrum-W"])
    t.add_argument("--k")
    t.add_argument("--q")
    t.add_argument("--m")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--k", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--construction")
    v.add_argument("--samples", type=int, default=10**4)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", parents=[common], help="closed-form and numeric spectra")
    s.add_argument("--construction", required=True)
    s.add_argument("--mode", choices=["closed", "numeric", "both"], default="both")
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("digraph", parents=[common], help="monomial digraphs D(q;m,n)")
    d.add_argument("--q", type=int, required=True)
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--report", default="scc,diameter")
    d.add_argument("--census-length", type=int, default=7)
    d.set_defaults(func=cmd_digraph)

    c = sub.add_parser("decompose", parents=[common], help="edge decomposition check")
    c.add_argument("--construction", required=True)
    c.add_argument("--mode", choices=["bipartite", "ordinary"])
    c.set_defaults(func=cmd_decompose)

    k = sub.add_parser("dkq", parents=[common], help="D(k,q) invariants and automorphisms")
    k.add_argument("action", choices=["invariant", "components", "verify-auto"])
    k.add_argument("--k", type=int, default=4)
    k.add_argument("--q", type=int, default=5)
    k.add_argument("--vertex")
    k.add_argument("--kind", choices=["mult", "add", "polarity"], default="mult")
    k.add_argument("--a", type=int, default=1)
    k.add_argument("--b", type=int, default=1)
    k.add_argument("--j", type=int, default=0)
    k.add_argument("--x", type=int, default=1)
    k.add_argument("--variant", choices=["printed", "char2"], default="printed")
    k.add_argument("--samples", type=int, default=10**5)
    k.set_defaults(func=cmd_dkq)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.budget = Budget(args.budget_vertices, args.budget_ms)
    try:
        code = args.func(args)
        args.budget.tick()
        return code
    except (BudgetExceeded, TooLarge) as e:
        print(f"agdg: budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (AgdgError, ValueError, KeyError) as e:
        print(f"agdg: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
