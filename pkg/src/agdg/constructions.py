"""Named catalog of algebraically defined graphs.

Every builder returns a :class:`CatalogEntry` whose graph has already been
checked against the declared order and degree profile.  Names follow the
grammar ``NAME:key=value,...`` (for example ``D:k=10,q=9``); list valued
parameters use ``;`` as separator (``G:q=5,g=X;X^3``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadParams, NotInjective, UnknownName
from .ffield import GF, field_of_order, make_field
from .fndsl import (FnExpr, Node, Var, eval_vec, interpolate, mul, parse_fn,
                    read_system, substitute, univariate, var)
from .graphcore import Graph, ImplicitGraph, SolverGraph

# -- generic builders ------------------------------------------------------------


def _as_fns(fs, F: GF, context: str) -> list[FnExpr]:
    out = []
    for i, f in enumerate(fs):
        if isinstance(f, str):
            f = parse_fn(f, i + 2, context, F)
        out.append(f)
    return out


def build_bgamma(F: GF, fs, name: str | None = None, coord_sets=None) -> ImplicitGraph:
    """BΓ_n over F with f_2..f_n given as FnExpr or strings in p/l variables."""
    fs = _as_fns(fs, F, "bipartite")
    return ImplicitGraph(F, len(fs) + 1, fs, "bipartite", coord_sets=coord_sets, name=name)


def build_gamma(F: GF, fs, loops: bool = False, name: str | None = None, coord_sets=None,
                check: bool = True) -> ImplicitGraph:
    """Γ_n over F; every f must be symmetric in x and y."""
    fs = _as_fns(fs, F, "ordinary")
    return ImplicitGraph(F, len(fs) + 1, fs, "ordinary", loops_allowed=loops,
                         coord_sets=coord_sets, name=name, check=check)


# -- defining systems ----------------------------------------------------------------

def d_system(k: int, F: GF, signed: bool = False, scales=None) -> list[FnExpr]:
    """f_2..f_k of D(k,q).

    The default is the sign-free form.  ``signed`` gives the older form with
    f_i = -p_{i-2} l_1 for i = 0, 1 (mod 4); ``scales`` (a_1..a_{k-1}) gives
    the rescaled family H(k,q) whose members are all isomorphic to D(k,q).
    """
    if k < 1:
        raise BadParams("k must be at least 1")
    texts = []
    for i in range(2, k + 1):
        if i == 2:
            body = "p1*l1"
        elif i == 3:
            body = "p1*l2"
        elif i % 4 in (0, 1):
            body = f"p{i - 2}*l1"
        else:
            body = f"p1*l{i - 2}"
        f = parse_fn(body, i, "bipartite", F)
        c = 1
        if i >= 4 and i % 4 in (0, 1) and (signed or scales is not None):
            c = F.from_int(-1)
        if scales is not None:
            c = F.mul(c, int(scales[i - 2]))
        if c != 1:
            f = f.with_root(mul(Node("elem", value=int(c)), f.root))
        texts.append(f)
    return texts


def a_system(n: int, F: GF) -> list[FnExpr]:
    fs = []
    for i in range(2, n + 1):
        t = f"p{i - 1}*l1" if i % 2 == 0 else f"p1*l{i - 1}"
        fs.append(parse_fn(t, i, "bipartite", F))
    return fs


def wenger_system(m: int, F: GF) -> list[FnExpr]:
    return [parse_fn(f"l{k}*p1", k + 1, "bipartite", F) for k in range(1, m + 1)]


def wenger_prime_system(m: int, F: GF) -> list[FnExpr]:
    return [parse_fn(f"l1*p1^{k - 1}", k, "bipartite", F) for k in range(2, m + 2)]


def generalized_wenger_system(gs, F: GF) -> list[FnExpr]:
    """f_k = g_k(p_1) l_1 for the univariate g_2..g_{m+1}."""
    out = []
    for k, g in enumerate(gs, start=2):
        if isinstance(g, str):
            g = univariate(g, F)
        body = substitute(g, {Var("X"): var("p1")})
        out.append(FnExpr(mul(body, var("l1")), "bipartite", k, None, F))
    return out


def check_injective_moment(gs, F: GF) -> bool:
    """Is u -> (1, g_2(u), ..., g_{m+1}(u)) injective on GF(q)?"""
    xs = F.elements()
    rows = [np.broadcast_to(eval_vec(univariate(g, F) if isinstance(g, str) else g,
                                     {Var("X"): xs}, F), xs.shape) for g in gs]
    if not rows:
        return F.q == 1
    M = np.stack(rows, axis=1)
    return len(np.unique(M, axis=0)) == F.q


def linearized_gs(m: int, F: GF) -> list[str]:
    return [f"X^{F.p ** (k - 2)}" for k in range(2, m + 2)]


def jumped_gs(m: int, i: int, j: int) -> list[str]:
    exps = [e for e in range(1, m + 3) if e not in (i, j)]
    return [f"X^{e}" for e in exps]


TW_SYSTEM = (
    "p1*l1", "p1*l2", "p1*l3", "p1*l4",
    "p2*l3 - 2*p3*l2 + p4*l1",
    "p1*l6 + p2*l4 - 3*p4*l2 + 2*p5*l1",
    "2*p2*l6 - 3*p6*l2 + p7*l1",
)

BIAFFINE = {
    3: ("p1*l1",),
    4: ("p1*l1", "p1*l2"),
    6: ("p1*l1", "p2*l1", "p3*l1", "p2*l3 - p3*l2"),
}


# -- bespoke adjacency ----------------------------------------------------------------

def vw_graph(F: GF) -> SolverGraph:
    """a ~ b iff a2+b2 = a1 b1, a3+b4 = a1^2 b1, a4+b3 = a1 b1^2 (distinct vertices)."""
    xs = F.elements()

    def rule(c):
        a1, a2, a3, a4 = (c[i][:, None] for i in range(4))
        b1 = np.broadcast_to(xs[None, :], (c.shape[1], F.q))
        a1b1 = F.vmul(a1, b1)
        b2 = F.vsub(a1b1, a2)
        b4 = F.vsub(F.vmul(a1, a1b1), a3)
        b3 = F.vsub(F.vmul(a1b1, b1), a4)
        return np.stack([b1, b2, b3, b4])
    return SolverGraph(F, 4, rule, name=f"VW({F.q})")


def sun_graph(k: int, F: GF, fs, gs) -> SolverGraph:
    """Cayley graph of GF(q)^k with generators (a, au, g_3(a) f_3(u), ...), a != 0."""
    if k < 3 or len(fs) != k - 2 or len(gs) != k - 2:
        raise BadParams("a Sun graph S(k,q) needs k >= 3 and k-2 functions f_i and g_i")
    fs = [univariate(f, F) if isinstance(f, str) else f for f in fs]
    gs = [univariate(g, F) if isinstance(g, str) else g for g in gs]
    xs = F.elements()
    for g in gs:
        gx = np.broadcast_to(eval_vec(g, {Var("X"): xs}, F), xs.shape)
        gm = np.broadcast_to(eval_vec(g, {Var("X"): F.vneg(xs)}, F), xs.shape)
        if not np.array_equal(gm, F.vneg(gx)):
            raise BadParams(f"g = {g} is not odd, so adjacency would not be symmetric")
    a = np.repeat(xs[1:], F.q)
    u = np.tile(xs, F.q - 1)
    gens = [a, F.vmul(a, u)]
    for f, g in zip(fs, gs):
        fu = np.broadcast_to(eval_vec(f, {Var("X"): u}, F), u.shape)
        ga = np.broadcast_to(eval_vec(g, {Var("X"): a}, F), a.shape)
        gens.append(F.vmul(ga, fu))
    S = np.stack(gens)                                  # (k, q(q-1))

    def rule(c):
        return F.vadd(c[:, :, None], S[:, None, :])
    return SolverGraph(F, k, rule, name=f"S({k},{F.q})")


def sz_graph(q: int, restricted: bool = False) -> ImplicitGraph:
    """Γ(q) over GF(q^2): points GF(q) x GF(q^2) x GF(q), lines GF(q^2)^2 x GF(q).

    With ``restricted`` the first point coordinate runs over a subfield of
    order q^(1/3), which needs q to be a cube.
    """
    F0 = field_of_order(q)
    if F0.p == 2:
        raise BadParams("the construction needs q odd")
    F = make_field(F0.p, 2 * F0.e)
    f2 = parse_fn("p1*l1", 2, "bipartite", F)
    f3 = parse_fn(f"-(p2*l1^{q} + p2^{q}*l1)", 3, "bipartite", F)
    sub_q = F.subfield(F0.e)
    cs = {(0, 1): sub_q, (0, 3): sub_q, (1, 3): sub_q}
    name = f"SZ({q})"
    if restricted:
        if F0.e % 3:
            raise BadParams(f"q = {q} has no integral cube root inside GF(q)")
        cs[(0, 1)] = F.subfield(F0.e // 3)
        name = f"SZ'({q})"
    return ImplicitGraph(F, 3, [f2, f3], "bipartite", coord_sets=cs, name=name)


def k2t_graph(p: int, e: int, d: int) -> ImplicitGraph:
    """x ~ y iff x2 + y2 = f(x1 y1), f the projection killing the top d digits."""
    if not 1 <= d < e:
        raise BadParams("need 1 <= d < e")
    F = make_field(p, e)
    keep = p ** (e - d)
    proj = F.elements() % keep                          # digit truncation is F_p-linear
    g = interpolate(proj, F)
    body = substitute(g, {Var("X"): mul(var("x1"), var("y1"))})
    f2 = FnExpr(body, "ordinary", 2, None, F)
    W = np.arange(keep, dtype=np.int64)
    return ImplicitGraph(F, 2, [f2], "ordinary", loops_allowed=False,
                         coord_sets={(0, 2): W}, name=f"K2T({p},{e},{d})")


def omega_map(G_w: ImplicitGraph, G_wp: ImplicitGraph) -> Callable[[np.ndarray], np.ndarray]:
    """The coordinate change W_m(q) -> W'_m(q); lines are fixed."""
    F = G_w.F
    n = G_w.n

    def omega(codes):
        codes = np.asarray(codes, dtype=np.int64)
        side, c = G_w.decode(codes)
        out = c.copy()
        pts = side == 0
        for k in range(3, n + 1):
            acc = c[k - 1].copy()
            for i in range(2, k):
                acc = F.vadd(acc, F.vmul(c[i - 1], F.vpow(c[0], k - i)))
            out[k - 1] = np.where(pts, acc, c[k - 1])
        return G_wp.encode(side, out)
    return omega


# -- catalog -----------------------------------------------------------------------

@dataclass
class CatalogEntry:
    name: str
    params: dict
    graph: Graph
    order: int
    degrees: dict[int, int] | set[int]      # exact profile, or the allowed degree values
    transitive: bool = False
    expected_girth_lb: int | None = None
    notes: list[str] = field(default_factory=list)


def _point0(G: ImplicitGraph) -> int:
    return int(G.encode(0, np.zeros((G.n, 1), dtype=np.int64))[0])


def _sample(codes: np.ndarray, limit: int, seed: int = 0) -> np.ndarray:
    if len(codes) <= limit:
        return codes
    rng = np.random.default_rng(seed)
    return np.sort(rng.choice(codes, size=limit, replace=False))


def self_verify(entry: CatalogEntry, sample: int = 1000) -> None:
    G = entry.graph
    got = G.num_vertices()
    if got != entry.order:
        raise AssertionError(f"{entry.name}: order {got} != declared {entry.order}")
    vc = G.vertex_codes() if got <= 5 * 10**6 else None
    if vc is None:
        return
    s = _sample(vc, sample)
    deg = (G.neighbor_table(s) >= 0).sum(axis=1)
    allowed = set(entry.degrees) if not isinstance(entry.degrees, dict) else set(entry.degrees)
    bad = set(np.unique(deg).tolist()) - allowed
    if bad:
        raise AssertionError(f"{entry.name}: degrees {sorted(bad)} outside the declared {sorted(allowed)}")


def _int(params, key, default=None):
    if key not in params:
        if default is None:
            raise BadParams(f"missing parameter {key}")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise BadParams(f"{key} must be an integer, got {params[key]!r}") from None


def _field(params) -> GF:
    if "field" in params:
        from .ffield import parse_field
        return parse_field(params["field"])
    return field_of_order(_int(params, "q"))


def _list(params, key):
    v = params.get(key)
    if v is None:
        raise BadParams(f"missing parameter {key}")
    return [s for s in v.split(";") if s]


def _entry_D(p):
    k, F = _int(p, "k"), _field(p)
    signed = p.get("signed", "0") not in ("0", "false", "no")
    G = build_bgamma(F, d_system(k, F, signed=signed), name=f"D({k},{F.q})" + ("s" if signed else ""))
    G.transitive_reps = [_point0(G)]
    lb = k + 5 if k % 2 else k + 4
    return CatalogEntry("D", p, G, 2 * F.q**k, {F.q}, True, lb)


def _entry_CD(p):
    from .dkq import cd_component
    k, F = _int(p, "k"), _field(p)
    C = cd_component(k, F)
    return CatalogEntry("CD", p, C, C.num_vertices(), {F.q}, True)


def _entry_A(p):
    n, F = _int(p, "n"), _field(p)
    G = build_bgamma(F, a_system(n, F), name=f"A({n},{F.q})")
    return CatalogEntry("A", p, G, 2 * F.q**n, {F.q})


def _entry_W(p):
    m, F = _int(p, "m"), _field(p)
    G = build_bgamma(F, wenger_system(m, F), name=f"W_{m}({F.q})")
    G.transitive_reps = [_point0(G)]
    return CatalogEntry("W", p, G, 2 * F.q**(m + 1), {F.q}, True)


def _entry_Wp(p):
    m, F = _int(p, "m"), _field(p)
    G = build_bgamma(F, wenger_prime_system(m, F), name=f"W'_{m}({F.q})")
    G.transitive_reps = [_point0(G)]
    return CatalogEntry("Wp", p, G, 2 * F.q**(m + 1), {F.q}, True)


def _generalized(name, p, gs, F):
    if not check_injective_moment(gs, F):
        raise NotInjective(f"u -> (1, {', '.join(map(str, gs))}) is not injective over GF({F.q})")
    G = build_bgamma(F, generalized_wenger_system(gs, F), name=name)
    return CatalogEntry(p.get("_name", "G"), p, G, 2 * F.q**(len(gs) + 1), {F.q})


def _entry_G(p):
    F = _field(p)
    gs = _list(p, "g")
    return _generalized(f"G_{len(gs)}({F.q})", {**p, "_name": "G"}, gs, F)


def _entry_L(p):
    m, F = _int(p, "m"), _field(p)
    return _generalized(f"L_{m}({F.q})", {**p, "_name": "L"}, linearized_gs(m, F), F)


def _entry_J(p):
    m, F = _int(p, "m"), _field(p)
    i, j = _int(p, "i"), _int(p, "j")
    if not 1 <= i < j <= m + 2:
        raise BadParams(f"jump indices must satisfy 1 <= i < j <= m + 2, got i={i}, j={j}")
    return _generalized(f"J_{m}({F.q},{i},{j})", {**p, "_name": "J"}, jumped_gs(m, i, j), F)


def _entry_B(p):
    F = _field(p)
    m, n = _int(p, "m", 1), _int(p, "n", 1)
    if not (1 <= m <= F.q - 1 and 1 <= n <= F.q - 1):
        raise BadParams("exponents must lie in 1..q-1")
    G = build_bgamma(F, [f"p1^{m}*l1^{n}"], name=f"B({F.q};{m},{n})")
    return CatalogEntry("B", p, G, 2 * F.q**2, {F.q})


def _entry_TW(p):
    F = _field(p)
    G = build_bgamma(F, list(TW_SYSTEM), name=f"TW({F.q})")
    from .dkq import tw_automorphisms, verify_automorphism
    gens = tw_automorphisms(G)
    # cheap sampled screen; a map failing it is never used for orbit reduction
    G.automorphisms = [g for g in gens
                       if verify_automorphism(G, g, exhaustive_limit=0, samples=2000).ok]
    return CatalogEntry("TW", p, G, 2 * F.q**8, {F.q})


def _entry_VW(p):
    F = _field(p)
    if F.p == 2:
        raise BadParams("VW(q) needs q odd")
    return CatalogEntry("VW", p, vw_graph(F), F.q**4, {F.q - 1, F.q})


def _entry_Sun(p):
    k, F = _int(p, "k"), _field(p)
    fs = _list(p, "f")
    gs = _list(p, "g") if "g" in p else ["X"] * len(fs)
    G = sun_graph(k, F, fs, gs)
    return CatalogEntry("Sun", p, G, F.q**k, {F.q * (F.q - 1)}, True)


def _entry_BP(p):
    k, F = _int(p, "k"), _field(p)
    if k not in BIAFFINE:
        raise BadParams("biaffine parts exist for k = 3, 4, 6")
    G = build_bgamma(F, list(BIAFFINE[k]), name=f"Lambda^{k}({F.q})")
    return CatalogEntry("BP", p, G, 2 * F.q**(k - 1), {F.q}, expected_girth_lb=2 * k)


def _entry_SZ(p, restricted=False):
    q = _int(p, "q")
    G = sz_graph(q, restricted)
    a = len(G.allowed(0, 1))
    order = a * q**2 * q + q**2 * q**2 * q
    return CatalogEntry("SZ'" if restricted else "SZ", p, G, order, {a, q**2})


def _entry_K2T(p):
    pr, e, d = _int(p, "p"), _int(p, "e"), _int(p, "d")
    G = k2t_graph(pr, e, d)
    q = pr**e
    return CatalogEntry("K2T", p, G, q * pr**(e - d), {q - 1, q})


def _entry_Kqq(p):
    F = _field(p)
    G = build_bgamma(F, [], name=f"K_{F.q},{F.q}")
    G.transitive_reps = [_point0(G)]
    return CatalogEntry("Kqq", p, G, 2 * F.q, {F.q}, True)


def _entry_Gamma(p):
    F = _field(p)
    fs = _list(p, "f")
    loops = p.get("loops", "0") not in ("0", "false", "no")
    G = build_gamma(F, fs, loops=loops)
    return CatalogEntry("Gamma", p, G, F.q**len(fs) * F.q, {F.q - 1, F.q} if not loops else {F.q})


def _entry_BGamma(p):
    F = _field(p)
    fs = _list(p, "f")
    G = build_bgamma(F, fs)
    return CatalogEntry("BGamma", p, G, 2 * F.q**(len(fs) + 1), {F.q})


def _entry_Dig(p):
    from .monodigraph import build_digraph
    q, m, n = _int(p, "q"), _int(p, "m"), _int(p, "n")
    G = build_digraph(q, m, n)
    return CatalogEntry("Dig", p, G, q * q, {q})


def _entry_file(path: str, p: dict):
    sysf = read_system(path, _field(p) if ("q" in p or "field" in p) else None)
    if sysf.field is None:
        raise BadParams("the system file has no 'field' line and no q was given")
    F = sysf.field
    if sysf.kind == "bipartite":
        G = ImplicitGraph(F, len(sysf.fs) + 1, sysf.fs, "bipartite", name=f"file:{path}")
        return CatalogEntry("file", {"path": path}, G, 2 * F.q**G.n, {F.q})
    loops = sysf.kind == "digraph" or p.get("loops", "0") not in ("0", "false", "no")
    G = ImplicitGraph(F, len(sysf.fs) + 1, sysf.fs, sysf.kind, loops_allowed=loops,
                      name=f"file:{path}", check=sysf.kind == "ordinary")
    return CatalogEntry("file", {"path": path}, G, F.q**G.n, {F.q - 1, F.q})


BUILDERS: dict[str, Callable[[dict], CatalogEntry]] = {
    "D": _entry_D, "CD": _entry_CD, "A": _entry_A,
    "W": _entry_W, "Wp": _entry_Wp, "W'": _entry_Wp,
    "G": _entry_G, "L": _entry_L, "J": _entry_J,
    "B": _entry_B, "TW": _entry_TW, "VW": _entry_VW,
    "Sun": _entry_Sun, "S": _entry_Sun, "BP": _entry_BP,
    "SZ": _entry_SZ, "SZp": lambda p: _entry_SZ(p, True), "SZ'": lambda p: _entry_SZ(p, True),
    "K2T": _entry_K2T, "Kqq": _entry_Kqq, "Gamma": _entry_Gamma, "BGamma": _entry_BGamma,
    "Dig": _entry_Dig,
}

_NAME_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9']*)\s*(?::\s*(.*))?$")


def parse_name(spec: str) -> tuple[str, dict]:
    """Split ``NAME:k=v,...`` into the name and a parameter dict of strings."""
    if spec.startswith("file:"):
        path, _, rest = spec[5:].partition("?")
        params = _kv(rest) if rest else {}
        return "file", {"path": path, **params}
    m = _NAME_RE.match(spec)
    if not m:
        raise BadParams(f"cannot parse construction {spec!r}")
    return m.group(1), _kv(m.group(2) or "")


def _kv(text: str) -> dict:
    params = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in part:
            raise BadParams(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        params[k.strip()] = v.strip()
    return params


def build_catalog(name: str, params: dict | None = None, verify: bool = True, **kw) -> CatalogEntry:
    """Build a named construction; ``name`` may carry its parameters inline."""
    params = dict(params or {})
    params.update({k: str(v) for k, v in kw.items()})
    if ":" in name or name.startswith("file"):
        name, inline = parse_name(name)
        params = {**inline, **params}
    if name == "file":
        entry = _entry_file(params.pop("path"), params)
    else:
        b = BUILDERS.get(name)
        if b is None:
            raise UnknownName(f"unknown construction {name!r}; known: {', '.join(sorted(BUILDERS))}")
        entry = b(params)
    if verify:
        self_verify(entry)
    return entry


def catalog_names() -> list[str]:
    return sorted(BUILDERS)


__all__ = [
    "CatalogEntry", "build_bgamma", "build_gamma", "build_catalog", "catalog_names", "parse_name",
    "d_system", "a_system", "wenger_system", "wenger_prime_system", "generalized_wenger_system",
    "linearized_gs", "jumped_gs", "check_injective_moment", "vw_graph", "sun_graph", "sz_graph",
    "k2t_graph", "omega_map", "TW_SYSTEM", "BIAFFINE", "self_verify",
]
