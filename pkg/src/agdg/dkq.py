"""D(k,q): invariant vectors, the component CD(k,q), automorphisms, projections."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .constructions import build_bgamma, d_system
from .datafiles import read_tsv
from .errors import (BadParams, DimensionTooSmall, NotBijective, PolarityUnavailable,
                     ZeroScalar)
from .ffield import GF, field_of_order
from .graphcore import Graph, ImplicitGraph, Subgraph, VertexId, component_of, components


def _F(q) -> GF:
    return q if isinstance(q, GF) else field_of_order(int(q))


def d_graph(k: int, q, signed: bool = False) -> ImplicitGraph:
    F = _F(q)
    G = build_bgamma(F, d_system(k, F, signed=signed), name=f"D({k},{F.q})")
    G.transitive_reps = [0]
    return G


def t_of(k: int) -> int:
    return (k + 2) // 4


# -- invariant vectors -------------------------------------------------------------

@dataclass(frozen=True)
class InvariantVector:
    kind: str                   # "a" or "b"
    entries: tuple[int, ...]

    def is_zero(self) -> bool:
        return not any(self.entries)


def _a_r(F: GF, side: int, c: np.ndarray, r: int) -> np.ndarray:
    """a_r of each column of the coordinate array c (shape (k, m))."""
    k = c.shape[0]
    zero = np.zeros(c.shape[1], dtype=np.int64)

    def x(i):
        return c[i - 1] if 1 <= i <= k else zero

    def pr(i, j):
        return F.vmul(x(i), x(j))

    add, sub = F.vadd, F.vsub
    if r == 2:
        if side == 0:
            return sub(add(sub(F.vmul(x(2), x(2)), pr(1, 4)), x(5)), x(6))
        return add(sub(sub(F.vmul(x(2), x(2)), pr(1, 3)), x(5)), x(6))
    lead = pr(1, 4 * r - 4) if side == 0 else pr(1, 4 * r - 5)
    s = sub(sub(lead, pr(2, 4 * r - 6)), pr(2, 4 * r - 7))
    s = add(s, pr(3, 4 * r - 8))
    if side == 0:
        s = add(sub(s, x(4 * r - 3)), x(4 * r - 2))
    else:
        s = sub(add(s, x(4 * r - 3)), x(4 * r - 2))
    for i in range(2, r - 1):
        s = add(sub(s, pr(4 * i - 3, 4 * (r - i) - 2)), pr(4 * i - 1, 4 * (r - i) - 4))
    return s if r % 2 == 1 else F.vneg(s)


def _b_1(F: GF, side: int, c: np.ndarray) -> np.ndarray:
    x1, x2, x3, x4 = c[0], c[1], c[2], c[3]
    if side == 0:
        return F.vadd(F.vadd(F.vmul(x1, x2), x3), F.vmul(x4, x4))
    return F.vadd(F.vadd(F.vmul(x1, x2), F.vmul(x3, x3)), x4)


def invariants(G: ImplicitGraph, codes, kind: str = "a") -> np.ndarray:
    """Invariant vectors of many vertices of D(k,q); shape (len(codes), length)."""
    k = G.n
    if kind == "a" and k < 6:
        raise DimensionTooSmall("the a-vector needs k >= 6")
    if kind == "b" and k < 4:
        raise DimensionTooSmall("the b-vector needs k >= 4")
    codes = np.asarray(codes, dtype=np.int64).ravel()
    side, c = G.decode(codes)
    t = t_of(k)
    cols = []
    if kind == "b":
        cols.append(np.where(side == 0, _b_1(G.F, 0, c), _b_1(G.F, 1, c)))
    for r in range(2, t + 1):
        cols.append(np.where(side == 0, _a_r(G.F, 0, c, r), _a_r(G.F, 1, c, r)))
    if not cols:
        return np.zeros((len(codes), 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def invariant_vector(k: int, q, v: VertexId, kind: str | None = None) -> InvariantVector:
    F = _F(q)
    kind = kind or ("b" if F.q == 4 else "a")
    G = d_graph(k, F)
    return InvariantVector(kind, tuple(int(x) for x in invariants(G, [G.code(v)], kind)[0]))


# -- the component of the zero point -------------------------------------------------

def cd_component(k: int, q, method: str = "auto", budget: int = 10**7) -> Subgraph:
    """CD(k,q), the component of D(k,q) containing the zero point.

    ``method`` is ``invariant`` (membership by a zero a-vector, or b-vector
    when q = 4), ``bfs``, or ``auto`` which uses the a-vector for k >= 6 and
    q != 4 and BFS otherwise.
    """
    F = _F(q)
    G = d_graph(k, F)
    if method == "auto":
        method = "invariant" if (k >= 6 and F.q != 4) else "bfs"
    if method == "invariant":
        kind = "b" if F.q == 4 else "a"
        if (kind == "a" and k < 6) or (kind == "b" and k < 4):
            raise DimensionTooSmall(f"no invariant membership test for k = {k}")

        def pred(codes):
            return ~np.any(invariants(G, codes, kind) != 0, axis=1)
        C = Subgraph(G, predicate=pred, name=f"CD({k},{F.q})")
    elif method == "bfs":
        C = Subgraph(G, members=component_of(G, 0, budget), name=f"CD({k},{F.q})")
    else:
        raise BadParams(f"unknown method {method!r}")
    # any automorphism moving one vertex of C to another stabilises C, so
    # point and line transitivity of D(k,q) carry over to the component
    C.transitive_reps = [0]
    C.n = G.n
    return C


def expected_components(k: int, q: int) -> int:
    t = t_of(k)
    if q == 4:
        return 1 if k in (2, 3) else 4**t
    if q == 2:
        return 2 ** (k - 3) if k >= 5 else None
    return q ** (t - 1)


def count_components_check(k: int, q, budget: int = 10**7) -> dict:
    F = _F(q)
    exp = expected_components(k, F.q)
    act = components(d_graph(k, F), budget).count
    return {"k": k, "q": F.q, "expected": exp, "actual": act, "match": exp == act}


def projection_fiber_profile(k: int, q, budget: int = 10**7) -> dict:
    """Fibres of C(k) -> D(k-1,q) obtained by dropping the last coordinate."""
    if k < 3:
        raise BadParams("need k >= 3")
    F = _F(q)
    G, H = d_graph(k, F), d_graph(k - 1, F)
    C = component_of(G, 0, budget)
    side, c = G.decode(C)
    img = H.encode(side, c[:-1])
    Cp = component_of(H, 0, budget)
    vals, counts = np.unique(img, return_counts=True)
    sizes = sorted(set(counts.tolist()))
    return {
        "k": k, "q": F.q,
        "order_C": int(len(C)), "order_C_prev": int(len(Cp)),
        "fiber_sizes": sizes,
        "constant": len(sizes) == 1,
        "into": bool(np.all(np.isin(vals, Cp))),
        "surjective": bool(len(vals) == len(Cp) and np.array_equal(vals, Cp)),
    }


# -- automorphisms ---------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    side: int
    target: str
    source: str
    coef: int
    xpow: int
    scope: str


_IDX_RE = re.compile(r"([+-]?)\s*(\d*)\s*([jt]?)")


def _index(expr: str, j: int | None, t: int | None) -> int:
    total = 0
    for sign, num, sym in _IDX_RE.findall(expr.replace(" ", "")):
        if not num and not sym:
            continue
        n = int(num) if num else 1
        if sym == "j":
            n *= j
        elif sym == "t":
            n *= t
        total += -n if sign == "-" else n
    return total


@lru_cache(maxsize=None)
def load_automorphism_table(name: str = "dkq_automorphisms.tsv") -> dict[str, tuple[Term, ...]]:
    out: dict[str, list[Term]] = {}
    for row in read_tsv(name):
        m, side, tgt, src, coef, xpow, scope = row[:7]
        out.setdefault(m, []).append(Term(0 if side == "p" else 1, tgt, src, int(coef), int(xpow), scope))
    return {k: tuple(v) for k, v in out.items()}


def expand_terms(terms, k: int, j: int | None = None) -> list[tuple[int, int, int, int, int]]:
    """Concrete (side, target, source, coef, xpow) rows for dimension k."""
    rows = []
    for tm in terms:
        if tm.scope == "fixed":
            rng = [None]
        else:
            rng = range(1, k + 1)
        for t in rng:
            tgt = _index(tm.target, j, t)
            src = _index(tm.source, j, t)
            if not 1 <= tgt <= k or src < 0 or src > k:
                continue
            if tm.scope == "general" and tgt < 6:
                continue
            rows.append((tm.side, tgt, src, tm.coef, tm.xpow))
    return rows


class CoordMap:
    """A vertex map of a BΓ graph given coordinatewise; callable on code arrays."""

    def __init__(self, G: ImplicitGraph, fn, name: str):
        self.G = G
        self.fn = fn
        self.name = name

    def __call__(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        side, c = self.G.decode(codes)
        nside, nc = self.fn(side, c)
        return self.G.encode(nside, nc)

    def __repr__(self):
        return f"<{self.name} on {self.G.name}>"


def term_map(G: ImplicitGraph, rows, x: int, name: str) -> CoordMap:
    F = G.F

    def fn(side, c):
        out = c.copy()
        for s, tgt, src, coef, xpow in rows:
            scale = F.mul(F.from_int(coef), F.pow(x, xpow))
            if scale == 0:
                continue
            base = np.ones_like(c[0]) if src == 0 else c[src - 1]
            add = F.vmul(base, scale)
            out[tgt - 1] = np.where(side == s, F.vadd(out[tgt - 1], add), out[tgt - 1])
        return side, out
    return CoordMap(G, fn, name)


def additive(G: ImplicitGraph, j: int, x: int) -> CoordMap:
    """t_{j,x} as transcribed in the bundled table."""
    k = G.n
    if not 0 <= j <= k:
        raise BadParams(f"j must lie in 0..{k}")
    tab = load_automorphism_table()
    if j <= 2:
        rows = expand_terms(tab[f"t{j}"], k)
    else:
        rows = expand_terms(tab["tj01" if j % 4 in (0, 1) else "tj23"], k, j)
    return term_map(G, rows, int(x), f"t_{j},{x}")


def mult_factor(F: GF, i: int, a: int, b: int, side: int) -> int:
    if i == 1:
        return a if side == 0 else b
    if i % 4 == 3:
        ea, eb = i // 4 + 2, i // 4 + 1
    else:
        ea, eb = (i - 1) // 4 + 1, i // 4 + 1
    return F.mul(F.pow(a, ea), F.pow(b, eb))


def multiplicative(G: ImplicitGraph, a: int, b: int) -> CoordMap:
    F = G.F
    if a == 0 or b == 0:
        raise ZeroScalar("m_{a,b} needs a, b != 0")
    fp = np.array([mult_factor(F, i, a, b, 0) for i in range(1, G.n + 1)])
    fl = np.array([mult_factor(F, i, a, b, 1) for i in range(1, G.n + 1)])

    def fn(side, c):
        f = np.where(side[None, ...] == 0, fp.reshape((-1,) + (1,) * side.ndim),
                     fl.reshape((-1,) + (1,) * side.ndim))
        return side, F.vmul(c, f)
    return CoordMap(G, fn, f"m_{a},{b}")


def polarity(G: ImplicitGraph, variant: str = "printed") -> CoordMap:
    """Swap points and lines, exchanging coordinates (3,4), (5,6), ...

    For odd k the last coordinate stays in place.  ``variant='char2'`` is the
    corrected map for k = 5 in characteristic 2, where the last coordinate
    also picks up p2^2 + p1 p4 (points) or l2^2 + l1 l3 (lines).
    """
    k, F = G.n, G.F
    if k % 2 and F.p != 2:
        raise PolarityUnavailable("polarity needs k even or q even")
    perm = list(range(k))
    for i in range(2, k - 1 if k % 2 else k, 2):
        perm[i], perm[i + 1] = i + 1, i
    if variant == "char2" and not (k == 5 and F.p == 2):
        raise BadParams("the corrected polarity is only derived for k = 5, q even")

    def fn(side, c):
        out = c[perm]
        if variant == "char2":
            sq = F.vmul(c[1], c[1])
            corr = np.where(side == 0, F.vmul(c[0], c[3]), F.vmul(c[0], c[2]))
            out[4] = F.vadd(out[4], F.vadd(sq, corr))
        return 1 - side, out
    return CoordMap(G, fn, f"polarity[{variant}]")


def apply_automorphism(G: ImplicitGraph, which, v: VertexId) -> VertexId:
    """``which`` is ('mult', a, b), ('add', j, x) or ('polarity',) / ('polarity', variant)."""
    kind = which[0]
    if kind == "mult":
        phi = multiplicative(G, which[1], which[2])
    elif kind == "add":
        phi = additive(G, which[1], which[2])
    elif kind == "polarity":
        phi = polarity(G, *which[1:])
    else:
        raise BadParams(f"unknown automorphism {kind!r}")
    return G.vertex(int(phi(np.array([G.code(v)]))[0]))


@dataclass
class AutoCheck:
    ok: bool
    checked: int
    exhaustive: bool
    violations: int
    example: tuple | None = None
    status: str = "ok"
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_automorphism(G: Graph, phi: Callable, exhaustive_limit: int = 10**6,
                        samples: int = 10**5, seed: int = 0, target: Graph | None = None) -> AutoCheck:
    """Does phi map every edge of G onto an edge (of ``target``, default G)?

    Exhaustive (including a bijectivity check) when |E| <= exhaustive_limit,
    otherwise ``samples`` random edges with status 'sampled'.
    """
    H = G if target is None else target
    vc = G.vertex_codes()
    deg = G.neighbor_table(vc[:1]).shape[1]
    n_edges_est = len(vc) * deg // (1 if G.directed else 2)
    exhaustive = n_edges_est <= exhaustive_limit
    if exhaustive:
        img = np.asarray(phi(vc), dtype=np.int64)
        if not np.all(H.contains(img)) or len(np.unique(img)) != len(vc) \
                or len(vc) != H.num_vertices():
            raise NotBijective(f"{phi!r} is not a bijection of the vertex set")
        E = G.edges()
    else:
        rng = np.random.default_rng(seed)
        u = rng.choice(vc, size=samples)
        t = G.neighbor_table(u)
        col = rng.integers(0, t.shape[1], size=samples)
        v = t[np.arange(samples), col]
        keep = v >= 0
        E = np.stack([u[keep], v[keep]], axis=1)
        img = np.asarray(phi(E[:, 0]), dtype=np.int64)
        if not np.all(H.contains(img)):
            raise NotBijective(f"{phi!r} leaves the vertex set")
    bad = 0
    example = None
    for s in range(0, len(E), 1 << 17):
        blk = E[s:s + (1 << 17)]
        a = np.asarray(phi(blk[:, 0]), dtype=np.int64)
        b = np.asarray(phi(blk[:, 1]), dtype=np.int64)
        rows = H.neighbor_table(a)
        hit = np.any(rows == b[:, None], axis=1)
        nb = int((~hit).sum())
        if nb and example is None:
            i = int(np.nonzero(~hit)[0][0])
            example = (G.label(int(blk[i, 0])), G.label(int(blk[i, 1])),
                       H.label(int(a[i])), H.label(int(b[i])))
        bad += nb
    return AutoCheck(bad == 0, len(E), exhaustive, bad, example,
                     "ok" if exhaustive else "sampled")


def sign_free_scales(k: int, F: GF) -> list[int]:
    """Scales a_1..a_{k-1} for which the scaled system is the sign-free one."""
    m1 = F.from_int(-1)
    return [m1 if i % 4 in (0, 3) else 1 for i in range(1, k)]


def scaled_graph(k: int, q, scales) -> ImplicitGraph:
    F = _F(q)
    if any(a == 0 for a in scales):
        raise ZeroScalar("scales must be nonzero")
    G = build_bgamma(F, d_system(k, F, scales=list(scales)), name=f"H({k},{F.q})")
    return G


def scaling_isomorphism(G: ImplicitGraph, H: ImplicitGraph, scales) -> "_Iso":
    """Coordinatewise map from the signed D(k,q) onto the scaled graph.

    Coordinate 2i is multiplied by a_{2i-1} a_{2i-3} ... a_1 and coordinate
    2i+1 by a_{2i} a_{2i-2} ... a_2 a_1, on both sides.
    """
    F, k = G.F, G.n
    fac = [1] * k
    for i in range(2, k + 1):
        f = 1
        if i % 2 == 0:
            for r in range(i - 1, 0, -2):
                f = F.mul(f, scales[r - 1])
        else:
            for r in range(i - 1, 1, -2):
                f = F.mul(f, scales[r - 1])
            f = F.mul(f, scales[0])
        fac[i - 1] = f
    fac = np.array(fac)

    def call(codes):
        side, c = G.decode(np.asarray(codes, dtype=np.int64))
        return H.encode(side, F.vmul(c, fac.reshape((-1,) + (1,) * side.ndim)))
    return _Iso(call, "scaling")


class _Iso:
    def __init__(self, fn, name):
        self.fn, self.name = fn, name

    def __call__(self, codes):
        return self.fn(codes)

    def __repr__(self):
        return f"<{self.name}>"


# -- TW(q) --------------------------------------------------------------------------------

TW_WEIGHTS = (1, 2, 3, 4, 5, 5, 6, 7)


def tw_automorphisms(G: ImplicitGraph, x: int = 1) -> list[CoordMap]:
    """Translations tau_2..tau_8 and the scaling by a primitive element."""
    tab = load_automorphism_table("tw_automorphisms.tsv")
    maps = [term_map(G, expand_terms(tab[f"tau{j}"], 8), x, f"tau_{j}") for j in range(2, 9)]
    F = G.F
    a = F.primitive()
    fac = np.array([F.pow(a, w) for w in TW_WEIGHTS])

    def scale(side, c):
        return side, F.vmul(c, fac.reshape((-1,) + (1,) * side.ndim))
    maps.append(CoordMap(G, scale, f"sigma_{a}"))
    return maps


__all__ = [
    "InvariantVector", "invariants", "invariant_vector", "cd_component", "d_graph", "t_of",
    "expected_components", "count_components_check", "projection_fiber_profile",
    "Term", "load_automorphism_table", "expand_terms", "CoordMap", "term_map", "additive",
    "multiplicative", "mult_factor", "polarity", "apply_automorphism", "AutoCheck",
    "verify_automorphism", "tw_automorphisms", "TW_WEIGHTS", "sign_free_scales",
    "scaled_graph", "scaling_isomorphism",
]
