"""Structural operations: restriction, projection, covers, spectra, lifts."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import BadDimension, EmptySet, NotAVoltage, TooLarge
from ..fndsl import FnExpr, compile_fn
from .base import ExplicitGraph, Graph, ImplicitGraph, SIDE_NAMES
from .traverse import adjacency_csr

DENSE_CAP = 6000


def restrict(G: ImplicitGraph, A=None, B=None) -> ImplicitGraph:
    """BΓ_n[A, B]: points with first coordinate in A, lines with first in B."""
    cs = dict(G.coord_sets)
    for side, S in ((0, A), (1, B)):
        if S is None:
            continue
        S = [int(x) for x in S]
        if not S:
            raise EmptySet("restriction set is empty")
        cs[(side, 1)] = S
    H = ImplicitGraph(G.F, G.n, G.fs, G.kind, G.loops_allowed, cs,
                      f"{G.name}[A,B]", check=False)
    return H


def project(G: ImplicitGraph, k: int) -> tuple[ImplicitGraph, Callable[[np.ndarray], np.ndarray]]:
    """The graph on the first k coordinates and the projection map on codes."""
    if not 1 <= k < G.n:
        raise BadDimension(f"cannot project dimension {G.n} onto {k}")
    H = G.with_system(G.fs[:k - 1], name=f"{G.name}|{k}")

    def eta(codes):
        side, coords = G.decode(codes)
        return H.encode(side, coords[:k])
    return H, eta


def is_cover(big: Graph, small: Graph, theta: Callable[[np.ndarray], np.ndarray]) -> bool:
    """True iff theta is a covering map big -> small.

    Checks that theta is onto, maps edges to edges and restricts to a
    bijection from every neighbourhood onto the neighbourhood of the image.
    """
    vc = big.vertex_codes()
    img_all = []
    for s in range(0, len(vc), 1 << 16):
        blk = vc[s:s + (1 << 16)]
        img = np.asarray(theta(blk))
        img_all.append(img)
        if not np.all(small.contains(img)):
            return False
        nb = big.neighbor_table(blk)
        mapped = np.where(nb >= 0, theta(np.where(nb >= 0, nb, blk[:, None])), -1)
        target = small.neighbor_table(img)
        a = np.sort(mapped, axis=1)
        b = np.sort(target, axis=1)
        if a.shape != b.shape:
            w = max(a.shape[1], b.shape[1])
            a = np.pad(a, ((0, 0), (w - a.shape[1], 0)), constant_values=-1)
            b = np.pad(b, ((0, 0), (w - b.shape[1], 0)), constant_values=-1)
        if not np.array_equal(a, b):
            return False
        # duplicates inside a row would mean theta is not injective there
        if np.any((a[:, 1:] == a[:, :-1]) & (a[:, 1:] >= 0)):
            return False
    covered = np.unique(np.concatenate(img_all))
    return len(covered) == small.num_vertices()


def verify_ncc(G: ImplicitGraph) -> bool:
    """Every neighbourhood meets each first-coordinate colour exactly once."""
    q = G.F.q
    vc = G.vertex_codes()
    for s in range(0, len(vc), 1 << 16):
        t = G.neighbor_table(vc[s:s + (1 << 16)])
        if np.any(t < 0):
            return False
        _, coords = G.decode(t)
        first = np.sort(coords[0], axis=1)
        if first.shape[1] != q or not np.all(first == np.arange(q)[None, :]):
            return False
    return True


def verify_ncc_explicit(G: Graph, colour: Callable[[np.ndarray], np.ndarray], ncolours: int) -> bool:
    vc = G.vertex_codes()
    t = G.neighbor_table(vc)
    col = np.where(t >= 0, colour(np.maximum(t, 0)), -1)
    srt = np.sort(col, axis=1)
    return srt.shape[1] == ncolours and bool(np.all(srt == np.arange(ncolours)[None, :]))


def adjacency_dense(G: Graph, cap: int = DENSE_CAP) -> tuple[np.ndarray, np.ndarray]:
    n = G.num_vertices()
    if n > cap:
        raise TooLarge(f"{n} vertices exceed the dense cap {cap}")
    A, vc = adjacency_csr(G)
    D = A.toarray().astype(np.float64)
    return D, vc


def numeric_spectrum(G: Graph, cap: int = DENSE_CAP) -> np.ndarray:
    """Sorted adjacency eigenvalues rounded to 9 decimals; a loop adds 1."""
    D, _ = adjacency_dense(G, cap)
    ev = np.linalg.eigvalsh(D)
    ev = np.round(ev, 9) + 0.0
    return np.sort(ev)


def multiset_contains(big, small, tol: float = 1e-6) -> bool:
    """Is ``small`` a sub-multiset of ``big`` up to ``tol`` per value?"""
    big = np.sort(np.asarray(big, dtype=float))
    used = np.zeros(len(big), dtype=bool)
    for x in np.sort(np.asarray(small, dtype=float)):
        lo = np.searchsorted(big, x - tol)
        hi = np.searchsorted(big, x + tol, side="right")
        free = np.nonzero(~used[lo:hi])[0]
        if not len(free):
            return False
        used[lo + free[0]] = True
    return True


def multiset_equal(a, b, tol: float = 1e-6) -> bool:
    return len(a) == len(b) and multiset_contains(a, b, tol)


# -- voltage lifts --------------------------------------------------------------

def voltage_lift(G: Graph, alpha, name: str | None = None, check: bool = True) -> ExplicitGraph:
    """Derived graph on V(G) x GF(q) with arcs (u, g) -> (v, g + alpha(u, v)).

    ``alpha`` is either a callable on arrays of arc endpoints returning
    element codes, or an FnExpr f evaluated on (point, line) edges with the
    reverse arc getting -f.  Lifted vertex (v, g) has index pos(v) * q + g.
    """
    F = G.F
    q = F.q
    vc = G.vertex_codes()
    t = G.neighbor_table(vc)
    src = np.repeat(vc, t.shape[1])
    dst = t.ravel()
    keep = dst >= 0
    src, dst = src[keep], dst[keep]
    if isinstance(alpha, FnExpr):
        if not hasattr(G, "decode") or not G.bipartite:
            raise NotAVoltage("an FnExpr voltage needs a bipartite coordinate graph")
        f = compile_fn(_as_bipartite(alpha), F)
        fwd = G.is_point(src)
        p = np.where(fwd, src, dst)
        l = np.where(fwd, dst, src)
        _, pc = G.decode(p)
        _, lc = G.decode(l)
        env = {}
        from ..fndsl import Var
        for i in range(G.n):
            env[Var("p", i + 1)] = pc[i]
            env[Var("l", i + 1)] = lc[i]
        val = np.broadcast_to(f(env), src.shape)
        volt = np.where(fwd, val, F.vneg(val))
    else:
        volt = np.asarray(alpha(src, dst), dtype=np.int64)
        if check:
            back = np.asarray(alpha(dst, src), dtype=np.int64)
            if not np.array_equal(F.vadd(volt, back), np.zeros_like(volt)):
                raise NotAVoltage("alpha(v, u) != -alpha(u, v) for some arc")
    iu = np.searchsorted(vc, src)
    iv = np.searchsorted(vc, dst)
    g = np.arange(q)
    a = (iu[:, None] * q + g[None, :]).ravel()
    b = (iv[:, None] * q + F.vadd(g[None, :], volt[:, None])).ravel()
    sides = None
    if G.bipartite:
        sides = np.repeat((~G.is_point(vc)).astype(np.int8), q)
    labels = None
    if len(vc) * q <= 200000:
        labels = [f"{G.label(int(c))}+{h}" for c in vc for h in range(q)]
    E = np.stack([a, b], axis=1)
    E = E[E[:, 0] <= E[:, 1]] if not G.directed else E
    H = ExplicitGraph(len(vc) * q, E, G.kind if G.kind != "digraph" else "digraph", labels,
                      name or f"lift({G.name})", sides)
    H.kind = G.kind
    return H


def _as_bipartite(f: FnExpr) -> FnExpr:
    from .base import _rename_roles
    return _rename_roles(f, ("p", "l"))


def lift_matches_extension(G: ImplicitGraph, f_new: FnExpr) -> bool:
    """Check that the lift by f_new is literally BΓ_{n+1} with f_new appended.

    The lifted vertex (v, g) is sent to v extended by -g for points and by g
    for lines; the edge sets must then coincide.
    """
    H = voltage_lift(G, f_new)
    big = G.with_system(list(G.fs) + [f_new])
    vc = G.vertex_codes()
    q = G.F.q
    F = G.F
    idx = np.arange(len(vc) * q)
    base = vc[idx // q]
    g = idx % q
    side, coords = G.decode(base)
    last = np.where(side == 0, F.vneg(g), g)
    img = big.encode(side, np.concatenate([coords, last[None, :]]))
    e = H.edges()
    mapped = np.sort(np.stack([img[e[:, 0]], img[e[:, 1]]], axis=1), axis=1)
    mapped = mapped[np.lexsort((mapped[:, 1], mapped[:, 0]))]
    return np.array_equal(mapped, big.edges())


def side_label(side: int) -> str:
    return SIDE_NAMES[side]
