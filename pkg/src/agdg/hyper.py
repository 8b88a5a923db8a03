"""Uniform hypergraphs T and K defined by sum equations, Berge girth, the LV 3-graph.

Vertices of a part are vectors a = (a_1, ..., a_d) in GF(q)^d with code
sum a_i q^(i-1); in T the vertex of part j (0-based) gets code j*q^d + that.
Edges are stored explicitly as sorted code tuples.  When generating edges
the last vertex of each edge has its coordinates a_2..a_d solved for.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, EvenQ, NotSymmetric
from .ffield import GF, field_of_order
from .fndsl import FnExpr, eval_vec, parse_fn
from .graphcore import AboveCap, ExplicitGraph, girth

ENUM_LIMIT = 10**7


@dataclass
class RGraph:
    r: int
    q: int
    d: int
    k: int                        # number of parts; 0 when there are no parts
    edges: np.ndarray             # (m, r) sorted codes
    vertices: np.ndarray          # the vertex universe
    name: str = "H"
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def degrees(self) -> dict[int, int]:
        """Degree of every vertex in the universe."""
        deg = dict.fromkeys(self.vertices.tolist(), 0)
        u, c = np.unique(self.edges, return_counts=True)
        deg.update(zip(u.tolist(), c.tolist()))
        return deg

    def degree_profile(self) -> dict[int, int]:
        vals, cnt = np.unique(list(self.degrees().values()), return_counts=True)
        return dict(zip(vals.tolist(), cnt.tolist()))

    def edge_set(self) -> set[tuple[int, ...]]:
        return set(map(tuple, self.edges.tolist()))

    def check(self) -> None:
        e = self.edges
        if len(e) and np.any(e[:, 1:] <= e[:, :-1]):
            raise ValueError("edges must be sorted tuples of distinct vertices")
        if len(np.unique(e, axis=0)) != len(e):
            raise ValueError("duplicate edges")
        if self.k:
            part = e // self.q**self.d
            if len(e) and np.any(part[:, 1:] == part[:, :-1]):
                raise ValueError("edge meets a part twice")


def _field(q) -> GF:
    return q if isinstance(q, GF) else field_of_order(int(q))


def _parse_fs(fs, d: int, r: int, F: GF) -> list[FnExpr | None]:
    out = []
    fs = list(fs or [])
    for i in range(2, d + 1):
        f = fs[i - 2] if i - 2 < len(fs) else None
        if isinstance(f, str):
            f = None if f.strip() in ("", "0") else parse_fn(f, i, f"hyper({r})", F)
        out.append(f)
    return out


def _eval(f: FnExpr | None, A: np.ndarray, F: GF) -> np.ndarray:
    """f on the stacked coordinates A of shape (N, r, d)."""
    if f is None:
        return np.zeros(A.shape[0], dtype=np.int64)
    env = {v: A[:, v.slot - 1, v.index - 1] for v in f.variables()}
    return np.broadcast_to(eval_vec(f, env, F), A.shape[:1]).astype(np.int64)


def _solved_tuples(F: GF, d: int, r: int, fs) -> np.ndarray:
    """All ordered r-tuples of GF(q)^d vectors satisfying the sum equations."""
    q = F.q
    free = r + (r - 1) * (d - 1)
    N = q**free
    if N > ENUM_LIMIT:
        raise BudgetExceeded(f"{N} tuples exceed {ENUM_LIMIT}")
    digits = (np.arange(N, dtype=np.int64)[:, None] // q ** np.arange(free)) % q
    A = np.zeros((N, r, d), dtype=np.int64)
    A[:, :, 0] = digits[:, :r]
    pos = r
    for i in range(2, d + 1):
        A[:, : r - 1, i - 1] = digits[:, pos:pos + r - 1]
        pos += r - 1
        rhs = _eval(fs[i - 2], A, F)
        others = np.zeros(N, dtype=np.int64)
        for j in range(r - 1):
            others = F.vadd(others, A[:, j, i - 1])
        A[:, r - 1, i - 1] = F.vsub(rhs, others)
    return A


def _codes(A: np.ndarray, q: int) -> np.ndarray:
    return (A * q ** np.arange(A.shape[-1])).sum(axis=-1)


def build_T(q, d: int, k: int, r: int, fs=None) -> RGraph:
    F = _field(q)
    if not 2 <= r <= k or d < 2:
        raise ValueError("need 2 <= r <= k and d >= 2")
    fl = _parse_fs(fs, d, r, F)
    A = _solved_tuples(F, d, r, fl)
    base = _codes(A, F.q)                     # (N, r)
    qd = F.q**d
    blocks = [base + np.array(S) * qd for S in itertools.combinations(range(k), r)]
    E = np.concatenate(blocks)
    H = RGraph(r, F.q, d, k, E, np.arange(k * qd), f"T({F.q},{d},{k},{r})")
    return H


def check_symmetric_hyper(f: FnExpr | None, F: GF, r: int, samples: int = 20000, seed: int = 0) -> bool:
    """Is f unchanged by permuting the r argument blocks?"""
    if f is None:
        return True
    levels = max((v.index for v in f.variables()), default=0)
    n = r * max(levels, 1)
    rng = np.random.default_rng(seed)
    if F.q**n <= samples:
        pts = (np.arange(F.q**n)[:, None] // F.q ** np.arange(n)) % F.q
    else:
        pts = rng.integers(0, F.q, size=(samples, n))
    A = pts.reshape(-1, r, max(levels, 1))
    A = np.concatenate([A, np.zeros(A.shape[:2] + (f.arity,), dtype=np.int64)], axis=2)
    base = _eval(f, A, F)
    for j in range(r - 1):
        perm = list(range(r))
        perm[j], perm[j + 1] = perm[j + 1], perm[j]
        if not np.array_equal(base, _eval(f, A[:, perm, :], F)):
            return False
    return True


def build_K(q, d: int, r: int, fs=None) -> RGraph:
    F = _field(q)
    fl = _parse_fs(fs, d, r, F)
    for f in fl:
        if not check_symmetric_hyper(f, F, r):
            raise NotSymmetric(f"{f} is not symmetric in its {r} argument blocks")
    A = _solved_tuples(F, d, r, fl)
    C = _codes(A, F.q)
    C.sort(axis=1)
    C = C[np.all(C[:, 1:] != C[:, :-1], axis=1)]
    E = np.unique(C, axis=0)
    return RGraph(r, F.q, d, 0, E, np.arange(F.q**d), f"K({F.q},{d},{r})")


def k_degree_law(p: int, d: int, r: int) -> dict[int, int]:
    """The bi-regular degree profile expected for prime p and r < p."""
    delta = (math.comb(p**d - 1, r - 1) + (-1) ** r) // p ** (d - 1)
    prof = {delta: p**d - p}
    prof[delta + (-1) ** (r + 1)] = prof.get(delta + (-1) ** (r + 1), 0) + p
    return prof


def build_LV(q) -> RGraph:
    """3-graph on GF(q)^2 minus the parabola 2 x2 = x1^2."""
    F = _field(q)
    if F.p == 2:
        raise EvenQ("LV 3-graph needs q odd")
    xs = F.elements()
    X1, X2 = np.repeat(xs, F.q), np.tile(xs, F.q)
    keep = F.vmul(F.from_int(2), X2) != F.vmul(X1, X1)
    V1, V2 = X1[keep], X2[keep]
    code = V1 + F.q * V2
    ia, ib = np.triu_indices(len(V1), 1)
    a1, a2, b1, b2 = V1[ia], V2[ia], V1[ib], V2[ib]
    ok = (F.vadd(a2, b2) == F.vmul(a1, b1)) & (a1 != b1)
    a1, a2, b1, b2 = a1[ok], a2[ok], b1[ok], b2[ok]
    c1 = F.vmul(F.vsub(b2, a2), F.vinv(F.vsub(b1, a1)))
    c2 = F.vsub(F.vmul(a1, c1), a2)
    cc = c1 + F.q * c2
    good = np.isin(cc, code) & (F.vadd(b2, c2) == F.vmul(b1, c1))
    trip = np.stack([(a1 + F.q * a2)[good], (b1 + F.q * b2)[good], cc[good]], axis=1)
    trip.sort(axis=1)
    trip = trip[np.all(trip[:, 1:] != trip[:, :-1], axis=1)]
    E = np.unique(trip, axis=0)
    return RGraph(3, F.q, 2, 0, E, np.sort(code), f"LV({F.q})")


def incidence_graph(H: RGraph) -> tuple[ExplicitGraph, int]:
    """Vertex-edge incidence graph; vertices come first (count returned)."""
    idx = {int(v): i for i, v in enumerate(H.vertices)}
    n = len(H.vertices)
    pairs = [(idx[int(v)], n + e) for e, row in enumerate(H.edges.tolist()) for v in row]
    sides = np.r_[np.ones(n, dtype=np.int8), np.zeros(H.size, dtype=np.int8)]
    return ExplicitGraph(n + H.size, pairs, name=f"I({H.name})", sides=sides), n


def berge_girth(H: RGraph, cap: int | None = None):
    """Shortest Berge cycle length, or AboveCap(cap).

    A Berge g-cycle is a cycle of length 2g in the incidence graph, so edges
    and vertices on it are automatically distinct.
    """
    if H.size == 0:
        return AboveCap(cap)
    I, n = incidence_graph(H)
    g = girth(I, cap=None if cap is None else 2 * cap, roots=np.arange(n))
    if isinstance(g, AboveCap):
        return AboveCap(cap)
    return g // 2


@dataclass
class HyperDecomposition:
    classes: int
    expected_classes: int
    class_sizes: list[int]
    expected_size: int
    total: int
    base_matches: bool

    @property
    def ok(self) -> bool:
        return (self.classes == self.expected_classes and self.base_matches
                and set(self.class_sizes) == {self.expected_size})


def hyper_decomposition_check(q, d: int, r: int, fs=None, k: int | None = None) -> HyperDecomposition:
    """Split the complete k-partite (or complete, if k is None) r-graph by shift class.

    The class of an edge is the vector (sum_j a_i - f_i)_{i=2..d}; the class
    of zero is the edge set of T (or K) itself.
    """
    F = _field(q)
    fl = _parse_fs(fs, d, r, F)
    qd = F.q**d
    vecs = (np.arange(qd)[:, None] // F.q ** np.arange(d)) % F.q
    if k is not None:
        N = math.comb(k, r) * qd**r
        if N > ENUM_LIMIT:
            raise BudgetExceeded(f"{N} edges exceed {ENUM_LIMIT}")
        idx = (np.arange(qd**r)[:, None] // qd ** np.arange(r)) % qd
        base = build_T(F, d, k, r, fs)
        parts = [(idx, np.array(S)) for S in itertools.combinations(range(k), r)]
        codes = np.concatenate([idx + S * qd for idx, S in parts])
        IDX = np.concatenate([idx for idx, _ in parts])
    else:
        N = math.comb(qd, r)
        if N > ENUM_LIMIT:
            raise BudgetExceeded(f"{N} edges exceed {ENUM_LIMIT}")
        IDX = np.array(list(itertools.combinations(range(qd), r)), dtype=np.int64)
        codes = IDX
        base = build_K(F, d, r, fs)
    A = vecs[IDX]                                  # (N, r, d)
    cls = np.zeros(len(A), dtype=np.int64)
    for i in range(2, d + 1):
        s = np.zeros(len(A), dtype=np.int64)
        for j in range(r):
            s = F.vadd(s, A[:, j, i - 1])
        cls = cls * F.q + F.vsub(s, _eval(fl[i - 2], A, F))
    vals, counts = np.unique(cls, return_counts=True)
    zero = np.sort(codes[cls == 0], axis=1)
    base_ok = {tuple(x) for x in zero.tolist()} == base.edge_set()
    return HyperDecomposition(len(vals), F.q ** (d - 1), sorted(set(counts.tolist())),
                              base.size, int(len(A)), base_ok)


# -- exchange format -------------------------------------------------------------------

def write_exchange(H: RGraph, sink) -> None:
    """Header ``r q d k`` then one edge per line as vertex codes."""
    sink.write(f"{H.r} {H.q} {H.d} {H.k}\n")
    for row in H.edges.tolist():
        sink.write(" ".join(map(str, row)) + "\n")


def read_exchange(source) -> RGraph:
    lines = [ln.split() for ln in source if ln.strip() and not ln.startswith("#")]
    r, q, d, k = map(int, lines[0])
    E = np.array([sorted(map(int, ln)) for ln in lines[1:]], dtype=np.int64).reshape(-1, r)
    verts = np.arange((k or 1) * q**d)
    return RGraph(r, q, d, k, E, verts, "H")


__all__ = [
    "RGraph", "build_T", "build_K", "build_LV", "k_degree_law", "berge_girth",
    "incidence_graph", "check_symmetric_hyper", "HyperDecomposition",
    "hyper_decomposition_check", "write_exchange", "read_exchange",
]
