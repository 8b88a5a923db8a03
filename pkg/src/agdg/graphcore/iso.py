"""Exact isomorphism testing for small graphs and digraphs.

Colour refinement on the disjoint union of both graphs, followed by
individualisation and backtracking.  Cheap invariants (degree sequences and
closed-walk counts) reject most non-isomorphic pairs before any search.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix

from ..errors import TooLarge
from .base import ExplicitGraph, Graph

MAX_ORDER = 2000


def _explicit(G: Graph) -> ExplicitGraph:
    if isinstance(G, ExplicitGraph):
        return G
    if G.num_vertices() > MAX_ORDER:
        raise TooLarge(f"{G.num_vertices()} vertices exceed {MAX_ORDER}")
    return ExplicitGraph.from_graph(G, MAX_ORDER)[0]


def _walk_traces(E: ExplicitGraph, kmax: int = 8) -> list[int]:
    t = E.neighbor_table(np.arange(E.N))
    r = np.repeat(np.arange(E.N), t.shape[1])
    c = t.ravel()
    keep = c >= 0
    A = csr_matrix((np.ones(keep.sum(), dtype=np.int64), (r[keep], c[keep])), shape=(E.N, E.N))
    out = []
    P = np.eye(E.N, dtype=np.int64)
    for _ in range(kmax):
        P = A @ P
        out.append(int(np.trace(P)))
    return out


class _Union:
    """Padded out/in tables of G + H with H's vertices shifted by n."""

    def __init__(self, G: ExplicitGraph, H: ExplicitGraph):
        n = G.N
        self.n = n
        tg, th = G.neighbor_table(np.arange(n)), H.neighbor_table(np.arange(n))
        w = max(tg.shape[1], th.shape[1])
        self.out = np.full((2 * n, w), -1, dtype=np.int64)
        self.out[:n, :tg.shape[1]] = tg
        self.out[n:, :th.shape[1]] = np.where(th >= 0, th + n, -1)
        self.directed = G.directed
        if self.directed:
            ig, ih = G.in_neighbor_table(np.arange(n)), H.in_neighbor_table(np.arange(n))
            w = max(ig.shape[1], ih.shape[1])
            self.inn = np.full((2 * n, w), -1, dtype=np.int64)
            self.inn[:n, :ig.shape[1]] = ig
            self.inn[n:, :ih.shape[1]] = np.where(ih >= 0, ih + n, -1)
        self.adj_sets = [set(int(x) for x in row if x >= 0) for row in self.out]

    def refine(self, colors: np.ndarray) -> np.ndarray | None:
        """Equitable refinement; None when the two halves stop matching."""
        n = self.n
        k = len(np.unique(colors))
        while True:
            cols = [colors[:, None]]
            for tab in ([self.out, self.inn] if self.directed else [self.out]):
                nc = np.where(tab >= 0, colors[np.maximum(tab, 0)], -1)
                cols.append(np.sort(nc, axis=1))
            sig = np.concatenate(cols, axis=1)
            _, new = np.unique(sig, axis=0, return_inverse=True)
            new = new.ravel()
            if not _balanced(new, n):
                return None
            k2 = new.max() + 1
            if k2 == k:
                return new
            colors, k = new, k2


def _balanced(colors: np.ndarray, n: int) -> bool:
    m = colors.max() + 1
    return np.array_equal(np.bincount(colors[:n], minlength=m), np.bincount(colors[n:], minlength=m))


def find_isomorphism(G: Graph, H: Graph) -> dict[int, int] | None:
    """A vertex bijection G -> H preserving arcs, or None."""
    A, B = _explicit(G), _explicit(H)
    if A.N != B.N or A.directed != B.directed:
        return None
    if A.N == 0:
        return {}
    da = np.sort((A.neighbor_table(np.arange(A.N)) >= 0).sum(1))
    db = np.sort((B.neighbor_table(np.arange(B.N)) >= 0).sum(1))
    if not np.array_equal(da, db):
        return None
    if _walk_traces(A) != _walk_traces(B):
        return None
    U = _Union(A, B)
    n = A.N
    start = U.refine(np.zeros(2 * n, dtype=np.int64))
    if start is None:
        return None
    return _search(U, start)


def _search(U: _Union, colors: np.ndarray):
    n = U.n
    counts = np.bincount(colors[:n])
    if counts.max() == 1:
        # discrete: colour c in G maps to colour c in H
        pos = np.empty(counts.size, dtype=np.int64)
        pos[colors[n:]] = np.arange(n, 2 * n)
        mapping = {v: int(pos[colors[v]]) - n for v in range(n)}
        for v in range(n):
            img = {mapping[u] + n for u in U.adj_sets[v]}
            if img != U.adj_sets[mapping[v] + n]:
                return None
        return mapping
    # smallest non-trivial cell
    cell = int(np.argmin(np.where(counts > 1, counts, n + 1)))
    members = np.nonzero(colors == cell)[0]
    v = members[members < n][0]
    fresh = colors.max() + 1
    for w in members[members >= n]:
        c2 = colors.copy()
        c2[v] = fresh
        c2[w] = fresh
        r = U.refine(c2)
        if r is None:
            continue
        got = _search(U, r)
        if got is not None:
            return got
    return None


def is_isomorphic(G: Graph, H: Graph) -> bool:
    return find_isomorphism(G, H) is not None
