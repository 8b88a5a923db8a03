"""Breadth-first machinery: girth, eccentricity, components, cycle search.

BFS runs level by level on numpy arrays and many roots are processed at once:
a visited entry is the pair (root, vertex) packed into one int64 key.  For an
undirected graph every neighbour of level d lies in level d-1, d or d+1, so
only the two most recent levels are kept in memory.  That is what makes
single-source traversal of implicit graphs with 10^8 vertices feasible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import BudgetExceeded, EmptyGraph
from .base import ExplicitGraph, Graph

DEFAULT_BUDGET = 10**7
_BATCH_CANDIDATES = 1 << 22


@dataclass(frozen=True)
class AboveCap:
    cap: int | None

    def __repr__(self):
        return f"AboveCap({self.cap})"

    def __str__(self):
        return f">{self.cap}"


@dataclass
class _Level:
    keys: np.ndarray        # sorted packed (root, vertex) keys
    parent: np.ndarray      # parent vertex code per key
    branch: np.ndarray      # first step from the root (-1 at the root)


@dataclass
class CycleHit:
    length: int
    root: int
    through_root: bool
    # endpoints of the closing step: vertices u, w with (u, w) the non-tree edge,
    # or (u, w) two parents of a shared child c
    u: int
    w: int
    child: int = -1


def _lookup(level: _Level, keys: np.ndarray):
    idx = np.searchsorted(level.keys, keys)
    idx = np.minimum(idx, max(len(level.keys) - 1, 0))
    found = (level.keys[idx] == keys) if len(level.keys) else np.zeros(len(keys), bool)
    return found, idx


def _roots_for(G: Graph, use_orbits: bool) -> np.ndarray:
    if use_orbits:
        reps = orbit_representatives(G)
        if reps is not None:
            return reps
    vc = G.vertex_codes()
    if G.bipartite:
        # every cycle of a bipartite graph passes through a point
        pts = vc[G.is_point(vc)]
        lines = vc[~G.is_point(vc)]
        return pts if len(pts) <= len(lines) else lines
    return vc


def orbit_representatives(G: Graph) -> np.ndarray | None:
    """Vertex codes meeting every orbit of the known automorphisms of G.

    For bipartite graphs only one side is returned when that suffices for
    cycle detection (every cycle meets both sides).
    """
    if G.transitive_reps is not None:
        reps = np.asarray(G.transitive_reps, dtype=np.int64)
        if G.bipartite:
            pts = reps[G.is_point(reps)]
            if len(pts):
                return pts
        return reps
    if G.automorphisms:
        return orbits_from_generators(G, G.automorphisms, points_only=G.bipartite)
    return None


def orbits_from_generators(G: Graph, gens, points_only: bool = False) -> np.ndarray:
    """Smallest code of each orbit of the group generated by ``gens``."""
    vc = G.vertex_codes()
    if points_only:
        vc = vc[G.is_point(vc)]
    n = len(vc)
    rows, cols = [], []
    for g in gens:
        for s in range(0, n, 1 << 20):
            blk = vc[s:s + (1 << 20)]
            img = np.asarray(g(blk), dtype=np.int64)
            j = np.searchsorted(vc, img)
            j = np.minimum(j, n - 1)
            if not np.all(vc[j] == img):
                raise ValueError("generator does not preserve the vertex set")
            rows.append(np.arange(s, s + len(blk)))
            cols.append(j)
    if not rows:
        return vc
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    A = csr_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n))
    _, lab = connected_components(A, directed=False)
    first = np.full(lab.max() + 1, n, dtype=np.int64)
    np.minimum.at(first, lab, np.arange(n))
    return vc[np.sort(first)]


def _expand(G: Graph, level: _Level, M: int, incoming: bool = False):
    roots = level.keys // M
    codes = level.keys % M
    t = G.in_neighbor_table(codes) if incoming else G.neighbor_table(codes)
    D = t.shape[1]
    src = np.repeat(np.arange(len(codes)), D)
    nb = t.ravel()
    keep = (nb >= 0) & (nb != np.repeat(codes, D))
    src, nb = src[keep], nb[keep]
    return src, nb, roots[src] * M + nb, codes


def shortest_cycles(G: Graph, roots, cap: int | None = None, bound: int | None = None,
                    budget: int = 10**9, want_hits: bool = False, track_levels: bool = False):
    """Layered BFS from each root; returns (best length, hits, levels).

    Every reported length is the length of a closed walk that contains a
    cycle, so the minimum is an upper bound on the girth, and it is exact
    when the roots meet a shortest cycle.  ``bound`` lets the caller stop
    once no shorter cycle can appear.  Cycles longer than ``cap`` are not
    searched for.
    """
    roots = np.unique(np.asarray(roots, dtype=np.int64))
    M = int(G.code_bound())
    best = np.inf if bound is None else bound
    hits: list[CycleHit] = []
    spent = 0
    levels_out = []
    # split roots so that one BFS level of a batch stays within memory
    deg = max(1, G.neighbor_table(roots[:1]).shape[1]) if len(roots) else 1
    depth = cap // 2 + 1 if cap is not None else 64
    ball = min(G.num_vertices(), deg ** min(depth, 40)) * deg
    step = max(1, _BATCH_CANDIDATES // ball)
    for start in range(0, len(roots), step):
        batch = roots[start:start + step]
        prev = _Level(np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.int64))
        cur = _Level(batch * M + batch, np.full(len(batch), -1), np.full(len(batch), -1))
        levels = [cur]
        d = 0
        while len(cur.keys):
            if cap is not None and 2 * d + 1 > cap and 2 * d > cap:
                break
            if 2 * d >= best:
                break
            src, nb, keys, codes = _expand(G, cur, M)
            spent += len(nb)
            if spent > budget:
                raise BudgetExceeded(f"BFS touched more than {budget} vertices")
            par = cur.parent[src]
            back = nb == par
            src, nb, keys, par = src[~back], nb[~back], keys[~back], par[~back]
            br_src = np.where(cur.branch[src] < 0, nb, cur.branch[src])
            # closing into the previous level
            f_prev, i_prev = _lookup(prev, keys)
            if f_prev.any():
                L = 2 * d
                if L < best or want_hits:
                    best = min(best, L)
                    if want_hits:
                        for s, j in zip(np.nonzero(f_prev)[0][:64], i_prev[f_prev][:64]):
                            hits.append(CycleHit(L, int(cur.keys[src[s]] // M), bool(prev.branch[j] != br_src[s]),
                                                 int(codes[src[s]]), int(nb[s])))
            # closing inside the current level
            f_cur, i_cur = _lookup(cur, keys)
            if f_cur.any():
                L = 2 * d + 1
                if L < best or want_hits:
                    best = min(best, L)
                    if want_hits:
                        for s, j in zip(np.nonzero(f_cur)[0][:64], i_cur[f_cur][:64]):
                            hits.append(CycleHit(L, int(cur.keys[src[s]] // M), bool(cur.branch[j] != br_src[s]),
                                                 int(codes[src[s]]), int(nb[s])))
            new = ~(f_prev | f_cur)
            keys, src_n, br_n = keys[new], src[new], br_src[new]
            order = np.argsort(keys, kind="stable")
            keys, src_n, br_n = keys[order], src_n[order], br_n[order]
            if len(keys):
                first = np.ones(len(keys), dtype=bool)
                first[1:] = keys[1:] != keys[:-1]
                if not first.all():
                    L = 2 * d + 2
                    if L < best or want_hits:
                        best = min(best, L)
                        if want_hits:
                            dup = np.nonzero(~first)[0][:64]
                            for s in dup:
                                k0 = s - 1
                                while not first[k0]:
                                    k0 -= 1
                                hits.append(CycleHit(L, int(keys[s] // M), bool(br_n[k0] != br_n[s]),
                                                     int(codes[src_n[k0]]), int(codes[src_n[s]]),
                                                     int(keys[s] % M)))
                nxt = _Level(keys[first], codes[src_n[first]], br_n[first])
            else:
                nxt = _Level(keys, keys, keys)
            prev, cur = cur, nxt
            if track_levels:
                levels.append(cur)
            d += 1
            if 2 * d >= best:
                break
        if track_levels:
            levels_out.append((batch, levels))
    return best, hits, levels_out


def girth(G: Graph, cap: int | None = None, use_orbits: bool = False, roots=None, budget: int = 10**9):
    """Length of a shortest cycle; ``AboveCap(cap)`` if none of length <= cap.

    By default BFS starts at every vertex (every point for bipartite graphs).
    ``use_orbits`` switches to orbit representatives when the graph carries
    a transitivity declaration or verified automorphisms.
    """
    if G.num_vertices() == 0:
        raise EmptyGraph("graph has no vertices")
    if roots is None:
        roots = _roots_for(G, use_orbits)
    best, _, _ = shortest_cycles(G, roots, cap=cap, budget=budget)
    if best == np.inf or (cap is not None and best > cap):
        return AboveCap(cap)
    return int(best)


def shortest_cycle_through(G: Graph, root: int, cap: int) -> int | AboveCap:
    """Length of a shortest cycle containing ``root``."""
    _, hits, _ = shortest_cycles(G, [root], cap=cap + 2, want_hits=True)
    through = [h.length for h in hits if h.through_root and h.length <= cap]
    return min(through) if through else AboveCap(cap)


def _path_to_root(G: Graph, v: int, root: int, depth_hint: int = 64) -> list[int]:
    """Shortest path v -> root by a fresh BFS from root (small radius)."""
    dist = bfs_distances(G, root, limit=depth_hint)
    path = [v]
    while path[-1] != root:
        cur = path[-1]
        nb = G.neighbors(cur)
        path.append(min((x for x in nb if dist.get(x, 1 << 30) == dist[cur] - 1)))
    return path


def bfs_distances(G: Graph, root: int, limit: int = 1 << 30, incoming: bool = False) -> dict[int, int]:
    dist = {int(root): 0}
    frontier = np.array([root], dtype=np.int64)
    d = 0
    while len(frontier) and d < limit:
        t = G.in_neighbor_table(frontier) if incoming else G.neighbor_table(frontier)
        cand = np.unique(t[t >= 0])
        new = [int(c) for c in cand if int(c) not in dist]
        d += 1
        for c in new:
            dist[c] = d
        frontier = np.array(new, dtype=np.int64)
    return dist


def cycle_witness(G: Graph, hit: CycleHit) -> list[int]:
    """Reconstruct the vertex sequence of a through-root cycle hit."""
    r = hit.root
    pu = _path_to_root(G, hit.u, r)
    pw = _path_to_root(G, hit.w, r)
    if hit.child >= 0:
        cyc = list(reversed(pu)) + [hit.child] + pw[:-1]
    else:
        cyc = list(reversed(pu)) + pw[:-1]
    return cyc


def is_cycle(G: Graph, seq: list[int]) -> bool:
    if len(set(seq)) != len(seq) or len(seq) < 3:
        return False
    for a, b in zip(seq, seq[1:] + seq[:1]):
        if b not in set(G.neighbors(a)):
            return False
    return True


# -- eccentricity, diameter, components -------------------------------------------

def eccentricities(G: Graph, roots, budget: int = DEFAULT_BUDGET) -> tuple[np.ndarray, np.ndarray]:
    """(eccentricity, reached vertex count) of each root within its component."""
    roots = np.asarray(roots, dtype=np.int64)
    M = int(G.code_bound())
    ecc = np.zeros(len(roots), dtype=np.int64)
    size = np.ones(len(roots), dtype=np.int64)
    directed = G.directed
    step = max(1, _BATCH_CANDIDATES // max(G.num_vertices(), 1) // 4)
    for start in range(0, len(roots), step):
        batch = roots[start:start + step]
        rid = np.arange(start, start + len(batch))
        cur = rid * M + batch
        prev = np.zeros(0, np.int64)
        seen = cur.copy() if directed else None
        d = 0
        touched = 0
        while len(cur):
            idx = cur // M
            t = G.neighbor_table(cur % M)
            D = t.shape[1]
            nb = t.ravel()
            kk = np.repeat(idx, D) * M + nb
            kk = np.unique(kk[nb >= 0])
            if directed:
                kk = kk[~np.isin(kk, seen, assume_unique=True)]
                seen = np.union1d(seen, kk)
            else:
                kk = kk[~np.isin(kk, prev, assume_unique=True) & ~np.isin(kk, cur, assume_unique=True)]
            touched += len(kk)
            if touched > budget * len(batch):
                raise BudgetExceeded(f"component exceeds the vertex budget {budget}")
            prev, cur = cur, kk
            d += 1
            if len(cur):
                r = cur // M
                ecc[r] = d
                size += np.bincount(r, minlength=len(roots))
    return ecc, size


def diameter_of_component(G: Graph, v, use_orbits: bool = False, budget: int = DEFAULT_BUDGET) -> int:
    """Exact diameter of the component of ``v``.

    With ``use_orbits`` and a transitivity declaration only one vertex per
    side is swept; otherwise a double sweep gives a lower bound and all
    vertices of the component are then swept.
    """
    c = G.code(v) if not isinstance(v, (int, np.integer)) else int(v)
    if use_orbits and G.transitive_reps is not None:
        # each side is a single orbit: v and one neighbour of v suffice
        reps = [c] + G.neighbors(c)[:1] if G.bipartite else [c]
        ecc, _ = eccentricities(G, reps, budget)
        return int(ecc.max())
    comp = component_of(G, c, budget)
    lo = _double_sweep(G, c, budget)
    e_all, _ = eccentricities(G, comp, budget)
    assert e_all.max() >= lo
    return int(e_all.max())


def _double_sweep(G: Graph, c: int, budget: int) -> int:
    """Lower bound on the diameter from two BFS sweeps."""
    dist = bfs_distances(G, c)
    far = max(dist, key=lambda x: (dist[x], -x))
    return max(bfs_distances(G, far).values())


def component_of(G: Graph, v: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    seen = np.array([v], dtype=np.int64)
    frontier = seen
    while len(frontier):
        t = G.neighbor_table(frontier)
        if G.directed:
            t = np.concatenate([t, G.in_neighbor_table(frontier)], axis=1)
        cand = np.unique(t[t >= 0])
        new = np.setdiff1d(cand, seen, assume_unique=True)
        seen = np.union1d(seen, new)
        if len(seen) > budget:
            raise BudgetExceeded(f"component exceeds the vertex budget {budget}")
        frontier = new
    return seen


@dataclass
class Components:
    count: int
    representatives: list[int]
    sizes: list[int]
    labels: np.ndarray = field(repr=False, default=None)
    codes: np.ndarray = field(repr=False, default=None)


def adjacency_csr(G: Graph, budget: int = DEFAULT_BUDGET):
    vc = G.vertex_codes()
    n = len(vc)
    if n > budget:
        raise BudgetExceeded(f"{n} vertices exceed the budget {budget}")
    rows, cols = [], []
    for s in range(0, n, 1 << 18):
        blk = vc[s:s + (1 << 18)]
        t = G.neighbor_table(blk)
        D = t.shape[1]
        r = np.repeat(np.arange(s, s + len(blk)), D)
        nb = t.ravel()
        keep = nb >= 0
        j = np.searchsorted(vc, nb[keep])
        rows.append(r[keep])
        cols.append(j)
    r = np.concatenate(rows) if rows else np.zeros(0, np.int64)
    c = np.concatenate(cols) if cols else np.zeros(0, np.int64)
    return csr_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(n, n)), vc


def components(G: Graph, budget: int = DEFAULT_BUDGET, strong: bool = False) -> Components:
    """Connected components; representatives are the smallest code in each."""
    A, vc = adjacency_csr(G, budget)
    k, lab = connected_components(A, directed=G.directed, connection="strong" if strong else "weak")
    first = np.full(k, len(vc), dtype=np.int64)
    np.minimum.at(first, lab, np.arange(len(vc)))
    order = np.argsort(first)
    remap = np.empty(k, dtype=np.int64)
    remap[order] = np.arange(k)
    lab = remap[lab]
    sizes = np.bincount(lab, minlength=k)
    return Components(int(k), [int(vc[first[o]]) for o in order], [int(s) for s in sizes], lab, vc)


# -- cycles of a prescribed length ------------------------------------------------

@dataclass
class CycleSearch:
    status: str                      # Yes | No | Inconclusive
    witness: list | None = None
    spent: int = 0

    def __bool__(self):
        return self.status == "Yes"


def contains_cycle_of_length(G: Graph, L: int, budget: int = 10**8, use_orbits: bool = True) -> CycleSearch:
    """Search for a cycle with exactly L vertices.

    Roots are orbit representatives when the graph carries a declaration or
    verified automorphisms, else every vertex; a ``No`` answer is only given
    when the search space was exhausted.
    """
    if L < 3 or (G.bipartite and L % 2):
        return CycleSearch("No")
    roots = _roots_for(G, use_orbits)
    best, hits, _ = shortest_cycles(G, roots, cap=L, want_hits=True, budget=10**10)
    if best == np.inf or best > L:
        return CycleSearch("No", spent=0)
    exact = [h for h in hits if h.length == L and h.through_root]
    for h in exact[:8]:
        w = cycle_witness(G, h)
        if is_cycle(G, w) and len(w) == L:
            return CycleSearch("Yes", w)
    reps = orbit_representatives(G) if use_orbits else None
    return _path_cycle_search(G, L, roots, budget, min_rooted=reps is None)


def _path_cycle_search(G: Graph, L: int, roots, budget: int, min_rooted: bool) -> CycleSearch:
    """Exhaustive search for an L-cycle through one of ``roots``.

    Simple paths of L-1 edges are grown breadth first, a batch of roots at a
    time.  With ``min_rooted`` every root-side vertex on the path must exceed
    the root, so each cycle is met only from its smallest such vertex and
    passing all vertices (all points, for bipartite graphs) as roots is exact.
    """
    roots = np.asarray(roots, dtype=np.int64)
    spent = 0
    batch = max(1, min(len(roots), 256))
    for s in range(0, len(roots), batch):
        paths = roots[s:s + batch, None]
        for step in range(1, L + 1):
            t = G.neighbor_table(paths[:, -1])
            if step == L:
                # paths now hold L vertices; close the cycle
                hit = np.nonzero(np.any(t == paths[:, :1], axis=1))[0]
                if len(hit):
                    return CycleSearch("Yes", [int(x) for x in paths[hit[0]]], spent)
                break
            P, D = t.shape
            ext = np.repeat(paths, D, axis=0)
            v = t.ravel()
            ok = v >= 0
            for c in range(paths.shape[1]):
                ok &= ext[:, c] != v
            if min_rooted:
                big = v > ext[:, 0]
                ok &= big | ~G.is_point(v) if G.bipartite else big
            paths = np.concatenate([ext[ok], v[ok, None]], axis=1)
            spent += len(paths)
            if spent > budget:
                return CycleSearch("Inconclusive", spent=spent)
            if not len(paths):
                break
    return CycleSearch("No", spent=spent)


def to_explicit(G: Graph, budget: int = 20000) -> tuple[ExplicitGraph, np.ndarray]:
    return ExplicitGraph.from_graph(G, budget)
