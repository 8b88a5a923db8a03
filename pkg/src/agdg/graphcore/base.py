"""Graph representations sharing one interface.

Every graph hands out vertices as non-negative integer codes and answers
``neighbor_table(codes)`` with an (m, D) array of neighbour codes padded by -1.
All traversal code in this package is written against that interface only.

Code layout for algebraically defined graphs: a vertex with coordinates
(c_1..c_n) on side s (0 = point/mono, 1 = line) has code
``s * q**n + sum(c_i * q**(i-1))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import EmptySet, NotSymmetric, RestrictedAlpha, TriangularityViolation
from ..ffield import GF
from ..fndsl import FnExpr, Var, check_symmetric, compile_fn

SIDE_NAMES = ("P", "L")


@dataclass(frozen=True)
class VertexId:
    side: str                  # "P", "L" or "M"
    coords: tuple[int, ...]

    def __str__(self):
        body = ",".join(str(c) for c in self.coords)
        if self.side == "P":
            return f"({body})"
        if self.side == "L":
            return f"[{body}]"
        return f"<{body}>"


def point(*coords) -> VertexId:
    return VertexId("P", tuple(int(c) for c in coords))


def line(*coords) -> VertexId:
    return VertexId("L", tuple(int(c) for c in coords))


def mono(*coords) -> VertexId:
    return VertexId("M", tuple(int(c) for c in coords))


class Graph:
    """Common interface; subclasses fill in the abstract methods."""

    kind = "ordinary"          # bipartite | ordinary | digraph
    name = "graph"
    loops_allowed = False
    F: GF | None = None
    # codes of vertices forming a set of orbit representatives, declared by
    # catalog constructions whose transitivity is known
    transitive_reps: list[int] | None = None
    # verified automorphisms (code array -> code array) used to derive orbits
    automorphisms: list[Callable[[np.ndarray], np.ndarray]] | None = None

    @property
    def bipartite(self) -> bool:
        return self.kind == "bipartite"

    @property
    def directed(self) -> bool:
        return self.kind == "digraph"

    def vertex_codes(self) -> np.ndarray:
        raise NotImplementedError

    def num_vertices(self) -> int:
        return len(self.vertex_codes())

    def code_bound(self) -> int:
        """Strict upper bound on vertex codes."""
        raise NotImplementedError

    def neighbor_table(self, codes: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def in_neighbor_table(self, codes: np.ndarray) -> np.ndarray:
        if self.directed:
            raise NotImplementedError
        return self.neighbor_table(codes)

    def contains(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        vc = self.vertex_codes()
        idx = np.searchsorted(vc, codes)
        idx = np.minimum(idx, len(vc) - 1)
        return (codes >= 0) & (vc[idx] == codes)

    def is_point(self, codes) -> np.ndarray:
        return np.zeros(np.shape(codes), dtype=bool) if not self.bipartite else self._is_point(codes)

    def _is_point(self, codes):
        raise NotImplementedError

    def vertex(self, code: int) -> VertexId:
        return VertexId("M", (int(code),))

    def code(self, v: VertexId) -> int:
        return int(v.coords[0])

    def neighbors(self, v) -> list:
        """Neighbours of a single vertex (a code or a VertexId)."""
        as_id = isinstance(v, VertexId)
        c = self.code(v) if as_id else int(v)
        row = self.neighbor_table(np.array([c], dtype=np.int64))[0]
        row = [int(x) for x in row if x >= 0]
        return [self.vertex(x) for x in row] if as_id else row

    def degree_profile(self) -> dict[int, int]:
        vc = self.vertex_codes()
        out: dict[int, int] = {}
        for start in range(0, len(vc), 1 << 16):
            t = self.neighbor_table(vc[start:start + (1 << 16)])
            deg = (t >= 0).sum(axis=1)
            for d, c in zip(*np.unique(deg, return_counts=True)):
                out[int(d)] = out.get(int(d), 0) + int(c)
        return dict(sorted(out.items()))

    def edges(self) -> np.ndarray:
        """(E, 2) array of edges u < v (arcs u -> v for digraphs); loops (u, u) kept."""
        vc = self.vertex_codes()
        chunks = []
        for start in range(0, len(vc), 1 << 16):
            block = vc[start:start + (1 << 16)]
            t = self.neighbor_table(block)
            src = np.repeat(block, t.shape[1])
            dst = t.ravel()
            keep = dst >= 0
            if not self.directed:
                keep &= src <= dst
            chunks.append(np.stack([src[keep], dst[keep]], axis=1))
        if not chunks:
            return np.zeros((0, 2), dtype=np.int64)
        e = np.concatenate(chunks)
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def num_edges(self) -> int:
        return len(self.edges())

    def label(self, code: int) -> str:
        return str(self.vertex(code))


# -- algebraically defined graphs --------------------------------------------

class ImplicitGraph(Graph):
    """BΓ_n, Γ_n or the directed variant, given by a triangular system.

    ``fs[i]`` defines coordinate i + 2.  ``coord_sets`` optionally restricts
    coordinate j (1-based) on side s to a set of field elements, keyed by
    (s, j).  Restricting coordinate 1 gives the induced subgraphs BΓ_n[A, B].
    """

    def __init__(self, F: GF, n: int, fs: Sequence[FnExpr], kind: str = "bipartite",
                 loops_allowed: bool = False, coord_sets: dict | None = None,
                 name: str | None = None, check: bool = True):
        if len(fs) != n - 1:
            raise ValueError(f"dimension {n} needs {n - 1} defining functions, got {len(fs)}")
        if kind not in ("bipartite", "ordinary", "digraph"):
            raise ValueError(kind)
        self.F = F
        self.n = n
        self.kind = kind
        self.loops_allowed = loops_allowed
        roles = ("p", "l") if kind == "bipartite" else ("x", "y")
        self.roles = roles
        self.fs = [_rename_roles(f, roles) for f in fs]
        for i, f in enumerate(self.fs):
            if f.max_index() >= i + 2:
                raise TriangularityViolation(f"f_{i + 2} = {f} uses a coordinate >= {i + 2}")
        if kind == "ordinary" and check:
            for i, f in enumerate(self.fs):
                g = FnExpr(f.root, "ordinary", i + 2, None, F)
                if not check_symmetric(g, F):
                    raise NotSymmetric(f"f_{i + 2} = {f} is not symmetric")
        self._compiled = [compile_fn(f, F) for f in self.fs]
        self.coord_sets = {}
        for key, vals in (coord_sets or {}).items():
            arr = np.unique(np.asarray(list(vals), dtype=np.int64))
            if len(arr) == 0:
                raise EmptySet(f"coordinate set {key} is empty")
            self.coord_sets[key] = arr
        self.name = name or f"{'BΓ' if kind == 'bipartite' else 'Γ'}_{n}({F})"
        self._qn = F.q**n
        self._vcache: np.ndarray | None = None
        self._own = [Var(roles[0], i) for i in range(n + 1)]
        self._oth = [Var(roles[1], i) for i in range(n + 1)]

    # -- codes ------------------------------------------------------------
    def code_bound(self) -> int:
        return 2 * self._qn if self.bipartite else self._qn

    def decode(self, codes) -> tuple[np.ndarray, np.ndarray]:
        codes = np.asarray(codes, dtype=np.int64)
        side = codes // self._qn
        rest = codes % self._qn
        coords = np.empty((self.n,) + codes.shape, dtype=np.int64)
        q = self.F.q
        for i in range(self.n):
            coords[i] = rest % q
            rest = rest // q
        return side, coords

    def encode(self, side, coords) -> np.ndarray:
        q = self.F.q
        acc = np.zeros(np.shape(coords[0]), dtype=np.int64)
        for i in range(self.n - 1, -1, -1):
            acc = acc * q + coords[i]
        return acc + np.asarray(side, dtype=np.int64) * self._qn

    def vertex(self, code: int) -> VertexId:
        side, coords = self.decode(np.array([code]))
        s = "M" if not self.bipartite else SIDE_NAMES[int(side[0])]
        return VertexId(s, tuple(int(c) for c in coords[:, 0]))

    def code(self, v: VertexId) -> int:
        if len(v.coords) != self.n:
            raise ValueError(f"{v} does not have {self.n} coordinates")
        side = 1 if v.side == "L" else 0
        if self.bipartite and v.side == "M":
            raise ValueError("bipartite graphs have points and lines")
        return int(self.encode(np.array(side), np.array(v.coords).reshape(self.n, 1))[0])

    def _is_point(self, codes):
        return np.asarray(codes) < self._qn

    def allowed(self, side: int, coord: int) -> np.ndarray:
        """Allowed values of coordinate ``coord`` (1-based) on ``side``."""
        s = side if self.bipartite else 0
        got = self.coord_sets.get((s, coord))
        return self.F.elements() if got is None else got

    def vertex_codes(self) -> np.ndarray:
        if self._vcache is None:
            sides = (0, 1) if self.bipartite else (0,)
            parts = []
            q = self.F.q
            for s in sides:
                codes = np.zeros(1, dtype=np.int64)
                for j in range(self.n):
                    vals = self.allowed(s, j + 1)
                    codes = (codes[:, None] + vals[None, :] * q**j).ravel()
                parts.append(np.sort(codes) + s * self._qn)
            self._vcache = np.concatenate(parts)
        return self._vcache

    def num_vertices(self) -> int:
        sides = (0, 1) if self.bipartite else (0,)
        total = 0
        for s in sides:
            c = 1
            for j in range(self.n):
                c *= len(self.allowed(s, j + 1))
            total += c
        return total

    def contains(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        ok = (codes >= 0) & (codes < self.code_bound())
        if not self.coord_sets:
            return ok
        side, coords = self.decode(np.where(ok, codes, 0))
        for (s, j), vals in self.coord_sets.items():
            on_side = side == s if self.bipartite else np.ones_like(ok)
            ok &= ~on_side | np.isin(coords[j - 1], vals)
        return ok

    # -- neighbour generation ------------------------------------------------
    def solve(self, vcoords: np.ndarray, alphas: np.ndarray, own_first: bool = True) -> np.ndarray:
        """Triangular solve for all (vertex, alpha) pairs.

        vcoords is (n, m); returns (n, m, a).  With own_first the given
        vertex plays the p/x role, otherwise the l/y role.
        """
        F = self.F
        n = self.n
        m = vcoords.shape[1]
        a = len(alphas)
        w = np.empty((n, m, a), dtype=np.int64)
        w[0] = alphas[None, :]
        mine, theirs = (self._own, self._oth) if own_first else (self._oth, self._own)
        env: dict = {}
        for i in range(1, n):
            env[mine[i]] = vcoords[i - 1][:, None]
            env[theirs[i]] = w[i - 1]
            val = self._compiled[i - 1](env)
            w[i] = F.vsub(np.broadcast_to(val, (m, a)), vcoords[i][:, None])
        return w

    def _table_for_side(self, codes, side: int, incoming: bool = False) -> np.ndarray:
        _, vc = self.decode(codes)
        if self.bipartite:
            other = 1 - side
            alphas = self.allowed(other, 1)
            w = self.solve(vc, alphas, own_first=(side == 0))
            out = self.encode(np.full(w.shape[1:], other), w)
        else:
            alphas = self.allowed(0, 1)
            w = self.solve(vc, alphas, own_first=not incoming)
            out = self.encode(np.zeros(w.shape[1:], dtype=np.int64), w)
            if not self.loops_allowed:
                out = np.where(out == codes[:, None], -1, out)
        if self.coord_sets:
            out = np.where(self.contains(out), out, -1)
        return out

    def neighbor_table(self, codes, incoming: bool = False) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).ravel()
        if not self.bipartite:
            return self._table_for_side(codes, 0, incoming)
        pts = codes < self._qn
        if pts.all():
            return self._table_for_side(codes, 0)
        if not pts.any():
            return self._table_for_side(codes, 1)
        ta = self._table_for_side(codes[pts], 0)
        tb = self._table_for_side(codes[~pts], 1)
        width = max(ta.shape[1], tb.shape[1])
        out = np.full((len(codes), width), -1, dtype=np.int64)
        out[pts, :ta.shape[1]] = ta
        out[~pts, :tb.shape[1]] = tb
        return out

    def in_neighbor_table(self, codes) -> np.ndarray:
        if self.directed:
            return self.neighbor_table(codes, incoming=True)
        return self.neighbor_table(codes)

    def unique_neighbor(self, v: VertexId, alpha: int) -> VertexId:
        """The neighbour of v whose first coordinate is alpha."""
        side = 1 if v.side == "L" else 0
        other = 1 - side if self.bipartite else 0
        allowed = self.allowed(other, 1)
        if alpha not in set(allowed.tolist()):
            raise RestrictedAlpha(f"{alpha} is outside the admissible first coordinates")
        vc = np.array(v.coords, dtype=np.int64).reshape(self.n, 1)
        w = self.solve(vc, np.array([alpha], dtype=np.int64), own_first=(side == 0))
        s = ("P", "L")[other] if self.bipartite else "M"
        return VertexId(s, tuple(int(x) for x in w[:, 0, 0]))

    def with_system(self, fs, name=None) -> "ImplicitGraph":
        """Same field, kind and restrictions with a different system."""
        n = len(fs) + 1
        cs = {k: v for k, v in self.coord_sets.items() if k[1] <= n}
        return ImplicitGraph(self.F, n, fs, self.kind, self.loops_allowed, cs, name, check=False)


def _rename_roles(f: FnExpr, roles: tuple[str, str]) -> FnExpr:
    from ..fndsl import Node
    ctx = "bipartite" if roles == ("p", "l") else "ordinary"

    def go(n: Node) -> Node:
        if n.op == "var":
            v = n.value
            if v.role in ("p", "x", "l", "y"):
                return Node("var", value=Var(roles[v.side], v.index))
            return n
        if not n.args:
            return n
        return Node(n.op, tuple(go(a) for a in n.args), n.value)
    return FnExpr(go(f.root), ctx, f.arity, f.r, f.field)


# -- custom adjacency ------------------------------------------------------------

class SolverGraph(Graph):
    """Ordinary graph on GF(q)^n with a user supplied vectorised neighbour rule.

    ``rule(coords)`` receives an (n, m) coordinate array and returns an
    (n, m, D) array of neighbour coordinates, or a tuple (coords, valid mask).
    """

    def __init__(self, F: GF, n: int, rule, name: str = "graph", loops_allowed: bool = False):
        self.F = F
        self.n = n
        self.rule = rule
        self.name = name
        self.loops_allowed = loops_allowed
        self._qn = F.q**n

    def code_bound(self):
        return self._qn

    def vertex_codes(self):
        return np.arange(self._qn, dtype=np.int64)

    def num_vertices(self):
        return self._qn

    def contains(self, codes):
        codes = np.asarray(codes)
        return (codes >= 0) & (codes < self._qn)

    decode = ImplicitGraph.decode
    encode = ImplicitGraph.encode

    def vertex(self, code):
        _, c = self.decode(np.array([code]))
        return VertexId("M", tuple(int(x) for x in c[:, 0]))

    def code(self, v):
        return int(self.encode(0, np.array(v.coords).reshape(self.n, 1))[0])

    def neighbor_table(self, codes):
        codes = np.asarray(codes, dtype=np.int64).ravel()
        _, vc = self.decode(codes)
        res = self.rule(vc)
        mask = None
        if isinstance(res, tuple):
            res, mask = res
        out = self.encode(0, res)
        if mask is not None:
            out = np.where(mask, out, -1)
        if not self.loops_allowed:
            out = np.where(out == codes[:, None], -1, out)
        # a rule may produce the same neighbour twice; keep one copy
        srt = np.sort(out, axis=1)
        dup = np.zeros_like(srt, dtype=bool)
        dup[:, 1:] = (srt[:, 1:] == srt[:, :-1]) & (srt[:, 1:] >= 0)
        return np.where(dup, -1, srt)


# -- explicit graphs ---------------------------------------------------------------

class ExplicitGraph(Graph):
    """Graph on vertices 0..N-1 stored as a padded neighbour table."""

    def __init__(self, n: int, edges, kind: str = "ordinary", labels: Sequence[str] | None = None,
                 name: str = "graph", sides: np.ndarray | None = None, loops_allowed: bool = True):
        self.N = int(n)
        self.kind = kind
        self.name = name
        self.labels = list(labels) if labels is not None else None
        self.loops_allowed = loops_allowed
        self.sides = None if sides is None else np.asarray(sides, dtype=np.int8)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if kind != "digraph":
            loops = e[:, 0] == e[:, 1]
            e = np.concatenate([e, e[~loops][:, ::-1]])
        e = np.unique(e, axis=0) if len(e) else e
        self._out = _pad_adjacency(self.N, e[:, 0], e[:, 1])
        self._in = _pad_adjacency(self.N, e[:, 1], e[:, 0]) if kind == "digraph" else self._out

    def code_bound(self):
        return self.N

    def vertex_codes(self):
        return np.arange(self.N, dtype=np.int64)

    def num_vertices(self):
        return self.N

    def contains(self, codes):
        codes = np.asarray(codes)
        return (codes >= 0) & (codes < self.N)

    def neighbor_table(self, codes):
        return self._out[np.asarray(codes, dtype=np.int64).ravel()]

    def in_neighbor_table(self, codes):
        return self._in[np.asarray(codes, dtype=np.int64).ravel()]

    def _is_point(self, codes):
        if self.sides is None:
            return np.zeros(np.shape(codes), dtype=bool)
        return self.sides[np.asarray(codes)] == 0

    def vertex(self, code):
        return VertexId("M", (int(code),))

    def label(self, code):
        return self.labels[code] if self.labels else str(code)

    @classmethod
    def from_graph(cls, G: Graph, budget: int = 10**6) -> tuple["ExplicitGraph", np.ndarray]:
        """Materialise G; returns the explicit copy and the original codes."""
        vc = G.vertex_codes()
        if len(vc) > budget:
            from ..errors import BudgetExceeded
            raise BudgetExceeded(f"{len(vc)} vertices exceed the budget {budget}")
        t = G.neighbor_table(vc)
        idx = np.searchsorted(vc, np.where(t >= 0, t, 0))
        src = np.repeat(np.arange(len(vc)), t.shape[1])
        keep = (t >= 0).ravel()
        e = np.stack([src[keep], idx.ravel()[keep]], axis=1)
        sides = None
        if G.bipartite:
            sides = (~G.is_point(vc)).astype(np.int8)
        H = cls(len(vc), e, "digraph", [G.label(int(c)) for c in vc] if len(vc) <= 20000 else None,
                G.name, sides, G.loops_allowed)
        H.kind = G.kind
        return H, vc


def _pad_adjacency(n, src, dst) -> np.ndarray:
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    deg = np.bincount(src, minlength=n) if n else np.zeros(0, dtype=np.int64)
    width = int(deg.max()) if len(deg) and deg.max() > 0 else 1
    out = np.full((n, width), -1, dtype=np.int64)
    if len(src):
        start = np.concatenate([[0], np.cumsum(deg)[:-1]])
        pos = np.arange(len(src)) - start[src]
        out[src, pos] = dst
    return out


# -- induced subgraphs ----------------------------------------------------------

class Subgraph(Graph):
    """Induced subgraph of ``parent`` on a vertex set or a membership predicate."""

    def __init__(self, parent: Graph, members: np.ndarray | None = None,
                 predicate: Callable[[np.ndarray], np.ndarray] | None = None, name: str | None = None):
        if members is None and predicate is None:
            raise ValueError("need members or a predicate")
        self.parent = parent
        self.kind = parent.kind
        self.F = parent.F
        self.loops_allowed = parent.loops_allowed
        self.name = name or f"sub({parent.name})"
        self._members = None if members is None else np.unique(np.asarray(members, dtype=np.int64))
        self.predicate = predicate
        self.transitive_reps = None

    def code_bound(self):
        return self.parent.code_bound()

    def vertex_codes(self):
        if self._members is None:
            vc = self.parent.vertex_codes()
            keep = np.concatenate([self.predicate(vc[s:s + (1 << 20)])
                                   for s in range(0, len(vc), 1 << 20)])
            self._members = vc[keep]
        return self._members

    def contains(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        ok = self.parent.contains(codes)
        if self._members is None:
            return ok & self.predicate(np.where(ok, codes, 0))
        return ok & Graph.contains(self, codes)

    def neighbor_table(self, codes):
        t = self.parent.neighbor_table(codes)
        return np.where(self.contains(t), t, -1)

    def in_neighbor_table(self, codes):
        t = self.parent.in_neighbor_table(codes)
        return np.where(self.contains(t), t, -1)

    def _is_point(self, codes):
        return self.parent._is_point(codes)

    def vertex(self, code):
        return self.parent.vertex(code)

    def code(self, v):
        return self.parent.code(v)

    def label(self, code):
        return self.parent.label(code)

    def __getattr__(self, item):
        # expose decode/encode/n of an implicit parent
        if item in ("decode", "encode", "n", "fs", "solve", "allowed"):
            return getattr(self.parent, item)
        raise AttributeError(item)
