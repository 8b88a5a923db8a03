"""Edge decompositions of K_{q^n,q^n} by BΓ_n and of K_{q^n} by loopless Γ_n.

A pair (p, l) lies in exactly one graph of the family {f_i + a_i}: the shift
a_i = p_i + l_i - f_i(p, l) is determined coordinatewise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, EvenCharacteristic, SameVertex
from .fndsl import Var
from .graphcore import ExplicitGraph, ImplicitGraph, VertexId, is_isomorphic

PAIR_LIMIT = 10**7
ISO_LIMIT = 2000


def _shifts(G: ImplicitGraph, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Shift vectors (N, n-1) for vertex codes a (p/x role) and b (l/y role)."""
    F = G.F
    _, ca = G.decode(a)
    _, cb = G.decode(b)
    r0, r1 = G.roles
    env = {}
    for i in range(1, G.n + 1):
        env[Var(r0, i)] = ca[i - 1]
        env[Var(r1, i)] = cb[i - 1]
    out = np.empty((len(a), G.n - 1), dtype=np.int64)
    for i in range(2, G.n + 1):
        f = np.broadcast_to(G._compiled[i - 2](env), a.shape)
        out[:, i - 2] = F.vsub(F.vadd(ca[i - 1], cb[i - 1]), f)
    return out


def shift_class(G: ImplicitGraph, u: VertexId, v: VertexId) -> tuple[int, ...]:
    """(a_2, ..., a_n) with u ~ v in the graph of the shifted system."""
    if G.bipartite and u.side == "L":
        u, v = v, u
    if not G.bipartite and u == v:
        raise SameVertex("shift class of a vertex with itself")
    s = _shifts(G, np.array([G.code(u)]), np.array([G.code(v)]))
    return tuple(int(x) for x in s[0])


@dataclass
class DecompositionReport:
    mode: str
    classes: int
    expected_classes: int
    class_sizes: list[int]
    expected_size: int
    pairs: int
    base_matches: bool
    isomorphic: str                     # "exact", "fingerprint match", "failed"
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.classes == self.expected_classes and self.base_matches
                and set(self.class_sizes) == {self.expected_size} and self.isomorphic != "failed")


def _fingerprint(E: ExplicitGraph):
    return sorted(E.degree_profile().items())


def decomposition_check(G: ImplicitGraph, mode: str | None = None, iso_limit: int = ISO_LIMIT) -> DecompositionReport:
    mode = mode or G.kind
    F, n = G.F, G.n
    N = F.q**n
    if mode == "ordinary" and F.p == 2:
        raise EvenCharacteristic("the loopless decomposition needs 2 to be a unit")
    if mode == "bipartite":
        if N * N > PAIR_LIMIT:
            raise BudgetExceeded(f"{N * N} pairs exceed {PAIR_LIMIT}")
        a = np.repeat(np.arange(N), N)
        b = np.tile(np.arange(N), N) + N
        size = F.q ** (n + 1)
    else:
        if N * (N - 1) // 2 > PAIR_LIMIT:
            raise BudgetExceeded("too many pairs")
        a, b = np.triu_indices(N, 1)
        size = (F.q ** (n + 1) - F.q) // 2
    S = _shifts(G, a, b)
    key = np.zeros(len(a), dtype=np.int64)
    for c in range(S.shape[1]):
        key = key * F.q + S[:, c]
    vals, inv, counts = np.unique(key, return_inverse=True, return_counts=True)
    base = {tuple(e) for e in np.sort(np.stack([a[key == 0], b[key == 0]], 1), axis=1).tolist()}
    ge = G.edges()
    ge = ge[ge[:, 0] != ge[:, 1]]
    base_ok = base == {tuple(e) for e in np.sort(ge, axis=1).tolist()}
    n_vert = 2 * N if mode == "bipartite" else N
    sides = (np.arange(n_vert) < N).astype(np.int8) if mode == "bipartite" else None
    ref = ExplicitGraph(n_vert, ge, G.kind, name=G.name, sides=sides)
    status = "exact" if n_vert <= iso_limit else "fingerprint match"
    for ci in range(len(vals)):
        sel = inv.ravel() == ci
        E = ExplicitGraph(n_vert, np.stack([a[sel], b[sel]], 1), G.kind, sides=sides)
        if status == "exact":
            if not is_isomorphic(E, ref):
                status = "failed"
                break
        elif _fingerprint(E) != _fingerprint(ref):
            status = "failed"
            break
    return DecompositionReport(mode, len(vals), F.q ** (n - 1), sorted(set(counts.tolist())),
                               size, len(a), base_ok, status)


__all__ = ["shift_class", "decomposition_check", "DecompositionReport"]
