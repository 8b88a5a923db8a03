"""Monomial digraphs D(q;m,n) on GF(q)^2: a -> b iff a2 + b2 = a1^m b1^n."""

from __future__ import annotations

import math

import numpy as np

from .errors import BadExponent, BudgetExceeded, NotStronglyConnected
from .ffield import GF, field_of_order
from .fndsl import parse_fn
from .graphcore import Graph, ImplicitGraph, components, eccentricities


def build_digraph(q, m: int, n: int) -> ImplicitGraph:
    F = q if isinstance(q, GF) else field_of_order(int(q))
    if not (1 <= m <= F.q - 1 and 1 <= n <= F.q - 1):
        raise BadExponent(f"exponents must lie in 1..{F.q - 1}")
    f = parse_fn(f"x1^{m}*y1^{n}", 2, "ordinary", F)
    G = ImplicitGraph(F, 2, [f], "digraph", loops_allowed=True, name=f"D({F.q};{m},{n})")
    G.mono = (m, n)
    return G


def strong_components(D: Graph, budget: int = 10**6) -> dict:
    if D.num_vertices() > budget:
        raise BudgetExceeded(f"{D.num_vertices()} vertices exceed {budget}")
    C = components(D, strong=True)
    return {"count": C.count, "sizes": sorted(int(s) for s in C.sizes)}


def digraph_diameter(D: Graph, strict: bool = False, limit: int = 10**5):
    """Largest directed distance; ``math.inf`` when not strongly connected."""
    if D.num_vertices() > limit:
        raise BudgetExceeded(f"all-pairs BFS on {D.num_vertices()} vertices exceeds {limit}")
    if strong_components(D)["count"] != 1:
        if strict:
            raise NotStronglyConnected(D.name)
        return math.inf
    ecc, _ = eccentricities(D, D.vertex_codes())
    return int(ecc.max())


def unit_multipliers(q: int) -> list[int]:
    return [k for k in range(1, q) if math.gcd(k, q - 1) == 1]


def iso_sufficient(q: int, m1: int, n1: int, m2: int, n2: int) -> bool:
    """Is there a unit k mod q-1 with m2 = k m1 and n2 = k n1 (mod q-1)?"""
    r = q - 1
    return any((k * m1 - m2) % r == 0 and (k * n1 - n2) % r == 0 for k in unit_multipliers(q))


def gcd_multiset(q: int, m: int, n: int) -> tuple[int, int]:
    return tuple(sorted((math.gcd(m, q - 1), math.gcd(n, q - 1))))


def monomial_iso_predicted(q: int, m1: int, n1: int, m2: int, n2: int) -> bool:
    """Undirected B(q;m,n): isomorphic iff the gcd multisets agree."""
    return gcd_multiset(q, m1, n1) == gcd_multiset(q, m2, n2)


def subdigraph_census(D: Graph, L: int = 7, budget: int = 5 * 10**7) -> list[int]:
    """counts[l-1] = number of directed cycles of length l (loops are length 1).

    Each cycle is counted once, rooted at its smallest vertex: paths from a
    root only pass through larger vertices.
    """
    vc = D.vertex_codes()
    table = D.neighbor_table(vc)
    pos = np.full(int(D.code_bound()), -1, dtype=np.int64)
    pos[vc] = np.arange(len(vc))
    nb = np.where(table >= 0, pos[np.maximum(table, 0)], -1)     # compact indices
    counts = [0] * L
    spent = 0
    for s in range(len(vc)):
        counts[0] += int(np.sum(nb[s] == s))
        paths = np.array([[s]], dtype=np.int64)
        for length in range(2, L + 1):
            # extend every path by one vertex, then close the ones that return to s
            nxt = nb[paths[:, -1]]                               # (P, deg)
            P, deg = nxt.shape
            ext = np.repeat(paths, deg, axis=0)
            v = nxt.ravel()
            ok = v > s
            for c in range(paths.shape[1]):
                ok &= ext[:, c] != v
            paths = np.concatenate([ext[ok], v[ok, None]], axis=1)
            spent += len(paths)
            if spent > budget:
                raise BudgetExceeded(f"cycle census exceeded {budget} partial paths")
            if not len(paths):
                break
            counts[length - 1] += int(np.sum(nb[paths[:, -1]] == s))
    return counts


__all__ = [
    "build_digraph", "strong_components", "digraph_diameter", "iso_sufficient",
    "unit_multipliers", "subdigraph_census", "gcd_multiset", "monomial_iso_predicted",
]
