"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line, and the run ends with a summary of them.
Run standalone with ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import time

import numpy as np
import pytest

from agdg import dkq, hyper, spectra
from agdg.constructions import build_catalog
from agdg.ffield import field_of_order
from agdg.fndsl import parse_fn, permpoly_table
from agdg.graphcore import (ExplicitGraph, components, contains_cycle_of_length,
                            diameter_of_component, girth, is_cover, is_cycle, is_isomorphic,
                            multiset_contains, numeric_spectrum, project, to_explicit,
                            voltage_lift)
from agdg.monodigraph import monomial_iso_predicted

pytestmark = pytest.mark.acceptance


def test_01_girth_tables(criterion):
    t0 = time.perf_counter()
    got = {3: [girth(dkq.d_graph(k, 3), use_orbits=True) for k in range(2, 10)]}
    for q in (4, 5, 7, 8, 9):
        got[q] = [girth(dkq.d_graph(k, q), use_orbits=True) for k in range(2, 9)]
    want = {3: [6, 8, 12, 12, 12, 12, 12, 18]}
    want.update({q: [6, 8, 8, 10, 10, 12, 12] for q in (4, 5, 7, 8, 9)})
    dt = time.perf_counter() - t0
    bad = {q: got[q] for q in got if got[q] != want[q]}
    ok = not bad and dt < 600
    assert criterion(1, "girth of D(k,q) matches the reference tables", ok,
                     f"{dt:.1f}s" + (f", mismatches {bad}" if bad else ""))


def test_02_girth_small_k(criterion):
    bad = []
    for q in (4, 5, 7, 8, 9, 11, 13):
        g = [girth(dkq.d_graph(k, q), use_orbits=True) for k in (3, 4, 5)]
        if g != [8, 8, 10]:
            bad.append((q, g))
    assert criterion(2, "girth D(3,q) = D(4,q) = 8 and D(5,q) = 10", not bad, str(bad) if bad else "")


def test_03_component_counts(criterion):
    cells = [(6, 3), (7, 3), (8, 3), (6, 5), (7, 5), (4, 4), (5, 4), (6, 4), (2, 4), (3, 4)]
    bad = []
    for k, q in cells:
        c = components(dkq.d_graph(k, q)).count
        t = (k + 2) // 4
        want = 1 if (q == 4 and k in (2, 3)) else (4**t if q == 4 else q ** (t - 1))
        if c != want:
            bad.append((k, q, c, want))
    assert criterion(3, "component counts of D(k,q) by BFS", not bad, str(bad) if bad else "")


def test_04_dk2_structure(criterion):
    C8 = ExplicitGraph(8, [(i, (i + 1) % 8) for i in range(8)])
    ok = is_isomorphic(to_explicit(dkq.d_graph(2, 2))[0], C8)
    for k in (5, 6):
        G = dkq.d_graph(k, 2)
        C = components(G)
        ok &= C.count == 2 ** (k - 3) and set(C.sizes) == {16}
        ok &= G.degree_profile() == {2: G.num_vertices()}        # 2-regular, so each part is a cycle
        ok &= girth(G) == 16
    assert criterion(4, "D(2,2) is C8; D(5,2), D(6,2) are unions of 16-cycles", ok)


def test_05_wenger_spectra(criterion):
    t0 = time.perf_counter()
    worst, totals = 0.0, True
    for m, q in [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5)]:
        rep = spectra.wenger_spectrum_closed(m, q)
        totals &= rep.total == 2 * q ** (m + 1)
        worst = max(worst, rep.compare(numeric_spectrum(build_catalog("W", {"m": m, "q": q}).graph)))
    dt = time.perf_counter() - t0
    ok = worst < 1e-6 and totals and dt < 120
    assert criterion(5, "Wenger closed-form spectrum equals numeric spectrum", ok,
                     f"max deviation {worst:.1e}, {dt:.1f}s")


def test_06_wenger_connectivity_diameter(criterion):
    c = components(build_catalog("W", {"m": 3, "q": 3}).graph).count
    bad = []
    for m, q in [(1, 3), (2, 3), (1, 4), (2, 4), (1, 5), (2, 5)]:
        G = build_catalog("W", {"m": m, "q": q}).graph
        d = diameter_of_component(G, int(G.vertex_codes()[0]), use_orbits=True)
        if d != 2 * m + 2:
            bad.append((m, q, d))
    ok = c == 3 and not bad
    assert criterion(6, "c(W_3(3)) = 3 and diam W_m(q) = 2m+2", ok, f"c = {c}" + (f", {bad}" if bad else ""))


def test_07_cd_diameters(criterion):
    t0 = time.perf_counter()
    got3 = [diameter_of_component(dkq.cd_component(k, 3), 0, use_orbits=True) for k in range(2, 9)]
    got4 = [diameter_of_component(dkq.cd_component(k, 4), 0, use_orbits=True) for k in range(2, 9)]
    got3q = [diameter_of_component(dkq.cd_component(3, q), 0, use_orbits=True) for q in (5, 7, 9)]
    dt = time.perf_counter() - t0
    ok = (got3 == [4, 6, 8, 12, 12, 12, 14] and got4 == [4, 6, 6, 8, 8, 10, 12]
          and got3q == [6, 6, 6] and dt < 900)
    assert criterion(7, "diameters of CD(k,3), CD(k,4), CD(3,q)", ok,
                     f"{got3} {got4} {got3q}, {dt:.1f}s")


def test_08_invariant_suite(criterion):
    fails = []
    rng = np.random.default_rng(2024)
    for k, q in [(6, 3), (8, 5), (9, 5)]:
        G = dkq.d_graph(k, q)
        u = rng.choice(G.vertex_codes(), size=10**4)
        t = G.neighbor_table(u)
        v = t[np.arange(len(u)), rng.integers(0, t.shape[1], size=len(u))]
        n = int(np.any(dkq.invariants(G, u) != dkq.invariants(G, v), axis=1).sum())
        if n:
            fails.append(f"D({k},{q}) {n} edges")
    for k, q in [(6, 3), (7, 3)]:
        G = dkq.d_graph(k, q)
        C = components(G)
        keys = [tuple(r) for r in dkq.invariants(G, C.codes).tolist()]
        if not len(set(zip(keys, C.labels.tolist()))) == len(set(keys)) == C.count:
            fails.append(f"classes D({k},{q})")
    from agdg.graphcore import line, point
    w = field_of_order(4).primitive()
    p, l = point(0, 0, w, 0, 0), line(0, 0, w, 0, 0)
    G = dkq.d_graph(5, 4)
    adjacent = G.code(l) in G.neighbor_table(np.array([G.code(p)]))[0]
    bp, bl = dkq.invariant_vector(5, 4, p), dkq.invariant_vector(5, 4, l)
    w2 = field_of_order(4).mul(w, w)
    if not (adjacent and bp.entries == (w,) and bl.entries == (w2,)):
        fails.append("q = 4 witness")
    assert criterion(8, "invariant vectors: edge constancy, classes, q = 4 witness", not fails,
                     "; ".join(fails))


def _auto_results(k, q, polarity: bool, exhaustive_limit=10**6):
    G = dkq.d_graph(k, q)
    F = G.F
    rng = np.random.default_rng(k * 100 + q)
    out = []
    for _ in range(3):
        a, b = (int(x) for x in rng.integers(1, F.q, 2))
        out.append((f"m({a},{b})", dkq.verify_automorphism(G, dkq.multiplicative(G, a, b),
                                                           exhaustive_limit=exhaustive_limit)))
    for j in range(0, k + 1):
        x = int(rng.integers(1, F.q))
        out.append((f"t({j},{x})", dkq.verify_automorphism(G, dkq.additive(G, j, x),
                                                           exhaustive_limit=exhaustive_limit)))
    if polarity:
        out.append(("polarity", dkq.verify_automorphism(G, dkq.polarity(G, "printed"),
                                                        exhaustive_limit=exhaustive_limit)))
    return out


def test_09_automorphism_suite(criterion):
    fails = []
    for (k, q, pol, lim) in [(6, 3, True, 10**6), (5, 4, True, 10**6), (7, 5, False, 0)]:
        for name, r in _auto_results(k, q, pol, lim):
            if not r.ok:
                fails.append(f"D({k},{q}) {name}: {r.violations}/{r.checked} edges, e.g. {r.example}")
    assert criterion(9, "m_ab, t_jx and polarity preserve edges of D(k,q)", not fails, "; ".join(fails))


def test_10_decompositions(criterion):
    from agdg.decomp import decomposition_check
    F3, F5 = field_of_order(3), field_of_order(5)
    r1 = decomposition_check(build_catalog("BGamma", {"q": 3, "f": "p1*l1"}).graph)
    r2 = decomposition_check(build_catalog("BGamma", {"q": 3, "f": "p1*l1;p1*l2"}).graph)
    r3 = decomposition_check(build_catalog("Gamma", {"q": 5, "f": "x1*y1"}).graph)
    ok = (r1.ok and r1.classes == 3 and r2.ok and r2.classes == 9
          and r3.ok and r3.classes == 5 and r3.pairs == 300 and sum([60] * 5) == 300)
    assert criterion(10, "BΓ and Γ edge decompositions", ok,
                     f"{r1.classes}, {r2.classes}, {r3.classes} classes")


def test_11_hypergraph_laws(criterion):
    T = hyper.build_T(3, 2, 3, 2)
    K = hyper.build_K(5, 2, 3)
    D = hyper.hyper_decomposition_check(3, 2, 2, k=3)
    ok = (T.order == 27 and T.size == 81 and T.degree_profile() == {6: 27}
          and K.size == 460 and K.degree_profile() == hyper.k_degree_law(5, 2, 3)
          and D.ok and D.classes == 3)
    assert criterion(11, "T and K hypergraph size, degree and decomposition laws", ok,
                     f"K profile {K.degree_profile()}")


def test_12_lv(criterion):
    bad = []
    for q in (7, 9, 11):
        H = hyper.build_LV(q)
        g = hyper.berge_girth(H)
        if not (H.order == q * q - q and H.size == math.comb(q, 3) and g >= 5):
            bad.append((q, H.order, H.size, g))
    assert criterion(12, "LV 3-graph order, size and Berge girth", not bad, str(bad) if bad else "")


def test_13_forbidden_cycles(criterion):
    t0 = time.perf_counter()
    TW = build_catalog("TW", {"q": 5}).graph
    none_short = [contains_cycle_of_length(TW, L).status for L in (4, 6, 8, 10)]
    twelve = contains_cycle_of_length(TW, 12)
    ok = none_short == ["No"] * 4 and twelve.status == "Yes" and is_cycle(TW, twelve.witness)
    for q in (5, 7):
        VW = build_catalog("VW", {"q": q}).graph
        ok &= [contains_cycle_of_length(VW, L).status for L in (4, 6)] == ["No", "No"]
    dt = time.perf_counter() - t0
    ok &= dt < 600
    assert criterion(13, "TW(5) girth 12, VW(5), VW(7) free of 4- and 6-cycles", ok,
                     f"TW short cycles {none_short}, {dt:.1f}s")


def test_14_monomial_isomorphism(criterion):
    bad = []
    for q in (5, 7):
        pairs = [(m, n) for m in range(1, q) for n in range(1, q)]
        Gs = {mn: to_explicit(build_catalog("B", {"q": q, "m": mn[0], "n": mn[1]}).graph)[0]
              for mn in pairs}
        for a, b in itertools.combinations(pairs, 2):
            if is_isomorphic(Gs[a], Gs[b]) != monomial_iso_predicted(q, *a, *b):
                bad.append((q, a, b))
    assert criterion(14, "B(q;m,n) isomorphism agrees with the gcd criterion", not bad,
                     str(bad[:5]) if bad else "")


def test_15_permutation_polynomials(criterion):
    bad = []
    for q in (5, 7, 9, 11, 13, 25, 27):
        bad += [(q, r["k"]) for r in permpoly_table(field_of_order(q)) if not r["ok"]]
    assert criterion(15, "A_k and B_k permute GF(q) iff k is a power of p", not bad,
                     str(bad) if bad else "")


def test_16_spectrum_embedding_and_covers(criterion):
    G3, G4 = dkq.d_graph(3, 3), dkq.d_graph(4, 3)
    emb = multiset_contains(numeric_spectrum(G4), numeric_spectrum(G3))
    small, eta = project(G4, 3)
    cover = is_cover(G4, small, eta)
    lift = voltage_lift(dkq.cd_component(4, 3), parse_fn("p3*l1", 5, "bipartite", field_of_order(3)))
    iso = is_isomorphic(lift, to_explicit(dkq.cd_component(5, 3))[0])
    ok = emb and cover and iso
    assert criterion(16, "spectrum embedding, cover D(4,3) -> D(3,3), voltage lift", ok,
                     f"embedding {emb}, cover {cover}, lift isomorphic {iso}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
