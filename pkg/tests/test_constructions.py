import itertools

import numpy as np
import pytest

import oracles
from agdg.constructions import (build_bgamma, build_catalog, build_gamma, catalog_names, omega_map,
                                parse_name)
from agdg.dkq import verify_automorphism
from agdg.errors import BadParams, NotInjective, NotSymmetric, UnknownName
from agdg.ffield import field_of_order
from agdg.fndsl import eval_fn, parse_fn
from agdg.graphcore import (AboveCap, components, contains_cycle_of_length, export_graph,
                            girth, project, shortest_cycle_through)


def d_rule(k):
    """D(k,q) in the sign-free form, written out from the index rule."""
    fs = ["p1*l1", "p1*l2"]
    for i in range(4, k + 1):
        fs.append(f"p{i - 2}*l1" if i % 4 in (0, 1) else f"p1*l{i - 2}")
    return fs[:k - 1]


def _canon(G):
    adj = oracles.adjacency(G)
    lab = {c: (G.vertex(c).side, G.vertex(c).coords) for c in adj}
    return {lab[c]: sorted(lab[d] for d in ns) for c, ns in adj.items()}


@pytest.mark.parametrize("k,q", [(3, 3), (4, 3), (5, 2), (4, 4)])
def test_d_graph_matches_equations(k, q):
    F = field_of_order(q)
    G = build_catalog("D", {"k": k, "q": q}).graph
    want = oracles.bgamma_adjacency(F, d_rule(k), k, eval_fn, parse_fn)
    assert _canon(G) == {a: sorted(b) for a, b in want.items()}


def test_small_examples():
    F3 = field_of_order(3)
    G = build_bgamma(F3, ["p1*l1"])
    assert G.num_vertices() == 18 and G.degree_profile() == {3: 18}
    K = build_bgamma(F3, [])
    assert K.num_vertices() == 6 and K.degree_profile() == {3: 6}
    assert girth(build_bgamma(field_of_order(5), ["p1*l1"])) == 6


def test_gamma_degrees_and_c4_free():
    F5 = field_of_order(5)
    G = build_gamma(F5, ["x1*y1"])
    assert G.num_vertices() == 25
    assert G.degree_profile() == {4: 5, 5: 20}
    assert contains_cycle_of_length(G, 4, use_orbits=False).status == "No"
    with pytest.raises(NotSymmetric):
        build_gamma(F5, ["x1*y1", "x1*y2"])


def test_catalog_presets():
    e = build_catalog("W:m=2,q=3")
    assert e.order == 54 and e.graph.degree_profile() == {3: 54}
    sun = build_catalog("Sun:k=3,q=5,f=X^2")
    assert sun.order == 125 and sun.graph.degree_profile() == {20: 125}
    vw = build_catalog("VW:q=5").graph
    prof = vw.degree_profile()
    assert prof == {4: 25, 5: 600}
    assert sum(d * c for d, c in prof.items()) // 2 == (5**5 - 5**2) // 2
    assert girth(build_catalog("D:k=3,q=4").graph, use_orbits=True) == 8


def test_vw_matches_equations():
    F = field_of_order(3)
    G = build_catalog("VW", {"q": 3}).graph
    adj = oracles.adjacency(G)
    vs = list(itertools.product(range(3), repeat=4))

    def ok(a, b):
        m = F.mul
        return (a != b and F.add(a[1], b[1]) == m(a[0], b[0])
                and F.add(a[2], b[3]) == m(m(a[0], a[0]), b[0])
                and F.add(a[3], b[2]) == m(a[0], m(b[0], b[0])))
    want = {a: sorted(b for b in vs if ok(a, b)) for a in vs}
    got = {G.vertex(c).coords: sorted(G.vertex(d).coords for d in ns) for c, ns in adj.items()}
    assert got == want


@pytest.mark.parametrize("m,q", [(1, 3), (2, 3), (2, 4), (3, 3)])
def test_wenger_forms_isomorphic(m, q):
    W = build_catalog("W", {"m": m, "q": q}).graph
    Wp = build_catalog("Wp", {"m": m, "q": q}).graph
    r = verify_automorphism(W, omega_map(W, Wp), target=Wp)
    assert r.ok and r.exhaustive


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9])
def test_biaffine_plane_girth(q):
    assert girth(build_catalog("B", {"q": q, "m": 1, "n": 1}).graph) == 6


@pytest.mark.parametrize("q,m,want", [(3, 1, 6), (3, 3, 6), (5, 2, 6), (9, 2, 6), (2, 1, 8),
                                      (2, 3, 8), (4, 2, 8), (8, 2, 8), (4, 1, 6)])
def test_linearized_wenger_girth(q, m, want):
    assert girth(build_catalog("L", {"q": q, "m": m}).graph, cap=8) == want


@pytest.mark.parametrize("q,m,i,j", [(5, 2, 1, 2), (7, 2, 2, 4), (5, 3, 1, 4)])
def test_jumped_wenger_girth_at_most_8(q, m, i, j):
    g = girth(build_catalog("J", dict(q=q, m=m, i=i, j=j)).graph, cap=8)
    assert not isinstance(g, AboveCap)


def test_jumped_rejects_noninjective_and_bad_indices():
    with pytest.raises(NotInjective):
        build_catalog("J", dict(q=5, m=2, i=1, j=3))
    with pytest.raises(BadParams):
        build_catalog("J", dict(q=5, m=2, i=3, j=2))


def test_k2t_is_k2t_free():
    G = build_catalog("K2T", {"p": 3, "e": 2, "d": 1}).graph
    adj = oracles.adjacency(G)
    sets = {v: set(ns) for v, ns in adj.items()}
    vs = list(sets)
    worst = max(len(sets[a] & sets[b]) for a, b in itertools.combinations(vs, 2))
    assert worst <= 3


@pytest.mark.parametrize("n,q", [(3, 5), (4, 5), (4, 7)])
def test_a_graph_zero_point_cycles(n, q):
    G = build_catalog("A", {"n": n, "q": q}).graph
    zero = int(G.encode(0, np.zeros((n, 1), dtype=np.int64))[0])
    assert isinstance(shortest_cycle_through(G, zero, 2 * n), AboveCap)


@pytest.mark.parametrize("k,q", [(2, 3), (3, 3), (4, 3), (5, 3), (4, 4), (5, 5)])
def test_girth_lower_bound_and_cover_monotone(k, q):
    G = build_catalog("D", {"k": k, "q": q}).graph
    g = girth(G, use_orbits=True)
    assert g >= (k + 5 if k % 2 else k + 4)
    if k > 2:
        H, _ = project(G, k - 1)
        assert girth(H) <= g


def test_d52_is_four_16_cycles():
    G = build_catalog("D:k=5,q=2").graph
    C = components(G)
    assert C.count == 4 and C.sizes == [16] * 4
    assert G.degree_profile() == {2: 64}


def test_d22_export_has_8_edges(tmp_path):
    p = tmp_path / "d22.txt"
    assert export_graph(build_catalog("D:k=2,q=2").graph, "edges", p) == 8


def test_sz_and_restricted():
    e = build_catalog("SZ", {"q": 3})
    assert e.order == e.graph.num_vertices()
    with pytest.raises(BadParams):
        build_catalog("SZp", {"q": 9})
    r = build_catalog("SZp", {"q": 27}, verify=False)
    assert r.order == r.graph.num_vertices()


def test_name_grammar_and_errors(tmp_path):
    assert parse_name("D:k=10,q=9") == ("D", {"k": "10", "q": "9"})
    assert parse_name("B:q=7,m=2,n=3")[1] == {"q": "7", "m": "2", "n": "3"}
    with pytest.raises(UnknownName):
        build_catalog("Nope:q=3")
    with pytest.raises(BadParams):
        build_catalog("X:bad")
    f = tmp_path / "sys.txt"
    f.write_text("field 3 1\np1*l1\np1*l2\n")
    e = build_catalog(f"file:{f}")
    assert e.order == 54
    assert "D" in catalog_names() and "TW" in catalog_names()


def test_biaffine_parts():
    for k, lb in ((3, 6), (4, 8), (6, 12)):
        e = build_catalog("BP", {"k": k, "q": 3})
        assert girth(e.graph) >= lb
