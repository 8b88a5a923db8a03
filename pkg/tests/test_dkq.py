import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from agdg import dkq
from agdg.errors import DimensionTooSmall, NotBijective, PolarityUnavailable
from agdg.ffield import field_of_order
from agdg.graphcore import components, is_isomorphic, line, point, to_explicit


def _edges(G, n, seed):
    rng = np.random.default_rng(seed)
    u = rng.choice(G.vertex_codes(), size=n)
    t = G.neighbor_table(u)
    return u, t[np.arange(n), rng.integers(0, t.shape[1], size=n)]


@settings(max_examples=10)
@given(st.sampled_from([(6, 3), (7, 3), (6, 5), (8, 3), (9, 3)]), st.integers(0, 2**32 - 1))
def test_a_vector_edge_constant(kq, seed):
    G = dkq.d_graph(*kq)
    u, v = _edges(G, 2000, seed)
    assert np.array_equal(dkq.invariants(G, u), dkq.invariants(G, v))


def test_b_vector_tail_edge_constant_first_entry_not():
    G = dkq.d_graph(10, 4)
    u, v = _edges(G, 5000, 0)
    bu, bv = dkq.invariants(G, u, "b"), dkq.invariants(G, v, "b")
    assert np.array_equal(bu[:, 1:], bv[:, 1:])
    assert np.any(bu[:, 0] != bv[:, 0])


@pytest.mark.parametrize("k,q", [(6, 3), (7, 3)])
def test_invariant_classes_are_components(k, q):
    G = dkq.d_graph(k, q)
    adj = oracles.adjacency(G)
    assert oracles.component_count(adj) == dkq.expected_components(k, q)
    C = components(G)
    keys = [tuple(r) for r in dkq.invariants(G, C.codes).tolist()]
    assert len(set(zip(keys, C.labels.tolist()))) == len(set(keys)) == C.count


@pytest.mark.parametrize("k,q", [(6, 3), (7, 3), (6, 5)])
def test_cd_component_methods_agree(k, q):
    a = dkq.cd_component(k, q, method="invariant")
    b = dkq.cd_component(k, q, method="bfs")
    assert np.array_equal(np.sort(a.vertex_codes()), np.sort(b.vertex_codes()))
    with pytest.raises(DimensionTooSmall):
        dkq.cd_component(5, q, method="invariant")


@pytest.mark.parametrize("k,q", [(2, 4), (3, 4), (4, 4), (5, 4), (6, 3), (5, 5), (5, 2)])
def test_component_counts(k, q):
    assert dkq.count_components_check(k, q)["match"]


def test_q4_remark_witness():
    w = 2
    p, l = point(0, 0, w, 0, 0), line(0, 0, w, 0, 0)
    G = dkq.d_graph(5, 4)
    assert G.code(l) in G.neighbor_table(np.array([G.code(p)]))[0]
    bp = dkq.invariant_vector(5, 4, p)
    bl = dkq.invariant_vector(5, 4, l)
    assert bp.kind == "b" and bp.entries == (w,) and bl.entries == (3,)


@pytest.mark.parametrize("k,q", [(6, 3), (5, 4), (4, 3), (5, 5)])
def test_mult_and_additive_automorphisms(k, q):
    G = dkq.d_graph(k, q)
    F = G.F
    rng = np.random.default_rng(k * q)
    a, b = (int(x) for x in rng.integers(1, F.q, 2))
    assert dkq.verify_automorphism(G, dkq.multiplicative(G, a, b)).ok
    for j in range(0, k + 1):
        x = int(rng.integers(1, F.q))
        r = dkq.verify_automorphism(G, dkq.additive(G, j, x))
        assert r.ok and r.exhaustive, (j, r.example)


@pytest.mark.parametrize("k,q", [(4, 3), (6, 3), (4, 4), (6, 4)])
def test_polarity_even_k(k, q):
    G = dkq.d_graph(k, q)
    assert dkq.verify_automorphism(G, dkq.polarity(G)).ok


@pytest.mark.parametrize("q", [2, 4])
def test_printed_odd_polarity_breaks_edges_corrected_one_works(q):
    G = dkq.d_graph(5, q)
    bad = dkq.verify_automorphism(G, dkq.polarity(G, "printed"))
    assert not bad.ok and bad.example is not None
    assert dkq.verify_automorphism(G, dkq.polarity(G, "char2")).ok


def test_polarity_unavailable_for_odd_k_odd_q():
    with pytest.raises(PolarityUnavailable):
        dkq.polarity(dkq.d_graph(5, 3))


def test_apply_automorphism_roundtrip():
    v = point(1, 2, 0, 1)
    w = dkq.apply_automorphism(dkq.d_graph(4, 3), ("mult", 2, 1), v)
    assert w.side == "P" and len(w.coords) == 4


@pytest.mark.parametrize("k,q", [(4, 3), (5, 5), (6, 5), (5, 4)])
def test_signed_and_sign_free_are_isomorphic(k, q):
    F = field_of_order(q)
    signed = dkq.d_graph(k, q, signed=True)
    rng = np.random.default_rng(k + q)
    for scales in (dkq.sign_free_scales(k, F), [int(x) for x in rng.integers(1, q, k - 1)]):
        H = dkq.scaled_graph(k, q, scales)
        phi = dkq.scaling_isomorphism(signed, H, scales)
        assert dkq.verify_automorphism(signed, phi, target=H).ok
    H = dkq.scaled_graph(k, q, dkq.sign_free_scales(k, F))
    assert np.array_equal(H.edges(), dkq.d_graph(k, q).edges())


def test_noninjective_map_is_rejected():
    G = dkq.d_graph(3, 3)
    with pytest.raises(NotBijective):
        dkq.verify_automorphism(G, lambda c: np.zeros_like(c))


@pytest.mark.parametrize("k,q", [(4, 3), (5, 3), (3, 4)])
def test_projection_fibres(k, q):
    r = dkq.projection_fiber_profile(k, q)
    assert r["constant"] and r["into"] and r["surjective"]


def test_tw_automorphisms_small():
    from agdg.constructions import build_catalog
    G = build_catalog("TW", {"q": 3}).graph
    for phi in dkq.tw_automorphisms(G):
        r = dkq.verify_automorphism(G, phi)
        assert r.ok and r.exhaustive, repr(phi)


def test_cd_lift_matches_next_component():
    from agdg.fndsl import parse_fn
    from agdg.graphcore import voltage_lift
    C4 = dkq.cd_component(4, 3)
    lift = voltage_lift(C4, parse_fn("p3*l1", 5, "bipartite", field_of_order(3)))
    C5 = to_explicit(dkq.cd_component(5, 3))[0]
    assert is_isomorphic(lift, C5)
