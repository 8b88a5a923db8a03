import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from agdg import monodigraph as md
from agdg.constructions import build_catalog
from agdg.errors import BadExponent, NotStronglyConnected
from agdg.ffield import field_of_order
from agdg.graphcore import is_isomorphic, to_explicit


def _arcs(q, m, n):
    F = field_of_order(q)
    vs = list(itertools.product(range(q), repeat=2))
    return {a: [b for b in vs if F.add(a[1], b[1]) == F.mul(F.pow(a[0], m), F.pow(b[0], n))]
            for a in vs}


@pytest.mark.parametrize("q,m,n", [(3, 1, 1), (5, 1, 2), (4, 3, 3), (7, 2, 3)])
def test_arcs_match_definition(q, m, n):
    D = md.build_digraph(q, m, n)
    adj = oracles.adjacency(D)
    got = {D.vertex(c).coords: sorted(D.vertex(x).coords for x in ns) for c, ns in adj.items()}
    assert got == {a: sorted(b) for a, b in _arcs(q, m, n).items()}


@pytest.mark.parametrize("q,m,n", [(3, 1, 1), (5, 1, 2), (4, 1, 3)])
def test_census_against_dfs(q, m, n):
    D = md.build_digraph(q, m, n)
    assert md.subdigraph_census(D, 6) == oracles.directed_cycle_counts(oracles.adjacency(D), 6)


def test_small_examples():
    D = md.build_digraph(3, 1, 1)
    assert md.strong_components(D)["count"] == 1
    assert md.digraph_diameter(D) == 3
    assert md.subdigraph_census(D) == [3, 12, 2, 0, 6, 8, 6]
    D = md.build_digraph(4, 3, 3)
    assert md.strong_components(D)["count"] == 2
    assert md.digraph_diameter(D) == math.inf
    with pytest.raises(NotStronglyConnected):
        md.digraph_diameter(D, strict=True)
    with pytest.raises(BadExponent):
        md.build_digraph(5, 0, 1)


def test_diameter_against_bruteforce():
    D = md.build_digraph(5, 1, 2)
    assert md.digraph_diameter(D) == oracles.eccentricity_max(oracles.adjacency(D))


def test_isomorphism_evidence():
    assert md.iso_sufficient(7, 1, 2, 5, 4)
    assert is_isomorphic(md.build_digraph(7, 1, 2), md.build_digraph(7, 5, 4))
    assert not md.iso_sufficient(5, 1, 1, 1, 2)
    assert not is_isomorphic(md.build_digraph(5, 1, 1), md.build_digraph(5, 1, 2))
    assert md.subdigraph_census(md.build_digraph(7, 2, 1)) == md.subdigraph_census(md.build_digraph(7, 1, 2))


@settings(max_examples=20)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(1, 4))
def test_undirected_monomial_gcd_criterion_q5(m1, n1, m2, n2):
    A = to_explicit(build_catalog("B", {"q": 5, "m": m1, "n": n1}).graph)[0]
    B = to_explicit(build_catalog("B", {"q": 5, "m": m2, "n": n2}).graph)[0]
    assert is_isomorphic(A, B) == md.monomial_iso_predicted(5, m1, n1, m2, n2)


def test_gcd_multiset():
    assert md.gcd_multiset(7, 2, 3) == md.gcd_multiset(7, 4, 3) == (2, 3)
