import io
import itertools
import math

import numpy as np
import pytest

from agdg import hyper
from agdg.errors import EvenQ, NotSymmetric
from agdg.ffield import field_of_order
from agdg.graphcore import AboveCap

SYM3 = "a1_1*a2_1 + a1_1*a3_1 + a2_1*a3_1"


def _vec(code, q, d):
    return [(code // q**i) % q for i in range(d)]


def _k_oracle(q, d, r, f):
    """All r-subsets of GF(q)^d whose level-2 coordinates sum to f(first coordinates)."""
    F = field_of_order(q)
    out = set()
    for S in itertools.combinations(range(q**d), r):
        vs = [_vec(c, q, d) for c in S]
        s = 0
        for v in vs:
            s = F.add(s, v[1])
        rhs = f(F, [v[0] for v in vs])
        if s == rhs:
            out.add(S)
    return out


def _sym3(F, xs):
    a, b, c = xs
    return F.add(F.add(F.mul(a, b), F.mul(a, c)), F.mul(b, c))


@pytest.mark.parametrize("q,r,f,text", [(5, 3, lambda F, xs: 0, None), (5, 3, _sym3, SYM3),
                                        (3, 2, lambda F, xs: 0, None), (7, 2, lambda F, xs: F.mul(*xs),
                                                                         "a1_1*a2_1")])
def test_k_matches_bruteforce(q, r, f, text):
    H = hyper.build_K(q, 2, r, [text] if text else None)
    H.check()
    assert H.edge_set() == _k_oracle(q, 2, r, f)


@pytest.mark.parametrize("q,r", [(3, 2), (5, 2), (7, 2), (5, 3), (7, 3)])
def test_k_size_law(q, r):
    H = hyper.build_K(q, 2, r)
    assert H.size == math.comb(q * q, r) // q


def test_k_degree_profile_example():
    H = hyper.build_K(5, 2, 3)
    assert H.order == 25 and H.size == 460
    assert H.degree_profile() == hyper.k_degree_law(5, 2, 3) == {55: 20, 56: 5}


def test_k_rejects_asymmetric():
    with pytest.raises(NotSymmetric):
        hyper.build_K(5, 2, 2, ["a1_1^2*a2_1"])


def test_t_counts_and_partite():
    H = hyper.build_T(3, 2, 3, 2)
    H.check()
    assert H.order == 27 and H.size == 81
    assert H.degree_profile() == {6: 27}
    for d, k, r, q in ((2, 4, 3, 3), (3, 3, 2, 3), (2, 3, 3, 5)):
        T = hyper.build_T(q, d, k, r)
        assert T.size == math.comb(k, r) * q ** (d * r - d + 1)
        assert len(T.degree_profile()) == 1


def test_t_zero_functions_sum_to_zero():
    H = hyper.build_T(5, 3, 3, 3)
    qd = 125
    for row in H.edges[:500].tolist():
        vs = [_vec(c % qd, 5, 3) for c in row]
        assert all(sum(v[i] for v in vs) % 5 == 0 for i in (1, 2))


def test_decompositions():
    r = hyper.hyper_decomposition_check(3, 2, 2, k=3)
    assert r.ok and r.classes == 3 and r.total == 243
    r = hyper.hyper_decomposition_check(5, 2, 2)
    assert r.ok and r.total == math.comb(25, 2)


def test_lv():
    for q in (7, 9):
        H = hyper.build_LV(q)
        assert H.order == q * q - q and H.size == math.comb(q, 3)
        assert hyper.berge_girth(H) >= 5
        F = field_of_order(q)
        # no vertex on the deleted parabola
        for c in H.vertices.tolist():
            x1, x2 = c % q, c // q
            assert F.mul(2, x2) != F.mul(x1, x1)
    with pytest.raises(EvenQ):
        hyper.build_LV(9 - 1)


def test_berge_girth_small():
    two = hyper.RGraph(3, 2, 1, 0, np.array([[0, 1, 2], [0, 1, 3]]), np.arange(4))
    assert hyper.berge_girth(two) == 2
    one = hyper.RGraph(3, 2, 1, 0, np.array([[0, 1, 2]]), np.arange(3))
    assert isinstance(hyper.berge_girth(one, cap=10), AboveCap)
    tri = hyper.RGraph(2, 2, 1, 0, np.array([[0, 1], [1, 2], [0, 2]]), np.arange(3))
    assert hyper.berge_girth(tri) == 3


def test_exchange_roundtrip():
    H = hyper.build_T(3, 2, 3, 2)
    buf = io.StringIO()
    hyper.write_exchange(H, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "2 3 2 3"
    back = hyper.read_exchange(io.StringIO(text))
    assert back.edge_set() == H.edge_set() and back.order == H.order
