import itertools

import numpy as np
import pytest

from agdg.constructions import build_bgamma, build_gamma
from agdg.decomp import decomposition_check, shift_class
from agdg.errors import EvenCharacteristic, SameVertex
from agdg.ffield import field_of_order
from agdg.graphcore import mono, point, line


def test_bipartite_examples():
    F = field_of_order(3)
    r = decomposition_check(build_bgamma(F, ["p1*l1"]))
    assert r.ok and r.classes == 3 and r.class_sizes == [27] and r.pairs == 81
    assert r.isomorphic == "exact"
    r = decomposition_check(build_bgamma(F, ["p1*l1", "p1*l2"]))
    assert r.ok and r.classes == 9 and r.pairs == 27 * 27


def test_ordinary_example():
    r = decomposition_check(build_gamma(field_of_order(5), ["x1*y1"]))
    assert r.ok and r.classes == 5 and r.class_sizes == [60] and r.pairs == 300


def test_even_characteristic_rejected():
    with pytest.raises(EvenCharacteristic):
        decomposition_check(build_gamma(field_of_order(4), ["x1*y1"]))


def test_shift_class_bruteforce():
    """The shift is the unique a with p2 + l2 = p1 l1 + a, checked for every pair."""
    F = field_of_order(3)
    G = build_bgamma(F, ["p1*l1"])
    for p in itertools.product(range(3), repeat=2):
        for l in itertools.product(range(3), repeat=2):
            hits = [a for a in range(3) if F.add(p[1], l[1]) == F.add(F.mul(p[0], l[0]), a)]
            assert shift_class(G, point(*p), line(*l)) == (hits[0],)
            assert shift_class(G, line(*l), point(*p)) == (hits[0],)


def test_shift_class_same_vertex():
    G = build_gamma(field_of_order(5), ["x1*y1"])
    with pytest.raises(SameVertex):
        shift_class(G, mono(1, 2), mono(1, 2))
