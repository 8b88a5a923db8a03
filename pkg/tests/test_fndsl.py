import numpy as np
import pytest
from hypothesis import given, strategies as st

from agdg.errors import FnSyntaxError, TriangularityViolation, UnknownVariable
from agdg.ffield import field_of_order
from agdg.fndsl import (check_symmetric, dlw_a, eval_fn, eval_vec, interpolate, normal_form,
                        parse_fn, parse_system, perm_poly_check, permpoly_table, univariate,
                        unparse)

VARS = ["p1", "p2", "l1", "l2"]


@st.composite
def expressions(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        if draw(st.booleans()):
            return str(draw(st.integers(0, 12)))
        v = draw(st.sampled_from(VARS))
        return f"{v}^{draw(st.integers(1, 4))}" if draw(st.booleans()) else v
    a, b = draw(expressions(depth - 1)), draw(expressions(depth - 1))
    op = draw(st.sampled_from(["+", "-", "*"]))
    return f"({a}){op}({b})" if draw(st.booleans()) else f"-({a})"


def _oracle(text, env, p):
    # plain integer arithmetic, reduced at the end: independent of the AST evaluator
    return eval(text.replace("^", "**"), {}, dict(env)) % p


@given(expressions(), st.sampled_from([2, 3, 5, 7]), st.data())
def test_eval_matches_integer_oracle(text, p, data):
    F = field_of_order(p)
    env = {v: data.draw(st.integers(0, p - 1)) for v in VARS}
    f = parse_fn(text, 3, "bipartite", F)
    assert eval_fn(f, env).code == _oracle(text, env, p)


@given(expressions(), st.sampled_from([2, 3, 5]))
def test_roundtrip_and_normal_form(text, p):
    F = field_of_order(p)
    f = parse_fn(text, 3, "bipartite", F)
    g = parse_fn(unparse(f), 3, "bipartite", F)
    assert unparse(g) == unparse(f)
    nf = normal_form(f)
    h = parse_fn(str(nf), 3, "bipartite", F)
    grid = np.array(np.meshgrid(*[np.arange(p)] * 4, indexing="ij")).reshape(4, -1)
    env = dict(zip(VARS, grid))
    n = grid.shape[1]
    assert np.array_equal(np.broadcast_to(eval_vec(f, env), (n,)),
                          np.broadcast_to(eval_vec(h, env), (n,)))


def test_examples():
    F5, F3 = field_of_order(5), field_of_order(3)
    f = parse_fn("p1*l1", 2, "bipartite", F5)
    assert eval_fn(f, {"p1": 2, "l1": 3}).code == 1
    assert eval_fn(f, {"p1": 0, "l1": 3}).code == 0
    assert eval_fn(parse_fn("p1*l2", 3, "bipartite", F3), {"p1": 2, "l2": 2}).code == 1
    hex5 = parse_fn("p2*l3 - p3*l2", 5, "bipartite")
    assert str(hex5) == "p2*l3 - p3*l2"


@pytest.mark.parametrize("bad", ["p1**l1", "p1+", "(p1", "p1 l1", ""])
def test_syntax_errors(bad):
    with pytest.raises(FnSyntaxError):
        parse_fn(bad, 2, "bipartite")


def test_variable_checks():
    with pytest.raises(TriangularityViolation):
        parse_fn("p2*l1", 2, "bipartite")
    with pytest.raises(UnknownVariable):
        parse_fn("x1*y1", 2, "bipartite")


def test_normal_form_examples():
    F2 = field_of_order(2)
    assert str(normal_form(parse_fn("(p1+l1)^2", 2, "bipartite", F2))) == "p1^2 + l1^2"
    assert str(normal_form(parse_fn("-(-p1)", 2, "bipartite", F2))) == "p1"
    F5 = field_of_order(5)
    assert str(normal_form(parse_fn("p1*(l1+l2)", 3, "bipartite", F5))) == "p1*l1 + p1*l2"


def test_symmetry():
    F3 = field_of_order(3)
    assert check_symmetric(parse_fn("x1*y1", 2, "ordinary", F3), F3)
    assert not check_symmetric(parse_fn("x1*y2", 3, "ordinary", F3), F3)
    assert check_symmetric(parse_fn("x1^2*y1 + x1*y1^2", 2, "ordinary", F3), F3)


def _bijective_oracle(coeff_fn, q):
    F = field_of_order(q)
    return len({coeff_fn(F, x) for x in range(q)}) == q


def test_perm_poly_examples():
    F7, F9 = field_of_order(7), field_of_order(9)
    assert perm_poly_check(univariate("X", F7), F7)
    assert not perm_poly_check(univariate("X^2", F7), F7)
    assert perm_poly_check(univariate(dlw_a(3), F9), F9)


@pytest.mark.parametrize("q", [5, 7, 9])
def test_dlw_a_against_direct_power_evaluation(q):
    F = field_of_order(q)
    for k in range(1, q):
        def a_k(F, x, k=k):
            return F.mul(F.pow(x, k), F.sub(F.pow(F.add(x, 1), k), F.pow(x, k)))
        assert perm_poly_check(univariate(dlw_a(k), F), F) == _bijective_oracle(a_k, q)


def test_permpoly_table_gf25():
    rows = permpoly_table(field_of_order(25))
    assert all(r["ok"] for r in rows)
    assert [r["k"] for r in rows if r["A"]] == [1, 5]


@given(st.lists(st.integers(0, 6), min_size=7, max_size=7))
def test_interpolate(vals):
    F = field_of_order(7)
    f = interpolate(vals, F)
    got = np.broadcast_to(eval_vec(f, {"X": F.elements()}, F), (7,))
    assert got.tolist() == vals


def test_system_file():
    sf = parse_system("field 3 1\n# comment\np1*l1\np1*l2\n")
    assert sf.field.q == 3 and sf.kind == "bipartite" and len(sf.fs) == 2
    assert parse_system("x1*y1\n").kind == "ordinary"
