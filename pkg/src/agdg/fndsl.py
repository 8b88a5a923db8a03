"""A small language for the defining polynomials f_i.

Grammar (whitespace ignored)::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' INT)?
    atom   := INT | VAR | '{' INT '}' | '(' expr ')' | '[' expr ']'

``{c}`` is the field element with code ``c``; it only appears in text written
by :func:`unparse` for polynomials whose coefficients leave the prime subfield.
Variable names depend on the context:

* ``bipartite``  p1, p2, ... and l1, l2, ...
* ``ordinary``   x1, x2, ... and y1, y2, ...
* ``hyper``      a<j>_<k>  (coordinate k of the j-th vertex of an edge)
* ``univariate`` X
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import (FnSyntaxError, MissingVariable, TriangularityViolation,
                     UnknownVariable, WrongContext)
from .ffield import GF, FieldElem, make_field

CONTEXTS = ("bipartite", "ordinary", "hyper", "univariate")
ROLES = {"bipartite": ("p", "l"), "ordinary": ("x", "y"), "univariate": ("X",), "hyper": ("a",)}


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Node:
    op: str                      # const, elem, var, add, sub, neg, mul, pow
    args: tuple = ()
    value: object = None         # int for const/elem/pow exponent, Var for var


@dataclass(frozen=True, order=True)
class Var:
    role: str                    # p, l, x, y, X, a
    index: int = 0               # coordinate index (level k for hyper)
    slot: int = 0                # vertex position j (hyper only)

    def __str__(self):
        if self.role == "X":
            return "X"
        if self.role == "a":
            return f"a{self.slot}_{self.index}"
        return f"{self.role}{self.index}"

    @property
    def side(self) -> int:
        """0 for p/x (the vertex being solved from), 1 for l/y."""
        return 1 if self.role in ("l", "y") else 0


def const(n: int) -> Node:
    return Node("const", value=int(n))


def elem(code: int) -> Node:
    return Node("elem", value=int(code))


def var(name: str) -> Node:
    return Node("var", value=_parse_var(name))


def add(a: Node, b: Node) -> Node:
    return Node("add", (a, b))


def sub(a: Node, b: Node) -> Node:
    return Node("sub", (a, b))


def neg(a: Node) -> Node:
    return Node("neg", (a,))


def mul(a: Node, b: Node) -> Node:
    return Node("mul", (a, b))


def power(a: Node, k: int) -> Node:
    if k < 0:
        raise ValueError("negative exponent")
    return Node("pow", (a,), int(k))


_VAR_RE = re.compile(r"^(?:([plxy])(\d+)|a(\d+)_(\d+)|(X))$")


def _parse_var(name: str) -> Var:
    m = _VAR_RE.match(name)
    if not m:
        raise UnknownVariable(name)
    if m.group(1):
        return Var(m.group(1), int(m.group(2)))
    if m.group(3):
        return Var("a", int(m.group(4)), int(m.group(3)))
    return Var("X")


@dataclass(frozen=True)
class FnExpr:
    """A parsed polynomial together with its context and coordinate slot."""

    root: Node
    context: str = "bipartite"
    arity: int | None = None
    r: int | None = None         # uniformity, hyper context only
    field: GF | None = dc_field(default=None, compare=False)

    def variables(self) -> set[Var]:
        out: set[Var] = set()
        stack = [self.root]
        while stack:
            n = stack.pop()
            if n.op == "var":
                out.add(n.value)
            stack.extend(n.args)
        return out

    def max_index(self) -> int:
        return max((v.index for v in self.variables() if v.role != "X"), default=0)

    def __str__(self):
        return unparse(self)

    def with_root(self, root: Node) -> "FnExpr":
        return FnExpr(root, self.context, self.arity, self.r, self.field)

    def __add__(self, other: "FnExpr | int") -> "FnExpr":
        o = other.root if isinstance(other, FnExpr) else const(other)
        return self.with_root(add(self.root, o))


# -- lexer / parser -----------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            toks.append(("int", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            if ch not in "+-*^()[]{}":
                raise FnSyntaxError(f"unexpected character {ch!r}", m.start(3))
            toks.append(("op", ch, m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, val=None):
        t = self.take()
        if t[0] != kind or (val is not None and t[1] != val):
            want = val if val is not None else kind
            raise FnSyntaxError(f"expected {want!r}, found {t[1] or 'end'!r}", t[2])
        return t

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = add(node, rhs) if op == "+" else sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            node = mul(node, self.factor())
        return node

    def factor(self) -> Node:
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            return neg(self.factor())
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            k = self.expect("int")
            node = power(node, int(k[1]))
        return node

    def atom(self) -> Node:
        t = self.take()
        if t[0] == "int":
            return const(int(t[1]))
        if t[0] == "name":
            try:
                return Node("var", value=_parse_var(t[1]))
            except UnknownVariable:
                raise UnknownVariable(f"{t[1]!r} at position {t[2]}") from None
        if t[0] == "op" and t[1] in "([":
            node = self.expr()
            self.expect("op", ")" if t[1] == "(" else "]")
            return node
        if t[0] == "op" and t[1] == "{":
            c = self.expect("int")
            self.expect("op", "}")
            return elem(int(c[1]))
        raise FnSyntaxError(f"unexpected {t[1] or 'end of input'!r}", t[2])

    def parse(self) -> Node:
        node = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise FnSyntaxError(f"unexpected {t[1]!r}", t[2])
        return node


def _check_vars(root: Node, context: str, arity: int | None, r: int | None):
    roles = ROLES[context]
    stack = [root]
    while stack:
        n = stack.pop()
        stack.extend(n.args)
        if n.op != "var":
            continue
        v: Var = n.value
        if v.role not in roles:
            raise UnknownVariable(f"{v} is not a {context} variable")
        if v.role == "X":
            continue
        if v.index < 1:
            raise UnknownVariable(f"{v}: coordinates are numbered from 1")
        if v.role == "a" and (v.slot < 1 or (r is not None and v.slot > r)):
            raise UnknownVariable(f"{v}: vertex position outside 1..{r}")
        if arity is not None and v.index >= arity:
            raise TriangularityViolation(
                f"{v} cannot appear in f_{arity}; only coordinates below {arity} are allowed")


def parse_fn(text: str, arity: int | None = None, context: str = "bipartite",
             field: GF | None = None, r: int | None = None) -> FnExpr:
    """Parse ``text`` as the defining function for coordinate slot ``arity``.

    ``context`` may also be given as ``"hyper(r)"``.
    """
    m = re.fullmatch(r"hyper\((\d+)\)", context)
    if m:
        context, r = "hyper", int(m.group(1))
    if context not in CONTEXTS:
        raise WrongContext(context)
    if not text or not text.strip():
        raise FnSyntaxError("empty expression", 0)
    root = _Parser(text).parse()
    _check_vars(root, context, arity, r)
    if field is not None:
        root = _reduce_consts(root, field)
    return FnExpr(root, context, arity, r, field)


def _reduce_consts(n: Node, F: GF) -> Node:
    if n.op == "const":
        return const(n.value % F.p)
    if not n.args:
        return n
    return Node(n.op, tuple(_reduce_consts(a, F) for a in n.args), n.value)


def univariate(text: str, field: GF | None = None) -> FnExpr:
    return parse_fn(text, None, "univariate", field)


# -- unparse --------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "neg": 3, "pow": 4, "var": 5, "const": 5, "elem": 5}


def _fmt(n: Node) -> str:
    op = n.op
    if op == "const":
        return str(n.value)
    if op == "elem":
        return "{%d}" % n.value
    if op == "var":
        return str(n.value)
    if op in ("add", "sub"):
        a, b = n.args
        rb = _fmt(b)
        if _PREC[b.op] <= 1:
            rb = f"({rb})"
        return f"{_fmt(a)} {'+' if op == 'add' else '-'} {rb}"
    if op == "mul":
        a, b = n.args
        la, rb = _fmt(a), _fmt(b)
        if _PREC[a.op] <= 1:
            la = f"({la})"
        if _PREC[b.op] <= 2:
            rb = f"({rb})"
        return f"{la}*{rb}"
    if op == "neg":
        (a,) = n.args
        s = _fmt(a)
        return f"-{s}" if _PREC[a.op] >= 4 else f"-({s})"
    if op == "pow":
        (a,) = n.args
        s = _fmt(a)
        if _PREC[a.op] < 5:
            s = f"({s})"
        return f"{s}^{n.value}"
    raise ValueError(op)


def unparse(f: FnExpr | Node) -> str:
    return _fmt(f.root if isinstance(f, FnExpr) else f)


# -- evaluation -------------------------------------------------------------------

def _eval_node(n: Node, env: dict, F: GF, vec: bool):
    op = n.op
    if op == "var":
        try:
            return env[n.value]
        except KeyError:
            raise MissingVariable(str(n.value)) from None
    if op == "const":
        return F.from_int(n.value)
    if op == "elem":
        return F.check(n.value)
    args = [_eval_node(a, env, F, vec) for a in n.args]
    if vec:
        if op == "add":
            return F.vadd(*args)
        if op == "sub":
            return F.vsub(*args)
        if op == "mul":
            return F.vmul(*args)
        if op == "neg":
            return F.vneg(args[0])
        if op == "pow":
            return F.vpow(args[0], n.value)
    else:
        if op == "add":
            return F.add(*args)
        if op == "sub":
            return F.sub(*args)
        if op == "mul":
            return F.mul(*args)
        if op == "neg":
            return F.neg(args[0])
        if op == "pow":
            return F.pow(args[0], n.value)
    raise ValueError(op)


def _env_key(k) -> Var:
    return k if isinstance(k, Var) else _parse_var(str(k))


def eval_fn(f: "FnExpr | Poly", env: dict, field: GF | None = None) -> FieldElem:
    """Evaluate at a point.  ``env`` maps variable names (or Vars) to elements."""
    F = field or f.field
    if F is None:
        for v in env.values():
            if isinstance(v, FieldElem):
                F = v.field
                break
    if F is None:
        raise ValueError("no field given")
    clean = {_env_key(k): (v.code if isinstance(v, FieldElem) else F.check(v)) for k, v in env.items()}
    if isinstance(f, Poly):
        return FieldElem(F, f.evaluate(clean, F))
    return FieldElem(F, int(_eval_node(f.root, clean, F, False)))


def eval_vec(f: FnExpr, env: dict, field: GF | None = None) -> np.ndarray:
    """Vectorised evaluation; env values are integer arrays of element codes."""
    F = field or f.field
    out = _eval_node(f.root, {_env_key(k): v for k, v in env.items()}, F, True)
    return np.asarray(out, dtype=np.int64)


def compile_fn(f: FnExpr, F: GF):
    """Return ``g(env) -> ndarray`` evaluating ``f`` over arrays."""
    root = f.root

    def g(env):
        return np.asarray(_eval_node(root, env, F, True), dtype=np.int64)
    return g


# -- normal form ------------------------------------------------------------------

_ROLE_ORDER = {"X": 0, "p": 1, "x": 1, "l": 2, "y": 2, "a": 3}


def _var_key(v: Var):
    return (_ROLE_ORDER[v.role], v.slot, v.index)


class Poly:
    """Expanded polynomial: {monomial: coefficient code}.

    A monomial is a tuple of (Var, exponent) pairs sorted by variable.
    """

    def __init__(self, terms: dict, F: GF, context: str = "bipartite"):
        self.F = F
        self.context = context
        self.terms = {m: c for m, c in terms.items() if c != 0}

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms and self.F == other.F

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return unparse(self.to_node())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: [(_var_key(v), e) for v, e in t[0]])

    def to_node(self) -> Node:
        F = self.F
        node = None
        for mono, c in self.sorted_terms():
            factors = []
            negate = False
            if c != 1 or not mono:
                # show small prime-subfield constants as signed integers
                if c < F.p:
                    if F.p > 2 and c > F.p // 2 and mono:
                        negate = True
                        c2 = F.p - c
                    else:
                        c2 = c
                    if c2 != 1 or not mono:
                        factors.append(const(c2))
                else:
                    factors.append(elem(c))
            for v, e in mono:
                vn = Node("var", value=v)
                factors.append(vn if e == 1 else power(vn, e))
            t = factors[0]
            for fct in factors[1:]:
                t = mul(t, fct)
            if node is None:
                node = neg(t) if negate else t
            else:
                node = sub(node, t) if negate else add(node, t)
        return node if node is not None else const(0)

    def to_fn(self, arity=None, r=None) -> FnExpr:
        return FnExpr(self.to_node(), self.context, arity, r, self.F)

    def evaluate(self, env: dict, F: GF | None = None) -> int:
        F = F or self.F
        total = 0
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                try:
                    t = F.mul(t, F.pow(env[v], e))
                except KeyError:
                    raise MissingVariable(str(v)) from None
            total = F.add(total, t)
        return total


def _pmul_terms(a: dict, b: dict, F: GF, reduce: bool) -> dict:
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            exps = dict(ma)
            for v, e in mb:
                exps[v] = exps.get(v, 0) + e
            if reduce:
                exps = {v: ((e - 1) % (F.q - 1)) + 1 for v, e in exps.items()}
            m = tuple(sorted(exps.items(), key=lambda t: _var_key(t[0])))
            out[m] = F.add(out.get(m, 0), F.mul(ca, cb))
    return {m: c for m, c in out.items() if c}


def _expand(n: Node, F: GF, reduce: bool) -> dict:
    op = n.op
    if op == "const":
        c = F.from_int(n.value)
        return {(): c} if c else {}
    if op == "elem":
        return {(): n.value} if n.value else {}
    if op == "var":
        return {((n.value, 1),): 1}
    if op in ("add", "sub"):
        a = _expand(n.args[0], F, reduce)
        b = _expand(n.args[1], F, reduce)
        out = dict(a)
        for m, c in b.items():
            c = c if op == "add" else F.neg(c)
            out[m] = F.add(out.get(m, 0), c)
        return {m: c for m, c in out.items() if c}
    if op == "neg":
        return {m: F.neg(c) for m, c in _expand(n.args[0], F, reduce).items()}
    if op == "mul":
        return _pmul_terms(_expand(n.args[0], F, reduce), _expand(n.args[1], F, reduce), F, reduce)
    if op == "pow":
        base = _expand(n.args[0], F, reduce)
        k = n.value
        result: dict = {(): 1}
        while k:
            if k & 1:
                result = _pmul_terms(result, base, F, reduce)
            k >>= 1
            if k:
                base = _pmul_terms(base, base, F, reduce)
        return result
    raise ValueError(op)


def normal_form(f: FnExpr, reduce: bool = False, field: GF | None = None) -> Poly:
    """Fully expanded form.  With ``reduce`` exponents are cut down by x^q = x."""
    F = field or f.field
    if F is None:
        raise ValueError("normal_form needs a field")
    return Poly(_expand(f.root, F, reduce), F, f.context)


# -- symmetry and permutation checks ------------------------------------------------

def swap_sides(f: FnExpr) -> FnExpr:
    """Exchange the roles of x and y (or p and l)."""
    flip = {"x": "y", "y": "x", "p": "l", "l": "p"}

    def go(n: Node) -> Node:
        if n.op == "var":
            v = n.value
            return Node("var", value=Var(flip.get(v.role, v.role), v.index, v.slot))
        if not n.args:
            return n
        return Node(n.op, tuple(go(a) for a in n.args), n.value)
    return f.with_root(go(f.root))


def _assignments(F: GF, nvars: int, chunk: int = 1 << 18):
    """Yield blocks of all q^nvars assignments as (nvars, m) code arrays."""
    total = F.q**nvars
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        cols = []
        for _ in range(nvars):
            cols.append(idx % F.q)
            idx = idx // F.q
        yield np.array(cols) if cols else np.zeros((0, 1), dtype=np.int64)


def check_symmetric(f: FnExpr, spec: GF, rng=None, exhaustive_limit: int = 10**7,
                    samples: int = 10**5) -> bool:
    """True iff f(x, y) = f(y, x) as functions on GF(q)."""
    if f.context != "ordinary":
        raise WrongContext("symmetry is defined for ordinary-context functions")
    n = f.arity - 1 if f.arity else f.max_index()
    g = swap_sides(f)
    xs = [Var("x", i) for i in range(1, n + 1)]
    ys = [Var("y", i) for i in range(1, n + 1)]
    allv = xs + ys
    if spec.q ** (2 * n) <= exhaustive_limit:
        for block in _assignments(spec, 2 * n):
            env = {v: block[i] for i, v in enumerate(allv)}
            if not np.array_equal(np.broadcast_to(eval_vec(f, env, spec), block.shape[1:]),
                                  np.broadcast_to(eval_vec(g, env, spec), block.shape[1:])):
                return False
        return True
    rng = rng if rng is not None else np.random.default_rng(0)
    block = rng.integers(0, spec.q, size=(2 * n, samples))
    env = {v: block[i] for i, v in enumerate(allv)}
    if not np.array_equal(np.broadcast_to(eval_vec(f, env, spec), (samples,)),
                          np.broadcast_to(eval_vec(g, env, spec), (samples,))):
        return False
    # reduced normal forms represent functions uniquely, so this is exact
    return normal_form(f, True, spec).terms == normal_form(g, True, spec).terms


def perm_poly_check(f: FnExpr, spec: GF) -> bool:
    """True iff x -> f(x) permutes GF(q)."""
    xs = spec.elements()
    vals = np.broadcast_to(eval_vec(f, {Var("X"): xs}, spec), xs.shape)
    return len(np.unique(vals)) == spec.q


def dlw_a(k: int) -> str:
    """A_k = X^k ((X+1)^k - X^k) as DSL text."""
    return f"X^{k}*((X+1)^{k} - X^{k})"


def dlw_b(k: int, q: int) -> str:
    return f"((X+1)^{2 * k} - 1)*X^{q - 1 - k} - 2*X^{q - 1}"


def is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def permpoly_table(spec: GF) -> list[dict]:
    """Bijectivity of A_k and B_k for 1 <= k <= q-1 against the p-power prediction."""
    rows = []
    for k in range(1, spec.q):
        a = perm_poly_check(univariate(dlw_a(k), spec), spec)
        b = perm_poly_check(univariate(dlw_b(k, spec.q), spec), spec)
        pred = is_power_of(k, spec.p)
        rows.append({"k": k, "A": a, "B": b, "predicted": pred, "ok": a == pred and b == pred})
    return rows


def interpolate(values, spec: GF) -> FnExpr:
    """The univariate polynomial of degree < q taking ``values[a]`` at code a."""
    q = spec.q
    vals = [int(v) for v in values]
    coeffs = [vals[0]]
    for k in range(1, q):
        s = 0
        for a in range(q):
            if vals[a]:
                s = spec.add(s, spec.mul(vals[a], spec.pow(a, q - 1 - k) if (a or q - 1 - k) else 1))
        coeffs.append(spec.neg(s))
    terms = {}
    for k, c in enumerate(coeffs):
        if c:
            terms[((Var("X"), k),) if k else ()] = c
    return Poly(terms, spec, "univariate").to_fn()


def substitute(f: FnExpr, mapping: dict[Var, Node]) -> Node:
    def go(n: Node) -> Node:
        if n.op == "var":
            return mapping.get(n.value, n)
        if not n.args:
            return n
        return Node(n.op, tuple(go(a) for a in n.args), n.value)
    return go(f.root)


# -- system files ---------------------------------------------------------------------

@dataclass
class SystemFile:
    fs: list[FnExpr]
    field: GF | None = None
    kind: str = "bipartite"


def read_system(path: str | Path, field: GF | None = None) -> SystemFile:
    """Read a system file: one f_i per line, starting at f_2.

    Optional directives: ``field p e`` and ``kind bipartite|ordinary|digraph``.
    """
    text = Path(path).read_text(encoding="utf-8")
    return parse_system(text, field)


def parse_system(text: str, field: GF | None = None) -> SystemFile:
    lines = []
    file_field = None
    kind = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "field" and len(words) == 3 and words[1].isdigit():
            file_field = make_field(int(words[1]), int(words[2]))
            continue
        if words[0] == "kind" and len(words) == 2:
            kind = words[1]
            continue
        lines.append(line)
    F = file_field or field
    if kind is None:
        kind = "ordinary" if any(re.search(r"\b[xy]\d", ln) for ln in lines) else "bipartite"
    ctx = "bipartite" if kind == "bipartite" else "ordinary"
    fs = [parse_fn(ln, i + 2, ctx, F) for i, ln in enumerate(lines)]
    return SystemFile(fs, F, kind)


def format_system(fs: Iterable[FnExpr], field: GF | None = None, kind: str | None = None) -> str:
    out = []
    if field is not None:
        out.append(f"field {field.p} {field.e}")
    if kind is not None:
        out.append(f"kind {kind}")
    out.extend(unparse(f) for f in fs)
    return "\n".join(out) + "\n"
