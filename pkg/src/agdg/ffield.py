"""Finite fields GF(p^e) in polynomial-basis representation.

An element is stored as its canonical integer code sum(c_i * p**i), where
c_0..c_{e-1} are the coefficients of its residue modulo the field modulus.
Scalar operations work on plain ints.  The ``v*`` methods apply the same
operations elementwise to numpy integer arrays, which is what the graph
engine uses for bulk neighbour generation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DegreeZero, DivisionByZero, MixedFields, NonPrime, Overflow

# fields up to this size get exp/log tables for vectorised multiplication
TABLE_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomial helpers over GF(p), little-endian coefficient lists ---------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = _trim(list(a))
    qt = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        qt[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return _trim(qt), a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], k: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while k:
        if k & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        k >>= 1
    return result


def is_irreducible(poly: list[int], p: int) -> bool:
    """Irreducibility of a monic polynomial over GF(p)."""
    e = len(poly) - 1
    if e <= 0:
        return False
    if e == 1:
        return True
    # a root means a linear factor
    for x in range(p):
        if sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p == 0:
            return False
    if e <= 3:
        return True
    xpow = [0, 1]
    for _ in range(e // 2):
        xpow = _ppowmod(xpow, p, poly, p)
        if len(_pgcd(poly, _psub(xpow, [0, 1], p), p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # tuples ordered low-degree coefficient first
    for low in itertools.product(range(p), repeat=e):
        poly = list(low) + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # cannot happen


class GF:
    """The field GF(p^e).  Build instances with :func:`make_field`."""

    def __init__(self, p: int, e: int, modulus: tuple[int, ...]):
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = modulus
        self._exp: np.ndarray | None = None
        self._log: np.ndarray | None = None
        self._prim: int | None = None

    # identity -------------------------------------------------------------
    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (make_field, (self.p, self.e))

    @property
    def is_prime_field(self) -> bool:
        return self.e == 1

    def describe(self) -> str:
        code = sum(c * self.p**i for i, c in enumerate(self.modulus))
        return f"{self.p}^{self.e}/{code}"

    def modulus_str(self) -> str:
        terms = []
        for i in range(len(self.modulus) - 1, -1, -1):
            c = self.modulus[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    # coefficient vectors ----------------------------------------------------
    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, cs) -> int:
        return sum((c % self.p) * self.p**i for i, c in enumerate(cs))

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    def check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise ValueError(f"{a} is not an element code of {self}")
        return a

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> GF(p) -> GF(q)."""
        return int(n) % self.p

    # scalar arithmetic --------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_coeffs(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_coeffs(-x for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _polymul(self, a: int, b: int) -> int:
        prod = _pmul(_trim(self.coeffs(a)), _trim(self.coeffs(b)), self.p)
        return self.from_coeffs(_pmod(prod, list(self.modulus), self.p))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self.q <= TABLE_LIMIT:
            exp, log = self.tables()
            return int(exp[(int(log[a]) + int(log[b])) % (self.q - 1)])
        return self._polymul(a, b)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        result, base = 1, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        # extended Euclid on polynomials
        p = self.p
        r0, r1 = list(self.modulus), _trim(self.coeffs(a))
        s0, s1 = [], [1]
        while len(r1) > 1:
            qt, rem = _pdivmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _psub(s0, _pmul(qt, s1, p), p)
        c = pow(r1[0], p - 2, p)
        return self.from_coeffs(_pmod([x * c % p for x in s1], list(self.modulus), p))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, self.p ** (times % self.e) if self.e > 1 else 1)

    def order(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("zero has no multiplicative order")
        n = self.q - 1
        for r in prime_factors(self.q - 1):
            while n % r == 0 and self.pow(a, n // r) == 1:
                n //= r
        return n

    def primitive(self) -> int:
        if self._prim is None:
            if self.q == 2:
                self._prim = 1
            else:
                rs = prime_factors(self.q - 1)
                for g in range(1, self.q):
                    # use the table-free path: tables depend on the primitive
                    if all(self._slowpow(g, (self.q - 1) // r) != 1 for r in rs):
                        self._prim = g
                        break
        return self._prim

    def _slowpow(self, a: int, k: int) -> int:
        if self.e == 1:
            return pow(a, k, self.p)
        result, base = 1, a
        while k:
            if k & 1:
                result = self._polymul(result, base)
            base = self._polymul(base, base)
            k >>= 1
        return result

    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """exp/log tables relative to the primitive element."""
        if self._exp is None:
            if self.q > TABLE_LIMIT:
                raise Overflow(f"{self} is too large for vectorised arithmetic")
            g = self.primitive()
            exp = np.zeros(self.q - 1, dtype=np.int64)
            log = np.zeros(self.q, dtype=np.int64)
            x = 1
            for i in range(self.q - 1):
                exp[i] = x
                log[x] = i
                x = self._polymul(x, g) if self.e > 1 else x * g % self.p
            self._exp, self._log = exp, log
        return self._exp, self._log

    # vectorised arithmetic ---------------------------------------------------
    def _digits(self, a: np.ndarray) -> list[np.ndarray]:
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a = a // self.p
        return out

    def _undigits(self, ds) -> np.ndarray:
        acc = np.zeros_like(ds[0])
        for i in range(self.e - 1, -1, -1):
            acc = acc * self.p + ds[i]
        return acc

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % self.p for x, y in zip(da, db)])

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.e == 1 and self.p < (1 << 31):
            return a * b % self.p
        exp, log = self.tables()
        r = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return np.ones_like(a)
        if k == 1:
            return a.copy()
        if self.e == 1 and self.q > TABLE_LIMIT:
            result, base = np.ones_like(a), a
            while k:
                if k & 1:
                    result = self.vmul(result, base)
                base = self.vmul(base, base)
                k >>= 1
            return result
        exp, log = self.tables()
        r = exp[(log[a] * (k % (self.q - 1))) % (self.q - 1)]
        return np.where(a == 0, 0, r)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        exp, log = self.tables()
        return exp[(-log[a]) % (self.q - 1)]

    def vconst(self, c: int, shape) -> np.ndarray:
        return np.full(shape, c, dtype=np.int64)

    # subfields ---------------------------------------------------------------
    def rank(self, M) -> int:
        """Rank over GF(q) of an integer-coded matrix (row reduction)."""
        A = np.array(M, dtype=np.int64, copy=True)
        if A.ndim != 2 or A.size == 0:
            return 0
        r = 0
        for c in range(A.shape[1]):
            piv = np.nonzero(A[r:, c])[0]
            if not len(piv):
                continue
            i = r + int(piv[0])
            A[[r, i]] = A[[i, r]]
            A[r] = self.vmul(A[r], self.inv(int(A[r, c])))
            for i in np.nonzero(A[:, c])[0]:
                if i != r:
                    A[i] = self.vsub(A[i], self.vmul(A[r], int(A[i, c])))
            r += 1
            if r == A.shape[0]:
                break
        return r

    def subfield(self, d: int) -> np.ndarray:
        """Codes of the subfield GF(p^d), i.e. the fixed points of x -> x^(p^d)."""
        if self.e % d:
            raise ValueError(f"GF({self.p}^{d}) is not a subfield of {self}")
        xs = self.elements()
        return xs[self.vpow(xs, self.p**d) == xs]


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> GF:
    """GF(p^e) with the lexicographically smallest monic irreducible modulus."""
    p, e = int(p), int(e)
    if e < 1:
        raise DegreeZero("extension degree must be at least 1")
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if p**e >= 1 << 63:
        raise Overflow(f"{p}^{e} does not fit in 63 bits")
    return GF(p, e, smallest_irreducible(p, e))


def field_of_order(q: int) -> GF:
    """GF(q) for a prime power q."""
    q = int(q)
    for p in prime_factors(q)[:1]:
        e = 0
        n = q
        while n % p == 0:
            n //= p
            e += 1
        if n == 1:
            return make_field(p, e)
    raise NonPrime(f"{q} is not a prime power")


def parse_field(text: str) -> GF:
    """Accepts ``p^e``, ``p**e`` or a plain prime power such as ``9``."""
    t = text.replace("**", "^").strip()
    if "^" in t:
        p, e = t.split("^", 1)
        return make_field(int(p), int(e))
    return field_of_order(int(t))


# -- element wrapper ---------------------------------------------------------

@dataclass(frozen=True)
class FieldElem:
    field: GF
    code: int

    def __post_init__(self):
        self.field.check(self.code)

    def _other(self, b) -> int:
        if isinstance(b, FieldElem):
            if b.field != self.field:
                raise MixedFields(f"{self.field} vs {b.field}")
            return b.code
        return self.field.from_int(b)

    def _wrap(self, c: int) -> "FieldElem":
        return FieldElem(self.field, c)

    def __add__(self, b):
        return self._wrap(self.field.add(self.code, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return self._wrap(self.field.sub(self.code, self._other(b)))

    def __rsub__(self, b):
        return self._wrap(self.field.sub(self._other(b), self.code))

    def __mul__(self, b):
        return self._wrap(self.field.mul(self.code, self._other(b)))

    __rmul__ = __mul__

    def __truediv__(self, b):
        return self._wrap(self.field.div(self.code, self._other(b)))

    def __neg__(self):
        return self._wrap(self.field.neg(self.code))

    def __pow__(self, k: int):
        return self._wrap(self.field.pow(self.code, k))

    def inverse(self) -> "FieldElem":
        return self._wrap(self.field.inv(self.code))

    def frobenius(self) -> "FieldElem":
        return self._wrap(self.field.frobenius(self.code))

    def __int__(self):
        return self.code

    def __repr__(self):
        return f"{self.code}@{self.field!r}"


def arith(spec: GF, op: str, a: FieldElem | int, b: FieldElem | int | None = None) -> FieldElem:
    """Dispatch a named field operation.  ``b`` is an exponent for ``pow``."""

    def code(x):
        if isinstance(x, FieldElem):
            if x.field != spec:
                raise MixedFields(f"{x.field} is not {spec}")
            return x.code
        return spec.check(x)

    ca = code(a)
    if op == "add":
        r = spec.add(ca, code(b))
    elif op == "sub":
        r = spec.sub(ca, code(b))
    elif op == "mul":
        r = spec.mul(ca, code(b))
    elif op == "div":
        r = spec.div(ca, code(b))
    elif op == "inv":
        r = spec.inv(ca)
    elif op == "neg":
        r = spec.neg(ca)
    elif op == "pow":
        r = spec.pow(ca, int(b))
    elif op == "frobenius":
        r = spec.frobenius(ca)
    else:
        raise ValueError(f"unknown operation {op!r}")
    return FieldElem(spec, r)


def enumerate_field(spec: GF) -> list[FieldElem]:
    return [FieldElem(spec, c) for c in range(spec.q)]


def primitive_element(spec: GF) -> FieldElem:
    return FieldElem(spec, spec.primitive())
