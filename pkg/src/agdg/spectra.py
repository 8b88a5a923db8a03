"""Spectra of Wenger-type graphs: closed forms, root counting, distance-two graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constructions import check_injective_moment, linearized_gs
from .errors import NotInjective, NotRegular, OutOfRange, TooLarge
from .ffield import GF, field_of_order
from .fndsl import Var, eval_vec, univariate
from .graphcore import ExplicitGraph, Graph
from .graphcore.ops import DENSE_CAP, adjacency_dense, numeric_spectrum


@dataclass(frozen=True)
class GaussianBinomial:
    n: int
    k: int
    p: int

    @property
    def value(self) -> int:
        n, k, p = self.n, self.k, self.p
        if k == 0:
            return 1
        if k > n or k < 0:
            return 0
        num = den = 1
        for t in range(k):
            num *= p**n - p**t
            den *= p**k - p**t
        return num // den

    def __int__(self):
        return self.value


def gbinom(n: int, k: int, p: int) -> int:
    return GaussianBinomial(n, k, p).value


@dataclass
class SpectrumReport:
    """Eigenvalues sign * sqrt(i*q), keyed by (sign, i); sign 0 is the eigenvalue 0."""

    q: int
    mult: dict[tuple[int, int], int]
    source: str = ""
    components: int | None = None
    residual: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.mult.values())

    def distinct(self) -> list[tuple[int, int]]:
        return sorted((k for k, v in self.mult.items() if v), key=lambda k: k[0] * math.sqrt(k[1]))

    @staticmethod
    def value_of(key: tuple[int, int], q: int) -> float:
        s, i = key
        return 0.0 if s == 0 else s * math.sqrt(i * q)

    def values(self) -> np.ndarray:
        out = []
        for key, m in self.mult.items():
            out.extend([self.value_of(key, self.q)] * m)
        return np.sort(np.array(out, dtype=float))

    def symbol(self, key: tuple[int, int]) -> str:
        s, i = key
        if s == 0:
            return "0"
        sign = "-" if s < 0 else ""
        if i == self.q:
            return f"{sign}{self.q}"
        return f"{sign}sqrt({i * self.q})"

    def compare(self, numeric) -> float:
        """Max deviation against a numeric spectrum; stored as ``residual``."""
        a, b = self.values(), np.sort(np.asarray(numeric, dtype=float))
        self.residual = float("inf") if len(a) != len(b) else float(np.max(np.abs(a - b), initial=0.0))
        return self.residual

    def symmetric(self) -> bool:
        return all(self.mult.get((-s, i), 0) == m for (s, i), m in self.mult.items() if s)

    def as_dict(self) -> dict:
        return {
            "q": self.q, "source": self.source, "total": self.total,
            "components": self.components, "residual": self.residual,
            "eigenvalues": [{"value": self.symbol(k), "numeric": self.value_of(k, self.q),
                             "multiplicity": self.mult[k]} for k in self.distinct()],
        }


def _paired(q: int, pos: dict[int, int], zero: int, source: str, comps=None) -> SpectrumReport:
    mult = {(0, 0): zero} if zero else {}
    for i, m in pos.items():
        if m:
            mult[(1, i)] = m
            mult[(-1, i)] = m
    return SpectrumReport(q, mult, source, comps)


def wenger_spectrum_closed(m: int, q: int) -> SpectrumReport:
    """Closed-form spectrum of W_m(q); the +-q pair takes the residual count."""
    if not 1 <= m <= q - 1:
        raise OutOfRange(f"need 1 <= m <= q-1, got m={m}, q={q}")

    def mu(i):
        s = 0
        for d in range(i, m + 1):
            for k in range(0, d - i + 1):
                s += (-1) ** k * math.comb(q - i, k) * q ** (d - i - k)
        return (q - 1) * math.comb(q, i) * s

    pos = {i: mu(i) for i in range(1, m + 1)}
    # the i = 0 value counts the eigenvalue 0 once for each sign
    zero = 2 * mu(0)
    rest = 2 * q ** (m + 1) - zero - 2 * sum(pos.values())
    pos[q] = rest // 2
    rep = _paired(q, pos, zero, f"W_{m}({q}) closed form", 1)
    if rest % 2 or rest < 0:
        rep.notes.append(f"residual count for +-q is {rest}")
    return rep


def _eval_matrix(gs, F: GF) -> np.ndarray:
    xs = F.elements()
    cols = [np.ones(F.q, dtype=np.int64)]
    for g in gs:
        g = univariate(g, F) if isinstance(g, str) else g
        cols.append(np.broadcast_to(eval_vec(g, {Var("X"): xs}, F), xs.shape).astype(np.int64))
    return np.stack(cols, axis=1)          # (q, m+1)


def root_count_histogram(gs, F: GF, limit: int = 10**8) -> np.ndarray:
    """hist[i] = #{omega : F_omega has exactly i roots in GF(q)}."""
    q, m1 = F.q, len(gs) + 1
    if q ** (m1 + 1) > limit:
        raise TooLarge(f"q^(m+2) = {q ** (m1 + 1)} evaluations exceed {limit}")
    E = _eval_matrix(gs, F)
    hist = np.zeros(q + 1, dtype=np.int64)
    total = q**m1
    chunk = max(1, 2**22 // q)
    for s in range(0, total, chunk):
        idx = np.arange(s, min(total, s + chunk), dtype=np.int64)
        acc = np.zeros((len(idx), q), dtype=np.int64)
        rem = idx.copy()
        for j in range(m1):
            w = rem % q
            rem //= q
            acc = F.vadd(acc, F.vmul(w[:, None], E[None, :, j]))
        hist += np.bincount((acc == 0).sum(axis=1), minlength=q + 1)
    return hist


def generalized_wenger_spectrum(gs, q) -> SpectrumReport:
    """Spectrum of G_m(q) with f_k = g_k(p1) l1, by counting roots of every F_omega."""
    F = q if isinstance(q, GF) else field_of_order(int(q))
    if not check_injective_moment(gs, F):
        raise NotInjective("u -> (1, g_2(u), ...) is not injective")
    hist = root_count_histogram(gs, F)
    m1 = len(gs) + 1
    comps = F.q ** (m1 - F.rank(_eval_matrix(gs, F).T))
    pos = {i: int(hist[i]) for i in range(1, F.q + 1)}
    return _paired(F.q, pos, 2 * int(hist[0]), f"G_{m1 - 1}({F.q}) root count", comps)


def linearized_wenger_spectrum(m: int, q: int) -> SpectrumReport:
    F = field_of_order(q)
    p, e = F.p, F.e

    def ratio(i):
        num = den = 1
        for j in range(e - i):
            num *= (p**e - p**j) ** 2
            den *= p ** (e - i) - p**j
        return num // den

    if m >= e:
        c = q ** (m - e)
        pos = {p**i: c * p ** (e - i) * ratio(i) for i in range(e + 1)}
        # the printed count for 0 is per sign, like the i = 0 term for W_m(q)
        zero = 2 * c * sum((p**e - p ** (e - i)) * ratio(i) for i in range(1, e + 1))
        return _paired(q, pos, zero, f"L_{m}({q}) closed form", c)

    def n_(i):
        s = 0
        for j in range(m - i):
            s += (-1) ** j * p ** (j * (j - 1) // 2) * gbinom(e - i, j, p) * (q ** (m - i - j) - 1)
        return gbinom(e, i, p) * s

    pos = {p**i: p ** (e - i) * n_(i) for i in range(m)}
    pos[q] = pos.get(q, 0) + 1
    zero = 2 * (q ** (m + 1) - 1 - sum(p ** (e - i) * n_(i) for i in range(m)))
    return _paired(q, pos, zero, f"L_{m}({q}) closed form", 1)


def linearized_via_roots(m: int, q: int) -> SpectrumReport:
    F = field_of_order(q)
    return generalized_wenger_spectrum(linearized_gs(m, F), F)


@dataclass
class DistanceTwo:
    graph: ExplicitGraph
    codes: np.ndarray          # original codes of the chosen side
    residual: float            # deviation of {+-sqrt(lambda + d)} from spec(G)


def distance_two_graph(G: Graph, side: str = "lines", cap: int = DENSE_CAP) -> DistanceTwo:
    """Graph on one side of a bipartite G, joining vertices with a common neighbour."""
    if not G.bipartite:
        raise NotRegular("distance-two graph needs a bipartite graph")
    D, vc = adjacency_dense(G, cap)
    pts = G.is_point(vc)
    mask = ~pts if side.startswith("l") else pts
    B = D[np.ix_(mask, ~mask)]
    S = B @ B.T
    deg = np.diag(S).copy()
    if len(set(deg.tolist())) > 1:
        raise NotRegular("side is not regular")
    A = (S > 0).astype(float)
    np.fill_diagonal(A, 0.0)
    iu = np.argwhere(np.triu(A, 1) > 0)
    H = ExplicitGraph(int(mask.sum()), iu, name=f"H({G.name})")
    lam = np.linalg.eigvalsh(A)
    d = deg[0] if len(deg) else 0
    r = np.sqrt(np.clip(lam + d, 0, None))
    pred = np.sort(np.concatenate([r, -r]))
    full = numeric_spectrum(G, cap)
    res = float(np.max(np.abs(pred - full))) if len(pred) == len(full) else float("inf")
    return DistanceTwo(H, vc[mask], res)


def eigen_bounds_check(G: Graph, q: int | None = None, cap: int = DENSE_CAP) -> dict:
    """lambda_2 = largest |eigenvalue| below the degree; Ramanujan and 2 sqrt(q) flags."""
    prof = G.degree_profile()
    if len(prof) != 1:
        raise NotRegular(f"degree profile {prof}")
    d = next(iter(prof))
    if G.num_vertices() > cap:
        raise TooLarge("graph exceeds the dense cap")
    ev = numeric_spectrum(G, cap)
    small = np.abs(ev)[np.abs(ev) < d - 1e-9]
    lam2 = float(small.max()) if len(small) else 0.0
    q = d if q is None else q
    return {
        "degree": d, "lambda2": lam2,
        "ramanujan": bool(lam2 <= 2 * math.sqrt(max(d - 1, 0)) + 1e-9),
        "lambda2_within_2sqrtq": bool(lam2 <= 2 * math.sqrt(q) + 1e-9),
    }


__all__ = [
    "GaussianBinomial", "gbinom", "SpectrumReport", "wenger_spectrum_closed",
    "root_count_histogram", "generalized_wenger_spectrum", "linearized_wenger_spectrum",
    "linearized_via_roots", "DistanceTwo", "distance_two_graph", "eigen_bounds_check",
]
