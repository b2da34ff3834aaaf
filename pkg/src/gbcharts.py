# gbcharts.py
'''
Toric charts on Z = B_- ∩ B w0bar B for GL_n/B: the string chart, the ideal chart,
the universal weight matrix, the coordinate changes between them (for i_0 and for
arbitrary reduced words of w_0 through braid moves) and the Chamber Ansatz.
'''

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix

from exactnum import domain_of, is_zero
import genmat
from genmat import GenericMatrix
from toolkit_constants import Chart, FactorKind
import weyl
from weyl import BraidMove, PositiveRoot, ReducedWord

log = logging.getLogger(__name__)


# -----------------------
# Exceptions
# -----------------------

class ChartError(Exception):
    pass

class WordNotSupported(ChartError):
    pass

class InvalidMove(ChartError, weyl.InvalidMove):
    pass

class ZeroChamberMinor(ChartError):
    pass


# -----------------------
# Points and Z elements
# -----------------------

@dataclass
class StringPoint:
    d: List[Any]
    z: List[Any]
    word: ReducedWord

    def __post_init__(self):
        if len(self.d) != self.word.n:
            raise ChartError(f"string point needs {self.word.n} highest weight values, got {len(self.d)}")
        if len(self.z) != len(self.word):
            raise ChartError(f"word of length {len(self.word)} with {len(self.z)} string coordinates")
        if self.word.target != weyl.Permutation.longest(self.word.n):
            raise WordNotSupported(f"{self.word} is not a reduced word for w0")


@dataclass
class IdealPoint:
    d: List[Any]
    m: Dict[PositiveRoot, Any]
    word: ReducedWord

    def __post_init__(self):
        roots = weyl.root_order(self.word)
        if self.word.target != weyl.Permutation.longest(self.word.n):
            raise WordNotSupported(f"{self.word} is not a reduced word for w0")
        if set(self.m) != set(roots):
            raise ChartError("ideal coordinates must be keyed by every positive root exactly once")

    @staticmethod
    def from_list(d: Sequence[Any], m: Sequence[Any], word: ReducedWord) -> "IdealPoint":
        roots = weyl.root_order(word)
        if len(m) != len(roots):
            raise ChartError(f"{len(roots)} ideal coordinates expected, got {len(m)}")
        return IdealPoint(list(d), dict(zip(roots, m)), word)

    def m_list(self) -> List[Any]:
        return [self.m[r] for r in weyl.root_order(self.word)]


@dataclass
class ZElement:
    '''b together with the witnesses b = u1 d w0bar u2 and b = [b]_- t_R'''
    b: GenericMatrix
    lower: GenericMatrix
    t_R: GenericMatrix
    chart: Optional[Chart] = None
    word: Optional[ReducedWord] = None
    coords: Dict[str, Any] = field(default_factory=dict)
    u1: Optional[GenericMatrix] = None
    d: Optional[GenericMatrix] = None
    u2: Optional[GenericMatrix] = None

    def witness(self) -> Tuple[GenericMatrix, GenericMatrix, GenericMatrix]:
        if self.u1 is None:
            self.u1, self.d, self.u2 = decompose(self.b)
        return self.u1, self.d, self.u2

    def superpotential(self) -> Any:
        u1, _, u2 = self.witness()
        return superpotential(u1, u2)

    def highest_weight(self) -> List[Any]:
        return self.witness()[1].diagonal()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chart": self.chart.chart_name if self.chart else None,
            "word": list(self.word.indices) if self.word else None,
            "d": [str(x) for x in self.highest_weight()],
            "coords": {k: str(v) for k, v in self.coords.items()},
            "b": self.b.to_lists(),
            "weight": [str(x) for x in self.t_R.diagonal()],
            "superpotential": str(self.superpotential()),
        }


def superpotential(u1: GenericMatrix, u2: GenericMatrix) -> Any:
    return genmat.chi(u1) + genmat.chi(u2)


def _antidiagonal(n: int, domain) -> GenericMatrix:
    return GenericMatrix([[domain.one if i + j == n - 1 else domain.zero for j in range(n)] for i in range(n)], domain)


def decompose(b: GenericMatrix) -> Tuple[GenericMatrix, GenericMatrix, GenericMatrix]:
    '''
    b = u1 d w0bar u2 with u1, u2 upper unitriangular and d diagonal. b w0bar^{-1} is
    upper * diagonal * lower; conjugating by the antidiagonal permutation turns that
    into an LDU factorization.
    '''
    n, dom = b.n, b.domain
    p0 = _antidiagonal(n, dom)
    m = b @ genmat.w0bar_inverse(n, dom)
    f = genmat.ldu(p0 @ m @ p0)
    u1 = p0 @ f.lower @ p0
    d = p0 @ f.diagonal @ p0
    ell = p0 @ f.upper @ p0
    u2 = genmat.w0bar_inverse(n, dom) @ ell @ genmat.w0bar(n, dom)
    return u1, d, u2


# -----------------------
# String chart
# -----------------------

def string_u1(z: Sequence[Any], word: ReducedWord) -> GenericMatrix:
    '''u1 = iota(eta(x_{-i}(z)))'''
    u = genmat.word_product(genmat.factors_along(FactorKind.X_NEG, word.indices, z), word.n)
    return genmat.iota(genmat.twist_eta(u))


def string_chart(p: StringPoint) -> ZElement:
    n = p.word.n
    u1 = string_u1(p.z, p.word)
    dom = u1.domain
    d = genmat.diagonal([dom.convert(x) for x in p.d], dom)
    f = genmat.ldu(u1 @ d @ genmat.w0bar(n, dom))
    u2 = genmat.inverse(f.upper)
    b = f.lower @ f.diagonal
    coords = {f"z{k}": v for k, v in enumerate(p.z, start=1)}
    log.debug("string chart n=%d word=%s", n, p.word)
    return ZElement(b=b, lower=f.lower, t_R=f.diagonal, chart=Chart.STRING, word=p.word,
                    coords=coords, u1=u1, d=d, u2=u2)


def weight_matrix_string(p: StringPoint) -> GenericMatrix:
    '''(t_R)_{n-j+1} = d_j prod_{i_m = j-1} z_m / prod_{i_m = j} z_m, valid for i_0 only'''
    n = p.word.n
    if p.word.indices != weyl.word_i0(n).indices:
        raise WordNotSupported("closed-form string weight matrix is stated for i_0")
    dom = domain_of(p.z[0]) if p.z else domain_of(p.d[0])
    entries = [None] * n
    for j in range(1, n + 1):
        val = dom.convert(p.d[j - 1])
        for zm, im in zip(p.z, p.word.indices):
            if im == j - 1:
                val = val * zm
            elif im == j:
                val = val / zm
        entries[n - j] = val
    return genmat.diagonal(entries, dom)


# -----------------------
# Ideal chart
# -----------------------

def universal_weight_matrix(d: Sequence[Any], m: Dict[PositiveRoot, Any]) -> GenericMatrix:
    '''(n-j+1)-th entry d_j prod_{l<j} m_{a_{lj}} / prod_{l>=j} m_{a_{j,l+1}}'''
    n = len(d)
    dom = domain_of(next(iter(m.values()))) if m else domain_of(d[0])
    entries = [None] * n
    for j in range(1, n + 1):
        val = dom.convert(d[j - 1])
        for l in range(1, j):
            val = val * m[PositiveRoot(l, j)]
        for l in range(j, n):
            val = val / m[PositiveRoot(j, l + 1)]
        entries[n - j] = val
    return genmat.diagonal(entries, dom)


def ideal_lower(m: Dict[PositiveRoot, Any], word: ReducedWord) -> GenericMatrix:
    roots = weyl.root_order(word)
    dom = domain_of(m[roots[0]])
    factors = [genmat.y(i, dom.one / m[r]) for i, r in zip(word.indices, roots)]
    return genmat.word_product(factors, word.n, dom)


def ideal_chart(p: IdealPoint) -> ZElement:
    lower = ideal_lower(p.m, p.word)
    t_R = universal_weight_matrix(p.d, p.m)
    b = lower @ t_R
    coords = {str(r): v for r, v in p.m.items()}
    return ZElement(b=b, lower=lower, t_R=t_R, chart=Chart.IDEAL, word=p.word, coords=coords)


# -----------------------
# Coordinate changes for i_0
# -----------------------

def _s(n: int, k: int) -> int:
    return sum(n - j for j in range(1, k))


def string_to_ideal(z: Sequence[Any], n: int) -> List[Any]:
    '''m_{s_k+a} = z_{1+s_{n-a}} if k=1, else z_{k+s_{n-k-a+1}} / z_{k-1+s_{n-k-a+1}}'''
    N = n * (n - 1) // 2
    if len(z) != N:
        raise ChartError(f"{N} string coordinates expected, got {len(z)}")
    m: List[Any] = [None] * N
    for k in range(1, n):
        for a in range(1, n - k + 1):
            if k == 1:
                val = z[_s(n, n - a)]
            else:
                s = _s(n, n - k - a + 1)
                val = z[k + s - 1] / z[k - 1 + s - 1]
            m[_s(n, k) + a - 1] = val
    return m


def string_ideal_exponents(n: int) -> Matrix:
    '''E[r, c] = exponent of z_{c+1} in m_{r+1}'''
    N = n * (n - 1) // 2
    E = Matrix.zeros(N, N)
    for k in range(1, n):
        for a in range(1, n - k + 1):
            r = _s(n, k) + a - 1
            if k == 1:
                E[r, _s(n, n - a)] += 1
            else:
                s = _s(n, n - k - a + 1)
                E[r, k + s - 1] += 1
                E[r, k - 1 + s - 1] -= 1
    return E


def _apply_monomials(values: Sequence[Any], E: Matrix) -> List[Any]:
    dom = domain_of(values[0])
    out = []
    for r in range(E.rows):
        acc = dom.one
        for c in range(E.cols):
            e = int(E[r, c])
            if e:
                acc = acc * values[c] ** e
        out.append(acc)
    return out


def ideal_to_string(m: Sequence[Any], n: int) -> List[Any]:
    '''inverse of the unimodular monomial map string_to_ideal'''
    E = string_ideal_exponents(n)
    return _apply_monomials(m, E.inv())


# -----------------------
# Braid moves on coordinates
# -----------------------

def _checked(word: ReducedWord, move: BraidMove) -> Tuple[int, ...]:
    try:
        return weyl.apply_move(word.indices, move)
    except weyl.InvalidMove as e:
        raise InvalidMove(str(e)) from e


def braid_transform_m(word: ReducedWord, move: BraidMove, m: Dict[PositiveRoot, Any]) -> Tuple[ReducedWord, Dict[PositiveRoot, Any]]:
    '''
    3-move on positions carrying roots a, a+b, b:
    m''_a = m'_{a+b}(m'_a+m'_b)/m'_b, m''_{a+b} = m'_a m'_b/(m'_a+m'_b), m''_b = m'_{a+b}(m'_a+m'_b)/m'_a.
    2-moves only re-order the roots.
    '''
    new_idx = _checked(word, move)
    new_word = ReducedWord(new_idx, word.n)
    out = dict(m)
    if move.kind == 3:
        roots = weyl.root_order(word)
        p = move.position - 1
        ra, rab, rb = roots[p], roots[p + 1], roots[p + 2]
        ma, mab, mb = m[ra], m[rab], m[rb]
        s = ma + mb
        out[ra] = mab * s / mb
        out[rab] = ma * mb / s
        out[rb] = mab * s / ma
    return new_word, out


def string_braid_move(word: ReducedWord, move: BraidMove, z: Sequence[Any]) -> Tuple[ReducedWord, List[Any]]:
    '''x_{-i}(a) x_{-j}(b) x_{-i}(c) = x_{-j}(bc/(ac+b)) x_{-i}(ac) x_{-j}((ac+b)/c)'''
    new_idx = _checked(word, move)
    out = list(z)
    p = move.position - 1
    if move.kind == 2:
        out[p], out[p + 1] = z[p + 1], z[p]
    else:
        a, b, c = z[p], z[p + 1], z[p + 2]
        q = a * c + b
        out[p], out[p + 1], out[p + 2] = b * c / q, a * c, q / c
    return ReducedWord(new_idx, word.n), out


def string_to_ideal_general(word: ReducedWord, z: Sequence[Any]) -> Dict[PositiveRoot, Any]:
    '''word z -> i_0 z -> i_0 m -> word m, each step subtraction-free'''
    n = word.n
    i0 = weyl.word_i0(n)
    w, zz = word, list(z)
    for mv in weyl.braid_path(word, i0, n):
        w, zz = string_braid_move(w, mv, zz)
    m = dict(zip(weyl.root_order(i0), string_to_ideal(zz, n)))
    for mv in weyl.braid_path(i0, word, n):
        w, m = braid_transform_m(w, mv, m)
    return m


def ideal_to_string_general(word: ReducedWord, m: Dict[PositiveRoot, Any]) -> List[Any]:
    n = word.n
    i0 = weyl.word_i0(n)
    w, mm = word, dict(m)
    for mv in weyl.braid_path(word, i0, n):
        w, mm = braid_transform_m(w, mv, mm)
    zz = ideal_to_string([mm[r] for r in weyl.root_order(i0)], n)
    for mv in weyl.braid_path(i0, word, n):
        w, zz = string_braid_move(w, mv, zz)
    return zz


# -----------------------
# Chamber Ansatz
# -----------------------

def word_i0_prime(n: int) -> ReducedWord:
    '''(n-1, ..., 1, n-1, ..., 2, ..., n-1)'''
    idx: List[int] = []
    for low in range(1, n):
        idx.extend(range(n - 1, low - 1, -1))
    return ReducedWord(tuple(idx), n)


def chamber_ansatz_coords(u1: GenericMatrix, word: ReducedWord,
                          factors: Optional[Sequence[genmat.ElementaryFactor]] = None) -> List[Any]:
    '''
    t_k with y_{i_1}(t_1)...y_{i_N}(t_N) B_+ = u1 w0bar B_+:
    t_k = prod_{j = i_k +- 1} D_j(w_(k)) / (D_{i_k}(w_(k)) D_{i_k}(w_(k-1))),
    D_j(w) the flag minor of rows 1..j and columns w(1..j).
    When the x-factorization of u1 is given the minors are read off its path graph
    and cross-checked against determinants.
    '''
    n = u1.n
    pg = genmat.path_graph(factors, n) if factors is not None else None
    cache: Dict[Tuple[int, ...], Any] = {}

    def flag_minor(j: int, w: weyl.Permutation):
        if j <= 0 or j >= n:
            return u1.domain.one
        cols = tuple(sorted(w(c) for c in range(1, j + 1)))
        if cols not in cache:
            rows = tuple(range(1, j + 1))
            val = genmat.minor(u1, rows, cols)
            if pg is not None:
                via = genmat.minor_via_paths(pg, rows, cols)
                if not is_zero(via - val):
                    raise ChartError(f"path minor disagrees with determinant for columns {cols}")
            if is_zero(val):
                raise ZeroChamberMinor(f"chamber minor rows 1..{j}, columns {cols} vanishes")
            cache[cols] = val
        return cache[cols]

    out = []
    prev = weyl.Permutation.identity(n)
    for i in word.indices:
        cur = prev.right_multiply_simple(i)
        num = u1.domain.one
        for j in (i - 1, i + 1):
            num = num * flag_minor(j, cur)
        out.append(num / (flag_minor(i, cur) * flag_minor(i, prev)))
        prev = cur
    return out


def p_coordinates(z: Sequence[Any], n: int) -> List[Any]:
    '''u1 = x_{i'_0}(p): p_{s_k+a} = z_{1+s_a} if k=1, else z_{k+s_a} / z_{k-1+s_{a+1}}'''
    N = n * (n - 1) // 2
    p: List[Any] = [None] * N
    for k in range(1, n):
        for a in range(1, n - k + 1):
            if k == 1:
                val = z[_s(n, a)]
            else:
                val = z[k + _s(n, a) - 1] / z[k - 1 + _s(n, a + 1) - 1]
            p[_s(n, k) + a - 1] = val
    return p


def ideal_from_p(p: Sequence[Any], n: int) -> List[Any]:
    '''m_{s_k+a} = prod_{r<=k} p_{s_{r+1}-a+1} / prod_{r<k} p_{s_{r+1}-a}'''
    N = n * (n - 1) // 2
    dom = domain_of(p[0])
    m: List[Any] = [None] * N
    for k in range(1, n):
        for a in range(1, n - k + 1):
            val = dom.one
            for r in range(1, k + 1):
                val = val * p[_s(n, r + 1) - a]
            for r in range(1, k):
                val = val / p[_s(n, r + 1) - a - 1]
            m[_s(n, k) + a - 1] = val
    return m
