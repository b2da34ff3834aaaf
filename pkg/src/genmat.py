# genmat.py
'''
Square matrices over any exactnum coefficient domain, the one-parameter subgroups
of GL_n, LDU factorization, the twist map, the involution, minors and
minors computed from planar path graphs.

Indices are 1-based throughout: g[i, j] is the entry in row i, column j.
'''

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from exactnum import Domain, QQ_DOMAIN, common_domain, domain_of, format_scalar, is_zero
from toolkit_constants import FactorKind
import weyl

log = logging.getLogger(__name__)


# -----------------------
# Exceptions
# -----------------------

class GenMatError(Exception):
    pass

class SingularPrincipalMinor(GenMatError):
    def __init__(self, k: int):
        super().__init__(f"leading principal minor of size {k} vanishes")
        self.k = k

class SingularMatrix(GenMatError):
    pass

class SizeMismatch(GenMatError):
    pass


# -----------------------
# Matrices
# -----------------------

class GenericMatrix:
    '''immutable n x n matrix; all entries live in one coefficient domain'''
    __slots__ = ("_rows", "_domain")

    def __init__(self, rows: Iterable[Iterable[Any]], domain: Optional[Domain] = None):
        raw = tuple(tuple(r) for r in rows)
        n = len(raw)
        if any(len(r) != n for r in raw):
            raise SizeMismatch("matrix must be square")
        if domain is None:
            domain = common_domain(x for r in raw for x in r)
        conv = domain.convert
        object.__setattr__(self, "_rows", tuple(tuple(conv(x) for x in r) for r in raw))
        object.__setattr__(self, "_domain", domain)

    def __setattr__(self, name, value):
        raise AttributeError("GenericMatrix is immutable")

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def domain(self) -> Domain:
        return self._domain

    @property
    def rows(self) -> Tuple[Tuple[Any, ...], ...]:
        return self._rows

    def __getitem__(self, ij: Tuple[int, int]):
        i, j = ij
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"({i},{j}) outside a {self.n}x{self.n} matrix")
        return self._rows[i - 1][j - 1]

    def diagonal(self) -> List[Any]:
        return [self._rows[k][k] for k in range(self.n)]

    def _unify(self, other: "GenericMatrix"):
        if other.n != self.n:
            raise SizeMismatch(f"{self.n}x{self.n} against {other.n}x{other.n}")
        if self._domain == other._domain:
            return self, other, self._domain
        dom = common_domain([self._domain.zero, other._domain.zero])
        return GenericMatrix(self._rows, dom), GenericMatrix(other._rows, dom), dom

    def __matmul__(self, other: "GenericMatrix") -> "GenericMatrix":
        a, b, dom = self._unify(other)
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = dom.zero
                for k in range(n):
                    x = a._rows[i][k]
                    if is_zero(x):
                        continue
                    y = b._rows[k][j]
                    if is_zero(y):
                        continue
                    acc = acc + x * y
                row.append(acc)
            out.append(row)
        return GenericMatrix(out, dom)

    __mul__ = __matmul__

    def __add__(self, other: "GenericMatrix") -> "GenericMatrix":
        a, b, dom = self._unify(other)
        return GenericMatrix([[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a._rows, b._rows)], dom)

    def __sub__(self, other: "GenericMatrix") -> "GenericMatrix":
        a, b, dom = self._unify(other)
        return GenericMatrix([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a._rows, b._rows)], dom)

    def scale(self, c: Any) -> "GenericMatrix":
        c = self._domain.convert(c)
        return GenericMatrix([[c * x for x in r] for r in self._rows], self._domain)

    def transpose(self) -> "GenericMatrix":
        return GenericMatrix(zip(*self._rows), self._domain)

    @property
    def T(self) -> "GenericMatrix":
        return self.transpose()

    def map(self, fn) -> "GenericMatrix":
        return GenericMatrix([[fn(x) for x in r] for r in self._rows])

    def equals(self, other: "GenericMatrix") -> bool:
        if other.n != self.n:
            return False
        a, b, _ = self._unify(other)
        return all(is_zero(x - y) for ra, rb in zip(a._rows, b._rows) for x, y in zip(ra, rb))

    def __eq__(self, other):
        if not isinstance(other, GenericMatrix):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def is_lower_triangular(self) -> bool:
        return all(is_zero(self._rows[i][j]) for i in range(self.n) for j in range(i + 1, self.n))

    def is_upper_triangular(self) -> bool:
        return self.transpose().is_lower_triangular()

    def is_diagonal(self) -> bool:
        return self.is_lower_triangular() and self.is_upper_triangular()

    def is_upper_unitriangular(self) -> bool:
        one = self._domain.one
        return self.is_upper_triangular() and all(is_zero(x - one) for x in self.diagonal())

    def is_lower_unitriangular(self) -> bool:
        return self.transpose().is_upper_unitriangular()

    def to_lists(self) -> List[List[str]]:
        return [[format_scalar(x) for x in r] for r in self._rows]

    def __repr__(self):
        return f"GenericMatrix({self.to_lists()})"

    def __str__(self):
        return "\n".join("[" + ", ".join(r) + "]" for r in self.to_lists())


def identity(n: int, domain: Domain = QQ_DOMAIN) -> GenericMatrix:
    return GenericMatrix([[domain.one if i == j else domain.zero for j in range(n)] for i in range(n)], domain)


def diagonal(entries: Sequence[Any], domain: Optional[Domain] = None) -> GenericMatrix:
    if domain is None:
        domain = common_domain(entries)
    n = len(entries)
    return GenericMatrix([[entries[i] if i == j else domain.zero for j in range(n)] for i in range(n)], domain)


def unit_matrix(n: int, i: int, j: int, w: Any, domain: Optional[Domain] = None) -> GenericMatrix:
    '''I + w E_{ij}'''
    dom = domain or domain_of(w)
    rows = [[dom.one if a == b else dom.zero for b in range(n)] for a in range(n)]
    rows[i - 1][j - 1] = rows[i - 1][j - 1] + dom.convert(w)
    return GenericMatrix(rows, dom)


def product(mats: Iterable[GenericMatrix], n: int, domain: Domain = QQ_DOMAIN) -> GenericMatrix:
    out = None
    for m in mats:
        out = m if out is None else out @ m
    return identity(n, domain) if out is None else out


# -----------------------
# Elementary factors
# -----------------------

@dataclass(frozen=True)
class ElementaryFactor:
    kind: FactorKind
    index: int
    argument: Any = None

    def __str__(self):
        if self.kind.takes_argument:
            return f"{self.kind.kind_name}{self.index}({format_scalar(self.argument)})"
        return f"{self.kind.kind_name}{self.index}"


def elementary(f: ElementaryFactor, n: int, domain: Optional[Domain] = None) -> GenericMatrix:
    '''phi_i image of the factor; indices live in 1..n-1'''
    if not (1 <= f.index <= n - 1):
        raise weyl.InvalidIndex(f"factor index {f.index} out of range for n={n}")
    if f.kind.takes_argument and f.argument is None:
        raise GenMatError(f"{f.kind.kind_name} needs an argument")
    if domain is None:
        domain = domain_of(f.argument) if f.kind.takes_argument else QQ_DOMAIN
    one, zero = domain.one, domain.zero
    rows = [[one if a == b else zero for b in range(n)] for a in range(n)]
    i = f.index - 1
    z = domain.convert(f.argument) if f.kind.takes_argument else None
    if f.kind is FactorKind.X:
        rows[i][i + 1] = z
    elif f.kind is FactorKind.Y:
        rows[i + 1][i] = z
    elif f.kind is FactorKind.X_NEG:
        #x_{-i}(z) = y_i(z) t_i(1/z)
        rows[i][i] = one / z
        rows[i + 1][i] = one
        rows[i + 1][i + 1] = z
    elif f.kind is FactorKind.TORUS:
        rows[i][i] = z
        rows[i + 1][i + 1] = one / z
    elif f.kind is FactorKind.SBAR:
        rows[i][i], rows[i + 1][i + 1] = zero, zero
        rows[i][i + 1] = -one
        rows[i + 1][i] = one
    elif f.kind is FactorKind.SDOT:
        rows[i][i], rows[i + 1][i + 1] = zero, zero
        rows[i][i + 1] = one
        rows[i + 1][i] = -one
    return GenericMatrix(rows, domain)


def word_product(factors: Sequence[ElementaryFactor], n: int, domain: Optional[Domain] = None) -> GenericMatrix:
    if domain is None:
        args = [f.argument for f in factors if f.kind.takes_argument]
        domain = common_domain(args) if args else QQ_DOMAIN
    out = identity(n, domain)
    for f in factors:
        out = out @ elementary(f, n, domain)
    return out


def factors_along(kind: FactorKind, word: Sequence[int], args: Sequence[Any]) -> List[ElementaryFactor]:
    if len(word) != len(args):
        raise SizeMismatch(f"word of length {len(word)} with {len(args)} arguments")
    return [ElementaryFactor(kind, i, a) for i, a in zip(word, args)]


def x(i, z): return ElementaryFactor(FactorKind.X, i, z)
def y(i, z): return ElementaryFactor(FactorKind.Y, i, z)
def x_neg(i, z): return ElementaryFactor(FactorKind.X_NEG, i, z)
def torus(i, z): return ElementaryFactor(FactorKind.TORUS, i, z)
def sbar(i): return ElementaryFactor(FactorKind.SBAR, i)
def sdot(i): return ElementaryFactor(FactorKind.SDOT, i)


def sbar_product(word: Sequence[int], n: int, domain: Domain = QQ_DOMAIN) -> GenericMatrix:
    return word_product([sbar(i) for i in word], n, domain)


def sdot_product(word: Sequence[int], n: int, domain: Domain = QQ_DOMAIN) -> GenericMatrix:
    return word_product([sdot(i) for i in word], n, domain)


def w0bar(n: int, domain: Domain = QQ_DOMAIN) -> GenericMatrix:
    '''sbar along i_0; antidiagonal with alternating signs'''
    return sbar_product(weyl.word_i0(n).indices, n, domain)


def w0bar_inverse(n: int, domain: Domain = QQ_DOMAIN) -> GenericMatrix:
    #inverse of a signed permutation matrix is its transpose
    return w0bar(n, domain).transpose()


def permutation_of(g: GenericMatrix) -> weyl.Permutation:
    '''underlying permutation of a monomial matrix: column j has its entry in row w(j)'''
    imgs = []
    for j in range(1, g.n + 1):
        rows = [i for i in range(1, g.n + 1) if not is_zero(g[i, j])]
        if len(rows) != 1:
            raise GenMatError("not a monomial matrix")
        imgs.append(rows[0])
    return weyl.Permutation(tuple(imgs))


def chi(u: GenericMatrix) -> Any:
    '''sum of the simple-root (superdiagonal) entries'''
    acc = u.domain.zero
    for i in range(1, u.n):
        acc = acc + u[i, i + 1]
    return acc


# -----------------------
# LDU, inverse, minors
# -----------------------

class LDU(NamedTuple):
    lower: GenericMatrix
    diagonal: GenericMatrix
    upper: GenericMatrix


def ldu(g: GenericMatrix) -> LDU:
    '''g = [g]_- [g]_0 [g]_+ by Doolittle elimination without pivoting'''
    n, dom = g.n, g.domain
    a = [list(r) for r in g.rows]
    low = [[dom.one if i == j else dom.zero for j in range(n)] for i in range(n)]
    for k in range(n):
        p = a[k][k]
        if is_zero(p):
            raise SingularPrincipalMinor(k + 1)
        for i in range(k + 1, n):
            if is_zero(a[i][k]):
                continue
            f = a[i][k] / p
            low[i][k] = f
            for j in range(k, n):
                a[i][j] = a[i][j] - f * a[k][j]
    d = [a[k][k] for k in range(n)]
    up = [[dom.zero] * n for _ in range(n)]
    for i in range(n):
        up[i][i] = dom.one
        for j in range(i + 1, n):
            up[i][j] = a[i][j] / d[i]
    return LDU(GenericMatrix(low, dom), diagonal(d, dom), GenericMatrix(up, dom))


def upper_part(g: GenericMatrix) -> GenericMatrix:
    return ldu(g).upper


def inverse(g: GenericMatrix) -> GenericMatrix:
    '''Gauss-Jordan; the pivot is the first non-zero entry of the column'''
    n, dom = g.n, g.domain
    a = [list(r) + [dom.one if i == j else dom.zero for j in range(n)] for i, r in enumerate(g.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not is_zero(a[r][col])), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular at column {col + 1}")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r == col or is_zero(a[r][col]):
                continue
            f = a[r][col]
            a[r] = [x - f * yv for x, yv in zip(a[r], a[col])]
    return GenericMatrix([row[n:] for row in a], dom)


def determinant(rows: Sequence[Sequence[Any]], dom: Domain) -> Any:
    a = [list(r) for r in rows]
    m = len(a)
    det = dom.one
    for col in range(m):
        piv = next((r for r in range(col, m) if not is_zero(a[r][col])), None)
        if piv is None:
            return dom.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        for r in range(col + 1, m):
            if is_zero(a[r][col]):
                continue
            f = a[r][col] / p
            for c in range(col, m):
                a[r][c] = a[r][c] - f * a[col][c]
    return det


def minor(g: GenericMatrix, rows: Sequence[int], cols: Sequence[int]) -> Any:
    '''Delta^J_K: determinant of the rows J, columns K submatrix'''
    if len(rows) != len(cols):
        raise SizeMismatch(f"row set {tuple(rows)} and column set {tuple(cols)} differ in size")
    if not rows:
        return g.domain.one
    sub = [[g[i, j] for j in cols] for i in rows]
    return determinant(sub, g.domain)


def twist_eta(b: GenericMatrix) -> GenericMatrix:
    '''[(w0bar b^T)^{-1}]_+'''
    wb = w0bar(b.n, b.domain)
    return upper_part(inverse(wb @ b.transpose()))


def iota(g: GenericMatrix) -> GenericMatrix:
    '''(w0bar g^{-1} w0bar^{-1})^T'''
    wb = w0bar(g.n, g.domain)
    return (wb @ inverse(g) @ w0bar_inverse(g.n, g.domain)).transpose()


# -----------------------
# X_{i,alpha}
# -----------------------

def big_x(i: int, alpha: int, w: Any, n: int, domain: Optional[Domain] = None) -> GenericMatrix:
    '''X_{i,alpha}(w) = I + w E_{i-alpha+1, i+1}'''
    if not (1 <= alpha <= i <= n - 1):
        raise weyl.InvalidIndex(f"X_{{{i},{alpha}}} out of range for n={n}")
    return unit_matrix(n, i - alpha + 1, i + 1, w, domain)


def big_x_recursive(i: int, alpha: int, rs: Sequence[Any]) -> List[ElementaryFactor]:
    '''
    commutator word in x factors whose product is X_{i,alpha}(r_1 ... r_alpha):
    X_1(r1) = x_{i-alpha+1}(r1),
    X_j(r1..rj) = X_{j-1}(r1..r_{j-1}) x_{i-alpha+j}(rj) X_{j-1}(r1..r_{j-2}, -r_{j-1}) x_{i-alpha+j}(-rj)
    '''
    if len(rs) != alpha:
        raise SizeMismatch(f"X_{{{i},{alpha}}} takes {alpha} weights, got {len(rs)}")
    base = i - alpha + 1

    def rec(vals: Sequence[Any]) -> List[ElementaryFactor]:
        j = len(vals)
        if j == 1:
            return [x(base, vals[0])]
        head = rec(vals[:-1])
        flipped = rec(list(vals[:-2]) + [-vals[-2]])
        return head + [x(base + j - 1, vals[-1])] + flipped + [x(base + j - 1, -vals[-1])]

    return rec(list(rs))


# -----------------------
# Planar path graphs
# -----------------------

@dataclass
class PathGraph:
    '''
    n horizontal lines, one column per factor. Node (line, step); horizontal edges carry
    the diagonal entries of the factor, x_i edges go from line i to i+1 and y_i edges from
    i+1 to i. Sources are (j, 0), sinks (k, steps).
    '''
    n: int
    steps: int
    graph: nx.DiGraph
    domain: Domain

    def source(self, j: int): return (j, 0)
    def sink(self, k: int): return (k, self.steps)

    def path_weight(self, path: Sequence[Tuple[int, int]]) -> Any:
        w = self.domain.one
        for u, v in zip(path, path[1:]):
            w = w * self.graph.edges[u, v]["weight"]
        return w

    def to_dot(self) -> str:
        lines = ["digraph pathgraph {", "  rankdir=LR;"]
        for (l, s) in sorted(self.graph.nodes):
            lines.append(f'  "{l},{s}" [pos="{s},{-l}!", label=""];')
        for u, v, data in sorted(self.graph.edges(data=True)):
            wt = data["weight"]
            label = "" if is_zero(wt - self.domain.one) else format_scalar(wt)
            lines.append(f'  "{u[0]},{u[1]}" -> "{v[0]},{v[1]}" [label="{label}"];')
        lines.append("}")
        return "\n".join(lines)


def path_graph(factors: Sequence[ElementaryFactor], n: int, domain: Optional[Domain] = None) -> PathGraph:
    if domain is None:
        args = [f.argument for f in factors if f.kind.takes_argument]
        domain = common_domain(args) if args else QQ_DOMAIN
    g = nx.DiGraph()
    for s, f in enumerate(factors, start=1):
        if f.kind not in (FactorKind.X, FactorKind.Y, FactorKind.TORUS):
            raise GenMatError(f"path graphs take x, y and torus factors, not {f.kind.kind_name}")
        z = domain.convert(f.argument)
        for line in range(1, n + 1):
            w = domain.one
            if f.kind is FactorKind.TORUS and line == f.index:
                w = z
            elif f.kind is FactorKind.TORUS and line == f.index + 1:
                w = domain.one / z
            g.add_edge((line, s - 1), (line, s), weight=w)
        if f.kind is FactorKind.X:
            g.add_edge((f.index, s - 1), (f.index + 1, s), weight=z)
        elif f.kind is FactorKind.Y:
            g.add_edge((f.index + 1, s - 1), (f.index, s), weight=z)
    if not factors:
        for line in range(1, n + 1):
            g.add_node((line, 0))
    return PathGraph(n, len(factors), g, domain)


def minor_via_paths(pg: PathGraph, rows: Sequence[int], cols: Sequence[int]) -> Any:
    '''sum over families of vertex-disjoint paths (J_r, 0) -> (K_r, end) of the weight products'''
    if len(rows) != len(cols):
        raise SizeMismatch("row and column sets differ in size")
    rows, cols = sorted(rows), sorted(cols)
    candidates = []
    for j, k in zip(rows, cols):
        src, dst = pg.source(j), pg.sink(k)
        if src == dst:
            paths = [[src]]
        elif src in pg.graph and dst in pg.graph:
            paths = list(nx.all_simple_paths(pg.graph, src, dst))
        else:
            paths = []
        candidates.append([(frozenset(p), pg.path_weight(p)) for p in paths])

    total = pg.domain.zero

    def rec(r: int, used: frozenset, weight):
        nonlocal total
        if r == len(candidates):
            total = total + weight
            return
        for verts, w in candidates[r]:
            if used & verts:
                continue
            rec(r + 1, used | verts, weight * w)

    rec(0, frozenset(), pg.domain.one)
    return total
