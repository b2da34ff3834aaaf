# quiver.py
'''python src/quiver.py

The quiver Q_P of a partial flag variety GL_n/P and its reflection Q_{P,R}.
A decoration attaches values to vertices and arrows; from it we read the
superpotential, the highest weight and weight maps, the matrices g_L, u_L, g_R
and u~_R, the quiver chart b_P and the critical point conditions.

Cells are (row, column) pairs in the lower triangle 1 <= column <= row <= n.
Q_P arrows point up or left; every arrow value is x_head / x_tail.
'''

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from exactnum import Domain, common_domain, domain_of, format_scalar, is_zero, symbolic_field
import genmat
from genmat import GenericMatrix
from toolkit_constants import ArrowKind, Chart, ToolkitConstants, VertexKind
import weyl
from weyl import ParabolicData

log = logging.getLogger(__name__)

Cell = Tuple[int, int]


# -----------------------
# Exceptions
# -----------------------

class QuiverError(Exception):
    pass

class InconsistentBoxRelations(QuiverError):
    pass

class PreconditionViolated(QuiverError):
    pass


# -----------------------
# Topology
# -----------------------

@dataclass(frozen=True)
class Vertex:
    cell: Cell
    kind: VertexKind
    block: int

    @property
    def i(self) -> int:
        return self.cell[0]

    @property
    def j(self) -> int:
        return self.cell[1]

    @property
    def k(self) -> int:
        return self.cell[1]

    @property
    def a(self) -> int:
        return self.cell[0] - self.cell[1]

    def label(self) -> str:
        if self.kind is VertexKind.STAR:
            return f"star{self.block}"
        return f"v({self.k},{self.a})"


@dataclass(frozen=True)
class Arrow:
    tail: Cell
    head: Cell
    kind: ArrowKind

    def label(self) -> str:
        #vertical arrows are named by their head, horizontal ones by their tail
        if self.kind is ArrowKind.VERTICAL:
            r, c = self.head
            return f"a({c},{r - c})"
        r, c = self.tail
        return f"b({c},{r - c})"


@dataclass
class QuiverTopology:
    P: ParabolicData
    vertices: Dict[Cell, Vertex]
    arrows: List[Arrow]

    @property
    def n(self) -> int:
        return self.P.n

    def is_vertex(self, cell: Cell) -> bool:
        return cell in self.vertices

    def stars(self) -> List[Vertex]:
        return sorted((v for v in self.vertices.values() if v.kind is VertexKind.STAR), key=lambda v: v.block)

    def dots(self) -> List[Vertex]:
        '''ordered by (k, a)'''
        return sorted((v for v in self.vertices.values() if v.kind is VertexKind.DOT), key=lambda v: (v.k, v.a))

    def star_of_block(self, j: int) -> Cell:
        b = self.P.bounds
        return (b[j], b[j - 1] + 1)

    def arrows_into(self, cell: Cell) -> List[Arrow]:
        return [a for a in self.arrows if a.head == cell]

    def arrows_out_of(self, cell: Cell) -> List[Arrow]:
        return [a for a in self.arrows if a.tail == cell]

    def arrow(self, tail: Cell, head: Cell) -> Arrow:
        for a in self.arrows:
            if a.tail == tail and a.head == head:
                return a
        raise QuiverError(f"no arrow {tail} -> {head}")

    def squares(self) -> List[Tuple[Cell, Cell, Cell, Cell]]:
        '''(bottom-right, top-right, bottom-left, top-left) for every unit square of vertices'''
        out = []
        for (r, c) in self.vertices:
            br, tr, bl = (r + 1, c + 1), (r, c + 1), (r + 1, c)
            if all(self.is_vertex(x) for x in (br, tr, bl)):
                out.append((br, tr, bl, (r, c)))
        return sorted(out)

    def sdot_placements(self, j: int) -> List[Tuple[int, int]]:
        '''(column, i) of the circled sdot_i inside L_j, column by column, each read bottom-up'''
        b = self.P.bounds
        lo, hi = b[j - 1], b[j]
        return [(c, i) for c in range(lo + 1, hi) for i in range(hi - 1, c - 1, -1)]

    def sdot_row_counts(self) -> Dict[Tuple[int, int], int]:
        '''(row i, square j) -> number of circled sdot_i in that square'''
        counts: Dict[Tuple[int, int], int] = {}
        for j in range(1, self.P.l + 2):
            for _, i in self.sdot_placements(j):
                counts[(i, j)] = counts.get((i, j), 0) + 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {
            "P": self.P.to_dict(),
            "vertices": [{"kind": v.kind.value, "i": v.i, "j": v.j, "k": v.k, "a": v.a}
                         for v in sorted(self.vertices.values(), key=lambda v: v.cell)],
            "arrows": [{"from": list(a.tail), "to": list(a.head), "kind": a.kind.value} for a in self.arrows],
        }


def build_topology(P: ParabolicData) -> QuiverTopology:
    '''stars at (n_i, n_{i-1}+1), dots at cells whose row block lies below the column block'''
    n = P.n
    b = P.bounds
    vertices: Dict[Cell, Vertex] = {}
    for j in range(1, P.l + 2):
        cell = (b[j], b[j - 1] + 1)
        vertices[cell] = Vertex(cell, VertexKind.STAR, j)
    for (k, a) in P.dots():
        cell = (k + a, k)
        vertices[cell] = Vertex(cell, VertexKind.DOT, P.block_of(k))
    arrows: List[Arrow] = []
    for (r, c) in sorted(vertices):
        if (r - 1, c) in vertices:
            arrows.append(Arrow((r, c), (r - 1, c), ArrowKind.VERTICAL))
        if (r, c - 1) in vertices:
            arrows.append(Arrow((r, c), (r, c - 1), ArrowKind.HORIZONTAL))
    log.debug("quiver for %s: %d vertices, %d arrows", P.label(), len(vertices), len(arrows))
    return QuiverTopology(P, vertices, arrows)


@dataclass
class RightTopology:
    '''
    Q_{P,R}: Q_P reflected through the antidiagonal, (r,c) -> (n+1-c, n+1-r).
    Q_P left arrows become downward arrows and Q_P up arrows become right arrows.
    The image of L_j is the square spanning [A+1, B] with A = n - n_j, B = n - n_{j-1}.
    '''
    base: QuiverTopology

    @property
    def n(self) -> int:
        return self.base.n

    def reflect(self, cell: Cell) -> Cell:
        r, c = cell
        return (self.n + 1 - c, self.n + 1 - r)

    def is_vertex(self, cell: Cell) -> bool:
        return self.base.is_vertex(self.reflect(cell))

    def vertex(self, cell: Cell) -> Vertex:
        return self.base.vertices[self.reflect(cell)]

    def square_bounds(self, j: int) -> Tuple[int, int]:
        b = self.base.P.bounds
        return self.n - b[j], self.n - b[j - 1]

    def square_of_column(self, C: int) -> int:
        for j in range(1, self.base.P.l + 2):
            A, B = self.square_bounds(j)
            if A + 1 <= C <= B:
                return j
        raise QuiverError(f"column {C} outside the quiver")

    def dots_in_column(self, C: int) -> List[Cell]:
        cells = [(R, C) for R in range(C, self.n + 1) if self.is_vertex((R, C))]
        return [x for x in cells if self.vertex(x).kind is VertexKind.DOT]

    def sdots_in_column(self, C: int) -> List[int]:
        '''sdot_i for i = C .. B-1, read top-down'''
        A, B = self.square_bounds(self.square_of_column(C))
        if C == B:
            return []
        return list(range(C, B))

    def arrows(self) -> List[Tuple[Cell, Cell]]:
        return [(self.reflect(a.tail), self.reflect(a.head)) for a in self.base.arrows]


def right_topology(P: ParabolicData) -> RightTopology:
    return RightTopology(build_topology(P))


# -----------------------
# Decoration
# -----------------------

@dataclass
class QuiverDecoration:
    topology: QuiverTopology
    d: List[Any]
    m: Dict[int, Any]
    x: Dict[Cell, Any]
    r: Dict[Tuple[Cell, Cell], Any]
    domain: Domain

    @property
    def P(self) -> ParabolicData:
        return self.topology.P

    @property
    def n(self) -> int:
        return self.topology.n

    def arrow_value(self, a: Arrow) -> Any:
        return self.r[(a.tail, a.head)]

    def cell_value(self, cell: Cell) -> Any:
        '''x of a vertex; a cell inside L_j that is not a vertex carries d_j'''
        if cell in self.x:
            return self.x[cell]
        r, c = cell
        j = self.P.block_of(r)
        if j != self.P.block_of(c):
            raise QuiverError(f"cell {cell} should be a vertex")
        return self.d[j - 1]

    def star_value(self, j: int) -> Any:
        return self.d[j - 1]

    def m_of(self, v: Vertex) -> Any:
        return self.m[self.P.dot_index(v.k, v.a)]

    def to_dict(self) -> Dict[str, Any]:
        verts = []
        for v in sorted(self.topology.vertices.values(), key=lambda v: v.cell):
            verts.append({"kind": v.kind.value, "i": v.i, "j": v.j, "k": v.k, "a": v.a,
                          "value": format_scalar(self.x[v.cell])})
        arrows = [{"from": list(a.tail), "to": list(a.head), "label": a.label(),
                   "value": format_scalar(self.arrow_value(a))} for a in self.topology.arrows]
        return {"P": self.P.to_dict(), "vertices": verts, "arrows": arrows}

    def to_dot(self) -> str:
        lines = ["digraph quiver {"]
        for v in sorted(self.topology.vertices.values(), key=lambda v: v.cell):
            shape = "star" if v.kind is VertexKind.STAR else "point"
            lines.append(f'  "{v.i},{v.j}" [shape={shape}, pos="{v.j},{-v.i}!", '
                         f'xlabel="{format_scalar(self.x[v.cell])}"];')
        for a in self.topology.arrows:
            lines.append(f'  "{a.tail[0]},{a.tail[1]}" -> "{a.head[0]},{a.head[1]}" '
                         f'[label="{format_scalar(self.arrow_value(a))}"];')
        lines.append("}")
        return "\n".join(lines)


def normalize_m(P: ParabolicData, m: Union[Mapping[int, Any], Sequence[Any]]) -> Dict[int, Any]:
    '''accept {s_k+a: value} or a list in dot order'''
    dots = P.dots()
    if isinstance(m, Mapping):
        out = {P.dot_index(k, a): m[P.dot_index(k, a)] for (k, a) in dots}
    else:
        if len(m) != len(dots):
            raise QuiverError(f"{P.label()} has {len(dots)} dot vertices, got {len(m)} values")
        out = {P.dot_index(k, a): v for (k, a), v in zip(dots, m)}
    return out


def decorate(P: ParabolicData, d: Sequence[Any], m: Union[Mapping[int, Any], Sequence[Any]],
             topology: Optional[QuiverTopology] = None) -> QuiverDecoration:
    '''
    Vertical arrow leaving v_(k,a): m_a if k = 1, else r(leaving v_(k-1,a+1)) m_{s_k+a} / m_{s_{k-1}+a}.
    Horizontal arrow leaving v_(k, n_i-k+1) for n_{i-1}+2 <= k <= n_i (the row under L_i):
    m_{s_k+a} if i = 1, else r(leaving v_(n_{i-1},a+1)) m_{s_k+a} / m_{s_{n_{i-1}}+a}.
    Stars carry d_j; every other vertex value follows column by column, and the
    remaining arrows are x_head / x_tail.
    '''
    topo = topology or build_topology(P)
    if len(d) != P.l + 1:
        raise QuiverError(f"{P.label()} needs {P.l + 1} star values, got {len(d)}")
    mm = normalize_m(P, m)
    dom = common_domain(list(mm.values()) + list(d))
    mm = {k: dom.convert(v) for k, v in mm.items()}
    dd = [dom.convert(v) for v in d]
    b = P.bounds
    vert_cache: Dict[Tuple[int, int], Any] = {}

    def vertical(k: int, a: int):
        if (k, a) not in vert_cache:
            if k == 1:
                vert_cache[(k, a)] = mm[P.dot_index(1, a)]
            else:
                vert_cache[(k, a)] = vertical(k - 1, a + 1) * mm[P.dot_index(k, a)] / mm[P.dot_index(k - 1, a)]
        return vert_cache[(k, a)]

    def special(k: int) -> Any:
        i = P.block_of(k)
        a = b[i] - k + 1
        if i == 1:
            return mm[P.dot_index(k, a)]
        lo = b[i - 1]
        return vertical(lo, a + 1) * mm[P.dot_index(k, a)] / mm[P.dot_index(lo, a)]

    x: Dict[Cell, Any] = {}
    for c in range(1, P.n + 1):
        j = P.block_of(c)
        if c == b[j - 1] + 1:
            top = (b[j], c)
            x[top] = dd[j - 1]
        elif j <= P.l:
            top = (b[j] + 1, c)
            x[top] = x[(top[0], c - 1)] / special(c)
        else:
            continue
        for row in range(top[0] + 1, P.n + 1):
            x[(row, c)] = x[(row - 1, c)] / vertical(c, row - c)

    r: Dict[Tuple[Cell, Cell], Any] = {}
    for a in topo.arrows:
        r[(a.tail, a.head)] = x[a.head] / x[a.tail]
    dec = QuiverDecoration(topo, dd, mm, x, r, dom)
    check_box_relations(dec)
    return dec


def check_box_relations(dec: QuiverDecoration):
    for br, tr, bl, tl in dec.topology.squares():
        up_left = dec.r[(br, tr)] * dec.r[(tr, tl)]
        left_up = dec.r[(br, bl)] * dec.r[(bl, tl)]
        if not is_zero(up_left - left_up):
            raise InconsistentBoxRelations(f"box at {tl} fails")


def symbolic_decoration(P: ParabolicData) -> QuiverDecoration:
    '''decoration over QQ(d1..d_{l+1}, m_i for every dot index i)'''
    idx = [P.dot_index(k, a) for (k, a) in P.dots()]
    hw = ToolkitConstants.HIGHEST_WEIGHT_PREFIX
    mp = Chart.IDEAL.coordinate_prefix
    names = [f"{hw}{j}" for j in range(1, P.l + 2)] + [f"{mp}{i}" for i in idx]
    K, gens = symbolic_field(names)
    return decorate(P, [gens[f"{hw}{j}"] for j in range(1, P.l + 2)], {i: gens[f"{mp}{i}"] for i in idx})


# -----------------------
# Superpotential, highest weight, weight
# -----------------------

def superpotential_F(dec: QuiverDecoration) -> Any:
    acc = dec.domain.zero
    for a in dec.topology.arrows:
        acc = acc + dec.arrow_value(a)
    return acc


def kappa(dec: QuiverDecoration) -> GenericMatrix:
    '''jj entry is the star value of the block containing j'''
    return genmat.diagonal([dec.d[dec.P.block_of(j) - 1] for j in range(1, dec.n + 1)], dec.domain)


def xi(dec: QuiverDecoration, i: int) -> Any:
    '''product of cell values along the diagonal D_i = {(i+j-1, j)}; Xi_{n+1} = 1'''
    acc = dec.domain.one
    for j in range(1, dec.n - i + 2):
        acc = acc * dec.cell_value((i + j - 1, j))
    return acc


def _gamma_entries(dec: QuiverDecoration) -> List[Any]:
    xs = [xi(dec, i) for i in range(1, dec.n + 2)]
    return [xs[i] / xs[i + 1] for i in range(dec.n)]


def minimal_one_path(dec_or_topo: Union[QuiverDecoration, QuiverTopology], cell: Cell) -> List[Arrow]:
    '''
    Shortest path from a dot toward the star of the square above it: a single
    vertical arrow when there is a vertex above, otherwise left along row n_j+1
    to column n_{j-1}+1 and then up to the star of L_j.
    '''
    topo = dec_or_topo.topology if isinstance(dec_or_topo, QuiverDecoration) else dec_or_topo
    r, c = cell
    if (r - 1, c) in topo.vertices:
        return [topo.arrow(cell, (r - 1, c))]
    j = topo.P.block_of(c)
    first = topo.P.bounds[j - 1] + 1
    path = [topo.arrow((r, cc), (r, cc - 1)) for cc in range(c, first, -1)]
    path.append(topo.arrow((r, first), (r - 1, first)))
    return path


def path_weight(dec: QuiverDecoration, path: Sequence[Arrow]) -> Any:
    acc = dec.domain.one
    for a in path:
        acc = acc * dec.arrow_value(a)
    return acc


def gamma_via_paths(dec: QuiverDecoration) -> List[Any]:
    '''t_{P,i} = x(n, n-i+1) times the minimal 1-path weights of the dots on D_{i+1}'''
    n = dec.n
    out = []
    for i in range(1, n + 1):
        val = dec.cell_value((n, n - i + 1))
        for j in range(1, n - i + 1):
            cell = (i + j, j)
            if cell in dec.topology.vertices and dec.topology.vertices[cell].kind is VertexKind.DOT:
                val = val * path_weight(dec, minimal_one_path(dec, cell))
        out.append(val)
    return out


def gamma(dec: QuiverDecoration) -> GenericMatrix:
    '''diag(Xi_i / Xi_{i+1}); checked against the 1-path form'''
    entries = _gamma_entries(dec)
    via = gamma_via_paths(dec)
    for i, (e, p) in enumerate(zip(entries, via), start=1):
        if not is_zero(e - p):
            raise QuiverError(f"weight entry {i}: diagonal product and 1-path form disagree")
    return genmat.diagonal(entries, dec.domain)


# -----------------------
# Critical points
# -----------------------

@dataclass
class CriticalReport:
    residuals: Dict[Cell, Any]

    @property
    def satisfied(self) -> bool:
        return all(is_zero(v) for v in self.residuals.values())

    def to_dict(self):
        return {"satisfied": self.satisfied,
                "residuals": [{"i": c[0], "j": c[1], "value": format_scalar(v)} for c, v in sorted(self.residuals.items())]}


def critical_residuals(dec: QuiverDecoration) -> CriticalReport:
    '''sum of incoming minus sum of outgoing arrow values at every dot'''
    res: Dict[Cell, Any] = {}
    for v in dec.topology.dots():
        acc = dec.domain.zero
        for a in dec.topology.arrows_into(v.cell):
            acc = acc + dec.arrow_value(a)
        for a in dec.topology.arrows_out_of(v.cell):
            acc = acc - dec.arrow_value(a)
        res[v.cell] = acc
    return CriticalReport(res)


def verify_sum_at_vertex(dec: QuiverDecoration) -> Dict[Tuple[int, int], bool]:
    '''at a critical point the outgoing arrows at v_(k,a) sum to m_{s_k+a}'''
    if not critical_residuals(dec).satisfied:
        raise PreconditionViolated("decoration does not satisfy the critical point conditions")
    out = {}
    for v in dec.topology.dots():
        total = dec.domain.zero
        for a in dec.topology.arrows_out_of(v.cell):
            total = total + dec.arrow_value(a)
        out[(v.k, v.a)] = is_zero(total - dec.m_of(v))
    return out


def recoverable_torus_part(P: ParabolicData, m: Union[Mapping[int, Any], Sequence[Any]]) -> List[Any]:
    '''
    d_j / d_{j+1} forced at a critical point: the bottom-row arrow out of (n, j+1)
    equals m_{s_j+n-j}, and that arrow is d_j/d_{j+1} times a monomial in m.
    '''
    if not P.is_borel():
        raise PreconditionViolated("the bottom wall argument is stated for GL_n/B")
    mm = normalize_m(P, m)
    dom = domain_of(next(iter(mm.values())))
    dec = decorate(P, [dom.one] * P.n, mm)
    n = P.n
    return [mm[P.dot_index(j, n - j)] / dec.r[((n, j + 1), (n, j))] for j in range(1, n)]


def diagonal_identity(dec: QuiverDecoration, i: int) -> Tuple[Any, Any]:
    '''
    On the diagonal D_i (v_0 = (i,1) .. v_t = (n, n-i+1)): prod O_j * r_out / r_in and K_t,
    O_j the product of the two arrows leaving v_j, r_out the arrow leaving v_0,
    r_in the arrow entering v_t, K_t = x_{v_0}/x_{v_t}. Equal at critical points.
    '''
    if not dec.P.is_borel():
        raise PreconditionViolated("diagonal subquivers are taken in the G/B quiver")
    n = dec.n
    if not (2 <= i <= n):
        raise PreconditionViolated(f"diagonal {i} has no enclosing arrows")
    t = n - i
    diag = [(i + j, 1 + j) for j in range(t + 1)]
    acc = dec.domain.one
    for v in diag[1:]:
        for a in dec.topology.arrows_out_of(v):
            acc = acc * dec.arrow_value(a)
    r_out = dec.r[(diag[0], (i - 1, 1))]
    r_in = dec.r[((n, n - i + 2), diag[-1])]
    lhs = acc * r_out / r_in
    rhs = dec.x[diag[0]] / dec.x[diag[-1]]
    return lhs, rhs


# -----------------------
# g_L, u_L, g_R, u~_R
# -----------------------

@dataclass(frozen=True)
class QuiverFactor:
    '''x_i(weight) coming from a 1-path of length alpha, or a circled sdot_i (weight None)'''
    index: int
    alpha: int = 1
    weight: Any = None
    sign: int = 1

    @property
    def is_sdot(self) -> bool:
        return self.weight is None

    def __str__(self):
        if self.is_sdot:
            return f"sdot{self.index}"
        w = format_scalar(self.weight)
        if self.alpha == 1:
            return f"x{self.index}({w})"
        pre = "-" if self.sign < 0 else ""
        return f"X{self.index},{self.alpha}({pre}{w})"


def g_l_factors(dec: QuiverDecoration) -> List[QuiverFactor]:
    '''columns 1..n_l; dots bottom-up with their 1-paths, then the circled sdots of the column'''
    P = dec.P
    topo = dec.topology
    out: List[QuiverFactor] = []
    for c in range(1, P.bounds[P.l] + 1):
        for row in range(P.n, c - 1, -1):
            cell = (row, c)
            v = topo.vertices.get(cell)
            if v is None or v.kind is not VertexKind.DOT:
                continue
            path = minimal_one_path(dec, cell)
            head_row = path[-1].head[0]
            out.append(QuiverFactor(head_row, len(path), path_weight(dec, path)))
        j = P.block_of(c)
        for cc, i in topo.sdot_placements(j):
            if cc == c:
                out.append(QuiverFactor(i))
    return out


def wdot_L(P: ParabolicData, domain: Domain) -> GenericMatrix:
    '''w_{L_1} dot ... w_{L_l} dot'''
    word: List[int] = []
    for j in range(1, P.l + 1):
        word.extend(weyl.wl_word(P, j))
    return genmat.sdot_product(word, P.n, domain)


def matrices_gl_ul(dec: QuiverDecoration) -> Tuple[GenericMatrix, GenericMatrix]:
    n, dom = dec.n, dec.domain
    factors = g_l_factors(dec)
    g_l = genmat.identity(n, dom)
    u_l = genmat.identity(n, dom)
    for f in factors:
        if f.is_sdot:
            g_l = g_l @ genmat.elementary(genmat.sdot(f.index), n, dom)
        else:
            g_l = g_l @ genmat.elementary(genmat.x(f.index, f.weight), n, dom)
            u_l = u_l @ genmat.big_x(f.index, f.alpha, f.weight, n, dom)
    if not g_l.equals(u_l @ wdot_L(dec.P, dom)):
        raise QuiverError("g_L does not factor as u_L w_L")
    return g_l, u_l


def g_r_factors(dec: QuiverDecoration) -> List[QuiverFactor]:
    '''
    R-columns n-n_1 down to 1: circled sdots first, then the 1-paths ending at the
    column's dots from top to bottom. A long path starts at the star (B, A+1) of
    the square above, steps down across E_B and runs right; it has length C-A.
    '''
    rt = RightTopology(dec.topology)
    P = dec.P
    n = P.n
    out: List[QuiverFactor] = []
    for C in range(n - P.bounds[1], 0, -1):
        for i in rt.sdots_in_column(C):
            out.append(QuiverFactor(i))
        for (R, _) in rt.dots_in_column(C):
            xv = dec.cell_value(rt.reflect((R, C)))
            if rt.is_vertex((R - 1, C)):
                start = dec.cell_value(rt.reflect((R - 1, C)))
                out.append(QuiverFactor(R - 1, 1, xv / start))
            else:
                j = rt.square_of_column(C)
                A, B = rt.square_bounds(j)
                if R != B + 1:
                    raise QuiverError(f"dot ({R},{C}) has no 1-path in the reflected quiver")
                alpha = C - A
                w = xv / dec.cell_value(rt.reflect((B, A + 1)))
                out.append(QuiverFactor(B, alpha, w, -1 if alpha % 2 == 0 else 1))
    return out


def matrices_gr_ur(dec: QuiverDecoration) -> Tuple[GenericMatrix, GenericMatrix]:
    '''g_R and u~_R; a length-alpha factor enters u~_R as (-1)^(alpha-1) w in position (i-alpha+1, i+1)'''
    n, dom = dec.n, dec.domain
    factors = g_r_factors(dec)
    g_r = genmat.identity(n, dom)
    u_r = genmat.identity(n, dom)
    sdots: List[int] = []
    for f in factors:
        if f.is_sdot:
            g_r = g_r @ genmat.elementary(genmat.sdot(f.index), n, dom)
            sdots.append(f.index)
        else:
            g_r = g_r @ genmat.elementary(genmat.x(f.index, f.weight), n, dom)
            u_r = u_r @ genmat.big_x(f.index, f.alpha, f.weight if f.sign > 0 else -f.weight, n, dom)
    w_r = genmat.sdot_product(sdots, n, dom)
    if not g_r.equals(w_r @ u_r):
        raise QuiverError("g_R does not factor as w_R u~_R")
    return g_r, u_r


# -----------------------
# Quiver chart
# -----------------------

@dataclass
class ZPElement:
    b: GenericMatrix
    lower: GenericMatrix
    diagonal: GenericMatrix
    u_L: GenericMatrix
    kappa: GenericMatrix
    w_P: GenericMatrix
    u_R: GenericMatrix

    def to_dict(self):
        return {"b": self.b.to_lists(), "weight": [format_scalar(v) for v in self.diagonal.diagonal()],
                "u_L": self.u_L.to_lists(), "u_R": self.u_R.to_lists()}


def quiver_chart_theta(dec: QuiverDecoration) -> ZPElement:
    '''b_P = u_L kappa_P w_P w0bar u_R with u_R forced by lower-triangularity'''
    n, dom = dec.n, dec.domain
    _, u_l = matrices_gl_ul(dec)
    k = kappa(dec)
    wp = weyl.wp_representative(dec.P)
    wp = GenericMatrix(wp.rows, dom)
    f = genmat.ldu(u_l @ k @ wp @ genmat.w0bar(n, dom))
    b = f.lower @ f.diagonal
    return ZPElement(b=b, lower=f.lower, diagonal=f.diagonal, u_L=u_l, kappa=k, w_P=wp,
                     u_R=genmat.inverse(f.upper))


def psi_p(P: ParabolicData, d: Sequence[Any], m: Union[Mapping[int, Any], Sequence[Any]]) -> GenericMatrix:
    '''G/P ideal chart: prod over dots of y_a(1/m_{s_k+a}) times gamma_P'''
    dec = decorate(P, d, m)
    return dots_lower(dec) @ gamma(dec)


def dots_lower(dec: QuiverDecoration) -> GenericMatrix:
    dom = dec.domain
    factors = [genmat.y(v.a, dom.one / dec.m_of(v)) for v in dec.topology.dots()]
    return genmat.word_product(factors, dec.n, dom)


@dataclass
class ConjectureReport:
    label: str
    holds: bool
    u_R: GenericMatrix
    u_tilde_R: GenericMatrix

    def to_dict(self):
        return {"P": self.label, "holds": self.holds}


def check_conjecture(dec: QuiverDecoration) -> ConjectureReport:
    '''compare the u_R forced by the quiver chart with u~_R read from the reflected quiver'''
    theta = quiver_chart_theta(dec)
    _, u_tilde = matrices_gr_ur(dec)
    holds = theta.u_R.equals(u_tilde)
    log.debug("conjecture on %s: %s", dec.P.label(), holds)
    return ConjectureReport(dec.P.label(), holds, theta.u_R, u_tilde)
