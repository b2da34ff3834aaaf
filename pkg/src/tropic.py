# tropic.py
'''
Superpotential polytopes, ideal fillings for GL_n/B and GL_n/P, tropical critical
points on the quiver, tropical weights and the piecewise-linear braid transform.

Everything here is exact: tropical numbers are Fractions and affine forms carry
rational coefficients. Highest weights are full length-n vectors, constant on
the blocks of P.
'''

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from exactnum import AffineForm, TropExpr, chart_field, to_fraction, tropicalize
import gbcharts
import quiver
from toolkit_constants import Chart, ToolkitConstants
import weyl
from weyl import BraidMove, ParabolicData, PositiveRoot, ReducedWord

log = logging.getLogger(__name__)


# -----------------------
# Exceptions
# -----------------------

class TropicError(Exception):
    pass

class NoSolution(TropicError):
    pass

class NonDominant(TropicError, ValueError):
    pass

class UnboundedOrEmpty(TropicError):
    pass

class PreconditionViolated(TropicError):
    pass

class InvalidMove(TropicError, weyl.InvalidMove):
    pass


def _q(x: Fraction) -> Rational:
    return Rational(x.numerator, x.denominator)


def _f(x) -> Fraction:
    x = Rational(x)
    return Fraction(int(x.p), int(x.q))


def check_dominant(P: ParabolicData, lam: Sequence[Any]) -> Tuple[Fraction, ...]:
    '''weakly decreasing and constant on the blocks of P'''
    lam = tuple(to_fraction(v) for v in lam)
    if len(lam) != P.n:
        raise NonDominant(f"highest weight needs {P.n} entries, got {len(lam)}")
    if any(lam[i] < lam[i + 1] for i in range(P.n - 1)):
        raise NonDominant(f"{[str(v) for v in lam]} is not weakly decreasing")
    for blk in P.blocks:
        if len({lam[i - 1] for i in blk}) != 1:
            raise NonDominant(f"{[str(v) for v in lam]} is not constant on block {list(blk)}")
    return lam


def ell_of(lam: Sequence[Fraction]) -> Fraction:
    '''(1/n) sum k_i lambda_i, i.e. the mean of the full highest weight'''
    return sum(lam, Fraction(0)) / len(lam)


def lambda_names(P: ParabolicData, lam: Sequence[Any]) -> Dict[str, Fraction]:
    '''lambda_j of block j, for substitution into tropical forms'''
    prefix = ToolkitConstants.TROPICAL_LAMBDA_PREFIX
    b = P.bounds
    return {f"{prefix}{j}": to_fraction(lam[b[j] - 1]) for j in range(1, P.l + 2)}


# -----------------------
# Ideal fillings
# -----------------------

@dataclass
class IdealFilling:
    '''entries n_ij keyed by (i, j) with v_{ji} a dot vertex of Q_P'''
    P: ParabolicData
    lam: Tuple[Fraction, ...]
    ell: Fraction
    entries: Dict[Tuple[int, int], Fraction]

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        return self.entries[ij]

    def max_relations_hold(self) -> bool:
        for (i, j), v in self.entries.items():
            if j - i < 2:
                continue
            nbrs = [self.entries[c] for c in ((i + 1, j), (i, j - 1)) if c in self.entries]
            if v != max(nbrs):
                return False
        return all(v >= 0 for v in self.entries.values())

    def weight_of_entries(self) -> List[Fraction]:
        '''sum n_ij (e_i - e_j) + ell sum e_i'''
        out = [self.ell] * self.P.n
        for (i, j), v in self.entries.items():
            out[i - 1] += v
            out[j - 1] -= v
        return out

    def lambda_sum_holds(self) -> bool:
        return tuple(self.weight_of_entries()) == tuple(self.lam)

    def as_mu(self) -> Dict[int, Fraction]:
        return filling_entries_as_mu(self)

    def as_roots(self) -> Dict[PositiveRoot, Fraction]:
        return {PositiveRoot(i, j): v for (i, j), v in self.entries.items()}

    def to_dict(self):
        return {"n": self.P.n, "IP": list(self.P.ip), "lambda": [str(v) for v in self.lam],
                "ell": str(self.ell),
                "entries": [{"i": i, "j": j, "value": str(v)} for (i, j), v in sorted(self.entries.items())]}


def filling_keys(P: ParabolicData) -> List[Tuple[int, int]]:
    return [(k, k + a) for (k, a) in P.dots()]


def filling_entries_as_mu(filling: IdealFilling) -> Dict[int, Fraction]:
    '''(i, j) -> mu_{s_i + (j - i)}'''
    P = filling.P
    return {P.dot_index(i, j - i): v for (i, j), v in filling.entries.items()}


def _generator_support(P: ParabolicData) -> Dict[Tuple[int, int], List[int]]:
    '''each entry is the max of the first-diagonal entries n_{n_r, n_r+1} with i <= n_r < j'''
    b = P.bounds
    return {(i, j): [r for r in range(1, P.l + 1) if i <= b[r] < j] for (i, j) in filling_keys(P)}


def ideal_filling_for_lambda(P: ParabolicData, lam: Sequence[Any]) -> IdealFilling:
    '''
    Enumerate the orderings of the first-diagonal generators; under each ordering
    every entry is a known generator and the lambda-sum identity is a linear system.
    Exactly one ordering-consistent non-negative solution survives.
    '''
    lam = check_dominant(P, lam)
    if P.n > ToolkitConstants.MAX_FILLING_N:
        raise TropicError(f"filling enumeration is limited to n <= {ToolkitConstants.MAX_FILLING_N}")
    ell = ell_of(lam)
    support = _generator_support(P)
    l = P.l
    rhs = Matrix([_q(lam[k] - ell) for k in range(P.n)])
    found: Dict[Tuple[Fraction, ...], Tuple[int, ...]] = {}
    for order in itertools.permutations(range(1, l + 1)):
        rank = {r: pos for pos, r in enumerate(order)}
        A = Matrix.zeros(P.n, l)
        for (i, j), gens in support.items():
            g = max(gens, key=lambda r: rank[r])
            A[i - 1, g - 1] += 1
            A[j - 1, g - 1] -= 1
        try:
            sol, params = A.gauss_jordan_solve(rhs)
        except ValueError:
            continue
        if params.shape[0]:
            log.debug("ordering %s leaves %d free generators", order, params.shape[0])
            continue
        beta = tuple(_f(sol[r, 0]) for r in range(l))
        if any(v < 0 for v in beta):
            continue
        if any(beta[order[p] - 1] > beta[order[p + 1] - 1] for p in range(l - 1)):
            continue
        found.setdefault(beta, order)
    if not found:
        raise NoSolution(f"no ideal filling for {[str(v) for v in lam]}")
    if len(found) > 1:
        raise NoSolution(f"{len(found)} competing ideal fillings for {[str(v) for v in lam]}")
    beta = next(iter(found))
    entries = {ij: max(beta[r - 1] for r in gens) for ij, gens in support.items()}
    filling = IdealFilling(P, lam, ell, entries)
    assert filling.max_relations_hold() and filling.lambda_sum_holds()
    return filling


# -----------------------
# Quiver points
# -----------------------

@dataclass
class TropQuiverPoint:
    '''vertex coordinates delta and arrow coordinates rho = delta_head - delta_tail'''
    P: ParabolicData
    delta: Dict[quiver.Cell, Fraction]
    rho: Dict[Tuple[quiver.Cell, quiver.Cell], Fraction]

    def to_dict(self):
        return {"delta": [{"i": c[0], "j": c[1], "value": str(v)} for c, v in sorted(self.delta.items())],
                "rho": [{"from": list(t), "to": list(h), "value": str(v)} for (t, h), v in sorted(self.rho.items())]}


def tropical_critical_conditions_hold(topo: quiver.QuiverTopology, rho: Mapping) -> bool:
    '''min over incoming arrows equals min over outgoing arrows at every dot'''
    for v in topo.dots():
        ins = [rho[(a.tail, a.head)] for a in topo.arrows_into(v.cell)]
        outs = [rho[(a.tail, a.head)] for a in topo.arrows_out_of(v.cell)]
        if min(ins) != min(outs):
            return False
    return True


def filling_to_quiver_point(filling: IdealFilling) -> TropQuiverPoint:
    '''delta_{v_ji} = H^h_ij - H^v_ij + ell'''
    P = filling.P
    if not filling.max_relations_hold():
        raise PreconditionViolated("filling is not ideal")
    topo = quiver.build_topology(P)
    e = filling.entries
    delta: Dict[quiver.Cell, Fraction] = {}
    for (j, i) in topo.vertices:
        hh = sum((e[(i, l)] for l in range(j + 1, P.n + 1) if (i, l) in e), Fraction(0))
        hv = sum((e[(l, j)] for l in range(1, i) if (l, j) in e), Fraction(0))
        delta[(j, i)] = hh - hv + filling.ell
    rho = {(a.tail, a.head): delta[a.head] - delta[a.tail] for a in topo.arrows}
    point = TropQuiverPoint(P, delta, rho)
    for s in topo.stars():
        if delta[s.cell] != filling.lam[s.i - 1]:
            raise PreconditionViolated(f"star of block {s.block} carries {delta[s.cell]}, not lambda")
    if not tropical_critical_conditions_hold(topo, rho):
        raise PreconditionViolated("filling does not give a tropical critical point")
    return point


def quiver_point_to_filling(P: ParabolicData, rho: Mapping, lam: Sequence[Any]) -> IdealFilling:
    '''n_ij = min over arrows into v_{ji}'''
    topo = quiver.build_topology(P)
    rho = {k: to_fraction(v) for k, v in rho.items()}
    if not tropical_critical_conditions_hold(topo, rho):
        raise PreconditionViolated("arrow coordinates violate the tropical critical conditions")
    entries = {}
    for v in topo.dots():
        entries[(v.k, v.i)] = min(rho[(a.tail, a.head)] for a in topo.arrows_into(v.cell))
    lam = tuple(to_fraction(x) for x in lam)
    filling = IdealFilling(P, lam, ell_of(lam), entries)
    if not filling.max_relations_hold():
        raise PreconditionViolated("recovered filling is not ideal")
    return filling


@dataclass
class TropCriticalPoint:
    P: ParabolicData
    mu: Dict[int, Fraction]
    lam: Tuple[Fraction, ...]
    ell: Fraction

    def mu_names(self) -> Dict[str, Fraction]:
        return {f"{Chart.IDEAL.trop_prefix}{k}": v for k, v in self.mu.items()}

    def to_dict(self):
        return {"n": self.P.n, "IP": list(self.P.ip), "lambda": [str(v) for v in self.lam],
                "ell": str(self.ell), "mu": {str(k): str(v) for k, v in sorted(self.mu.items())}}


def tropical_critical_point(P: ParabolicData, lam: Sequence[Any]) -> TropCriticalPoint:
    filling = ideal_filling_for_lambda(P, lam)
    filling_to_quiver_point(filling)
    return TropCriticalPoint(P, filling.as_mu(), filling.lam, filling.ell)


# -----------------------
# Polytopes
# -----------------------

@dataclass
class Polytope:
    '''{point : form(point) >= 0 for every inequality}'''
    coords: List[str]
    inequalities: List[AffineForm]

    def __post_init__(self):
        seen, uniq = set(), []
        for f in self.inequalities:
            if f not in seen:
                seen.add(f)
                uniq.append(f)
        self.inequalities = uniq

    @property
    def dim(self) -> int:
        return len(self.coords)

    def specialise(self, values: Mapping[str, Any]) -> "Polytope":
        return Polytope(list(self.coords), [f.substitute(values) for f in self.inequalities])

    def contains(self, point: Mapping[str, Any]) -> bool:
        return all(f.evaluate(point) >= 0 for f in self.inequalities)

    def interior(self, point: Mapping[str, Any]) -> bool:
        return all(f.evaluate(point) > 0 for f in self.inequalities)

    def inequality_set(self) -> frozenset:
        return frozenset(self.inequalities)

    def vertices(self) -> List[Dict[str, Fraction]]:
        '''brute force over dim-sized subsets of tight inequalities'''
        if self.dim > ToolkitConstants.VERTEX_ENUM_MAX_DIM:
            raise TropicError(f"vertex enumeration is limited to dimension {ToolkitConstants.VERTEX_ENUM_MAX_DIM}")
        extra = {nm for f in self.inequalities for nm in f.names()} - set(self.coords)
        if extra:
            raise TropicError(f"specialise {sorted(extra)} before enumerating vertices")
        found: List[Tuple[Fraction, ...]] = []
        for subset in itertools.combinations(self.inequalities, self.dim):
            A = Matrix([[_q(f.coefficient(c)) for c in self.coords] for f in subset])
            if A.det() == 0:
                continue
            b = Matrix([_q(-f.const) for f in subset])
            sol = A.LUsolve(b)
            pt = tuple(_f(sol[k, 0]) for k in range(self.dim))
            if pt not in found and self.contains(dict(zip(self.coords, pt))):
                found.append(pt)
        if not found:
            raise UnboundedOrEmpty("no vertex found")
        log.debug("polytope of dimension %d has %d vertices", self.dim, len(found))
        return [dict(zip(self.coords, pt)) for pt in sorted(found)]

    def edges(self) -> List[Tuple[Dict[str, Fraction], Dict[str, Fraction]]]:
        '''vertex pairs whose common tight inequalities have rank dim - 1'''
        verts = self.vertices()
        tight = [{f for f in self.inequalities if f.evaluate(v) == 0} for v in verts]
        out = []
        for i, j in itertools.combinations(range(len(verts)), 2):
            common = [f for f in self.inequalities if f in tight[i] and f in tight[j]]
            rank = Matrix([[_q(f.coefficient(c)) for c in self.coords] for f in common]).rank() if common else 0
            if rank == self.dim - 1:
                out.append((verts[i], verts[j]))
        return out

    def to_dict(self):
        return {"coords": list(self.coords), "inequalities": [f.to_dict() for f in self.inequalities],
                "text": [f"{f} >= 0" for f in self.inequalities]}


def _coordinate_names(prefix: str, count: int) -> List[str]:
    return [f"{prefix}{k}" for k in range(1, count + 1)]


def symbolic_superpotential(P: ParabolicData, chart: Chart, word: Optional[ReducedWord] = None):
    '''W on the chart with symbolic d and coordinates, plus the coordinate names'''
    if chart is Chart.STRING:
        if not P.is_borel():
            raise PreconditionViolated("the string chart is defined for GL_n/B")
        word = word or weyl.word_i0(P.n)
        N = len(word)
        K, d, groups = chart_field(P.n, N, prefixes=(Chart.STRING.coordinate_prefix,))
        el = gbcharts.string_chart(gbcharts.StringPoint(d, groups[Chart.STRING.coordinate_prefix], word))
        return el.superpotential(), _coordinate_names(Chart.STRING.trop_prefix, N)
    if P.is_borel():
        word = word or weyl.word_i0(P.n)
        N = len(word)
        K, d, groups = chart_field(P.n, N, prefixes=(Chart.IDEAL.coordinate_prefix,))
        el = gbcharts.ideal_chart(gbcharts.IdealPoint.from_list(d, groups[Chart.IDEAL.coordinate_prefix], word))
        return el.superpotential(), _coordinate_names(Chart.IDEAL.trop_prefix, N)
    dec = quiver.symbolic_decoration(P)
    names = [f"{Chart.IDEAL.trop_prefix}{P.dot_index(k, a)}" for (k, a) in P.dots()]
    return quiver.superpotential_F(dec), names


def superpotential_polytope(P: ParabolicData, chart: Chart, lam: Optional[Sequence[Any]] = None,
                            word: Optional[ReducedWord] = None) -> Polytope:
    '''Trop(W) >= 0, one inequality per monomial; lambda left symbolic when not given'''
    W, coords = symbolic_superpotential(P, chart, word)
    trop = tropicalize(W)
    poly = Polytope(coords, trop.sorted_forms())
    if lam is not None:
        lam = check_dominant(P, lam)
        poly = poly.specialise(lambda_names(P, lam))
    return poly


def tropical_superpotential(P: ParabolicData, chart: Chart, word: Optional[ReducedWord] = None) -> TropExpr:
    W, _ = symbolic_superpotential(P, chart, word)
    return tropicalize(W)


# -----------------------
# Weights
# -----------------------

def weight_forms(P: ParabolicData, chart: Chart, word: Optional[ReducedWord] = None) -> List[AffineForm]:
    '''tropicalized diagonal of the weight matrix (or of gamma_P on the quiver)'''
    if chart is Chart.STRING:
        if not P.is_borel():
            raise PreconditionViolated("the string chart is defined for GL_n/B")
        word = word or weyl.word_i0(P.n)
        K, d, groups = chart_field(P.n, len(word), prefixes=(Chart.STRING.coordinate_prefix,))
        diag = gbcharts.string_chart(gbcharts.StringPoint(d, groups[Chart.STRING.coordinate_prefix], word)).t_R.diagonal()
    elif P.is_borel():
        word = word or weyl.word_i0(P.n)
        K, d, groups = chart_field(P.n, len(word), prefixes=(Chart.IDEAL.coordinate_prefix,))
        pt = gbcharts.IdealPoint.from_list(d, groups[Chart.IDEAL.coordinate_prefix], word)
        diag = gbcharts.universal_weight_matrix(pt.d, pt.m).diagonal()
    else:
        diag = quiver.gamma(quiver.symbolic_decoration(P)).diagonal()
    out = []
    for e in diag:
        forms = tropicalize(e).sorted_forms()
        if len(forms) != 1:
            raise TropicError(f"weight entry {e} is not a monomial")
        out.append(forms[0])
    return out


def tropical_weight(point: Mapping[str, Any], P: ParabolicData, chart: Chart, lam: Sequence[Any],
                    word: Optional[ReducedWord] = None) -> List[Fraction]:
    '''evaluate the tropical weight at a chart point (names zeta_k or mu_k) for highest weight lam'''
    lam = check_dominant(P, lam)
    values = dict(lambda_names(P, lam))
    values.update({k: to_fraction(v) for k, v in point.items()})
    return [f.evaluate(values) for f in weight_forms(P, chart, word)]


def weight_polytope_image(polytope: Polytope, forms: Sequence[AffineForm],
                          values: Mapping[str, Any] = None) -> List[Tuple[Dict[str, Fraction], List[Fraction]]]:
    '''vertices paired with their tropical weights'''
    fixed = dict(values or {})
    out = []
    for v in polytope.vertices():
        pt = dict(fixed)
        pt.update(v)
        out.append((v, [f.evaluate(pt) for f in forms]))
    return out


def distinguished_points(P: ParabolicData, polytope: Polytope, forms: Sequence[AffineForm],
                         lam: Sequence[Any]) -> List[Tuple[Dict[str, Fraction], List[Fraction]]]:
    '''
    Non-vertex points on edges between two regular vertices (weight a permutation
    of lambda) whose weight is a permutation of some irregular vertex weight.
    Returned with their weights, like weight_polytope_image.
    '''
    lam = check_dominant(P, lam)
    values = lambda_names(P, lam)
    coords = polytope.coords
    image = {tuple(v[c] for c in coords): tuple(w) for v, w in weight_polytope_image(polytope, forms, values)}
    regular = {pt for pt, w in image.items() if sorted(w) == sorted(lam)}
    targets = set()
    for pt, w in image.items():
        if pt not in regular:
            targets.update(itertools.permutations(w))
    found: Dict[Tuple[Fraction, ...], List[Fraction]] = {}
    for u, v in polytope.edges():
        pu, pv = tuple(u[c] for c in coords), tuple(v[c] for c in coords)
        if pu not in regular or pv not in regular:
            continue
        wu, wv = image[pu], image[pv]
        k = next((k for k in range(len(wu)) if wu[k] != wv[k]), None)
        if k is None:
            continue
        for t in targets:
            s = (t[k] - wu[k]) / (wv[k] - wu[k])
            if 0 < s < 1 and all(a + s * (b - a) == c for a, b, c in zip(wu, wv, t)):
                found[tuple(a + s * (b - a) for a, b in zip(pu, pv))] = list(t)
    log.debug("%d distinguished points off the vertices", len(found))
    return [(dict(zip(coords, pt)), found[pt]) for pt in sorted(found)]


def string_ideal_linear_map(n: int) -> Matrix:
    '''mu = E zeta for the monomial coordinate change along i_0'''
    return gbcharts.string_ideal_exponents(n)


def compose_form(form: AffineForm, table: Mapping[str, AffineForm]) -> AffineForm:
    out = AffineForm.constant(form.const)
    for nm, c in form.coeffs:
        out = out + (table[nm].scale(c) if nm in table else AffineForm.build({nm: c}))
    return out


def string_polytope_in_ideal_coords(polytope: Polytope, n: int) -> Polytope:
    '''substitute zeta = E^{-1} mu into every inequality'''
    Einv = string_ideal_linear_map(n).inv()
    N = Einv.rows
    zeta = _coordinate_names(Chart.STRING.trop_prefix, N)
    mu = _coordinate_names(Chart.IDEAL.trop_prefix, N)
    table = {zeta[r]: AffineForm.build({mu[c]: _f(Einv[r, c]) for c in range(N)}) for r in range(N)}
    return Polytope(mu, [compose_form(f, table) for f in polytope.inequalities])


# -----------------------
# Braid moves, tropically
# -----------------------

def trop_braid_transform(word: ReducedWord, move: BraidMove,
                         mu: Mapping[PositiveRoot, Any]) -> Tuple[ReducedWord, Dict[PositiveRoot, Fraction]]:
    '''
    mu''_a = mu'_{a+b} + min(mu'_a, mu'_b) - mu'_b, mu''_{a+b} = mu'_a + mu'_b - min(mu'_a, mu'_b),
    mu''_b = mu'_{a+b} + min(mu'_a, mu'_b) - mu'_a
    '''
    try:
        new_idx = weyl.apply_move(word.indices, move)
    except weyl.InvalidMove as e:
        raise InvalidMove(str(e)) from e
    out = {r: to_fraction(v) for r, v in mu.items()}
    if move.kind == 3:
        roots = weyl.root_order(word)
        p = move.position - 1
        ra, rab, rb = roots[p], roots[p + 1], roots[p + 2]
        a, ab, b = out[ra], out[rab], out[rb]
        lo = min(a, b)
        out[ra] = ab + lo - b
        out[rab] = a + b - lo
        out[rb] = ab + lo - a
    return ReducedWord(new_idx, word.n), out


def transport_along(word_from: ReducedWord, word_to: ReducedWord,
                    mu: Mapping[PositiveRoot, Any]) -> Dict[PositiveRoot, Fraction]:
    w = word_from
    out = {r: to_fraction(v) for r, v in mu.items()}
    for mv in weyl.braid_path(word_from, word_to, word_from.n):
        w, out = trop_braid_transform(w, mv, out)
    return out
