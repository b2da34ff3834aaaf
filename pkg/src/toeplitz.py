# toeplitz.py
'''
The Puiseux series side: products of y_i(1/m) along a reduced word of w_P w0,
Toeplitz detection, ideal fillings read off valuations, recovery of the ideal
coordinates from interval minors, and a numeric critical point estimator.
'''

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import optimize
from scipy.special import logsumexp

from exactnum import (RR_DOMAIN, PuiseuxSeries, UnknownValuation, common_domain,
                      format_scalar, is_positive, to_fraction, val)
import genmat
from genmat import GenericMatrix
import quiver
from toolkit_constants import ToolkitConstants
import tropic
import weyl
from weyl import ParabolicData, ReducedWord

log = logging.getLogger(__name__)

PuiseuxMatrix = GenericMatrix


# -----------------------
# Exceptions
# -----------------------

class ToeplitzError(Exception):
    pass

class NonPositive(ToeplitzError):
    pass

class TruncationInsufficient(ToeplitzError):
    pass

class ZeroMinor(ToeplitzError):
    pass

class NoConvergence(ToeplitzError):
    pass


# -----------------------
# Y products
# -----------------------

def _check_positive(m: Sequence[Any]):
    for k, v in enumerate(m, start=1):
        if isinstance(v, PuiseuxSeries):
            if v.is_known_zero() or v.valuation is None:
                raise NonPositive(f"m{k} is zero")
            if not is_positive(v):
                raise NonPositive(f"m{k} = {v} is not positive")
        elif isinstance(v, (int, float, Fraction)) and not v > 0:
            raise NonPositive(f"m{k} = {v} is not positive")


def build_Y(P: ParabolicData, m: Sequence[Any], word: Optional[ReducedWord] = None) -> GenericMatrix:
    '''y_{i_1}(1/m_1) ... y_{i_M}(1/m_M) along a reduced word of w_P w0'''
    word = word or weyl.wp_w0_word(P)
    if len(m) != len(word):
        raise ToeplitzError(f"word of length {len(word)} with {len(m)} coordinates")
    _check_positive(m)
    dom = common_domain(m)
    factors = [genmat.y(i, dom.one / dom.convert(v)) for i, v in zip(word.indices, m)]
    return genmat.word_product(factors, P.n, dom)


# -----------------------
# Toeplitz detection
# -----------------------

@dataclass
class ToeplitzReport:
    is_toeplitz: bool
    violation: Optional[Tuple[int, Tuple[int, int], Tuple[int, int]]] = None
    filling: Optional[tropic.IdealFilling] = None
    heuristic: bool = False

    def to_dict(self):
        out: Dict[str, Any] = {"is_toeplitz": self.is_toeplitz, "heuristic": self.heuristic}
        if self.violation is not None:
            diag, a, b = self.violation
            out["violation"] = {"diagonal": diag, "first": list(a), "second": list(b)}
        if self.filling is not None:
            out["filling"] = self.filling.to_dict()
        return out


def _entries_equal(a: Any, b: Any, rtol: float) -> bool:
    '''
    Series agree when their difference has no known term; that counts once the
    agreement reaches past the valuation of the entries themselves.
    '''
    if isinstance(a, float) or isinstance(b, float):
        scale = max(abs(a), abs(b))
        return abs(a - b) <= rtol * scale if scale else True
    diff = a - b
    if isinstance(diff, PuiseuxSeries):
        if diff.terms:
            return False
        if diff.is_exact:
            return True
        lows = [s.valuation for s in (a, b) if isinstance(s, PuiseuxSeries) and s.terms]
        if not lows or diff.trunc <= min(lows):
            raise TruncationInsufficient(f"entries agree only to order {diff.trunc}")
        return True
    return not diff


def is_toeplitz(M: GenericMatrix, rtol: Optional[float] = None) -> ToeplitzReport:
    '''constant along every diagonal j - i = const; first violation is reported'''
    rtol = ToolkitConstants.TOEPLITZ_RTOL if rtol is None else rtol
    n = M.n
    undecided = None
    for diag in range(-(n - 1), n):
        cells = [(i, i + diag) for i in range(1, n + 1) if 1 <= i + diag <= n]
        for a, b in zip(cells, cells[1:]):
            try:
                ok = _entries_equal(M[a], M[b], rtol)
            except TruncationInsufficient as e:
                undecided = undecided or e
                continue
            if not ok:
                return ToeplitzReport(False, (diag, a, b), heuristic=M.domain is RR_DOMAIN)
    if undecided is not None:
        raise undecided
    return ToeplitzReport(True, heuristic=M.domain is RR_DOMAIN)


def toeplitz_filling(P: ParabolicData, m: Sequence[Any], word: Optional[ReducedWord] = None,
                     lam: Optional[Sequence[Any]] = None) -> ToeplitzReport:
    '''
    When Y is Toeplitz the valuations of m, keyed by the roots of the word, form an
    ideal filling. Without lam the filling is reported with ell = 0.
    '''
    word = word or weyl.wp_w0_word(P)
    Y = build_Y(P, m, word)
    report = is_toeplitz(Y)
    if not report.is_toeplitz:
        return report
    vals = []
    for v in m:
        tv = val(v)
        if tv.is_infinite:
            raise UnknownValuation(f"{v} has no valuation")
        vals.append(tv.value)
    entries = {(r.i, r.j): v for r, v in zip(weyl.root_order(word), vals)}
    if lam is None:
        filling = tropic.IdealFilling(P, (), Fraction(0), entries)
        filling.lam = tuple(filling.weight_of_entries())
    else:
        lam = tuple(to_fraction(x) for x in lam)
        filling = tropic.IdealFilling(P, lam, tropic.ell_of(lam), entries)
    if not filling.max_relations_hold():
        raise ToeplitzError("valuations of a Toeplitz point do not form an ideal filling")
    report.filling = filling
    return report


def toeplitz_from_filling(P: ParabolicData, lam: Sequence[Any],
                          trunc: Optional[int] = None) -> Tuple[List[PuiseuxSeries], GenericMatrix]:
    '''
    Puiseux coordinates m with Toeplitz Y and valuations equal to the ideal filling,
    built explicitly for n <= 3 (for GL_3/B through 1/m_2 = 1/m_1 + 1/m_3).
    '''
    if P.n > 3:
        raise ToeplitzError("explicit Toeplitz witnesses are built for n <= 3")
    filling = tropic.ideal_filling_for_lambda(P, lam)
    trunc = ToolkitConstants.DEFAULT_TRUNCATION if trunc is None else trunc
    mu = filling.as_mu()
    word = weyl.wp_w0_word(P)
    if P.is_borel() and P.n == 3:
        m1 = PuiseuxSeries.monomial(1, mu[1])
        m3 = PuiseuxSeries.monomial(1, mu[3])
        m2 = (m1 * m3) * (m1 + m3).inverse(trunc)
        m = [m1, m2, m3]
    else:
        # one free generator: every entry shares its valuation and Y is Toeplitz with equal m
        m = [PuiseuxSeries.monomial(1, mu[P.dot_index(k, a)]) for (k, a) in P.dots()]
    return m, build_Y(P, m, word)


# -----------------------
# Recovering ideal coordinates
# -----------------------

def _interval(lo: int, hi: int) -> Tuple[int, ...]:
    return tuple(range(lo, hi + 1))


def recover_ideal_coords(Y: GenericMatrix, n: Optional[int] = None) -> Dict[int, Any]:
    '''
    m_{ji} = m_{s_i + j - i} from interval minors of Y (rows above, columns below):
    m_{ni} = D^n_{n-i+1} / D^n_{n-i}; for j < n the quotient
    D^{[j+1,n]}_{[j-i+1,n-i]} D^{[j,n]}_{[j-i+1,n-i+1]} / (D^{[j+1,n]}_{[j-i+2,n-i+1]} D^{[j,n]}_{[j-i,n-i]}).
    '''
    n = n or Y.n

    def minor(rows, cols):
        return genmat.minor(Y, rows, cols)

    out: Dict[int, Any] = {}
    offset = lambda i: sum(n - j for j in range(1, i))
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            if j == n:
                num = minor((n,), (n - i + 1,))
                den = minor((n,), (n - i,))
            else:
                num = minor(_interval(j + 1, n), _interval(j - i + 1, n - i)) * \
                    minor(_interval(j, n), _interval(j - i + 1, n - i + 1))
                den = minor(_interval(j + 1, n), _interval(j - i + 2, n - i + 1)) * \
                    minor(_interval(j, n), _interval(j - i, n - i))
            if not den:
                raise ZeroMinor(f"denominator minor vanishes while recovering m_({j},{i})")
            out[offset(i) + j - i] = num / den
    return out


# -----------------------
# Numeric critical point
# -----------------------

@dataclass
class NumericCriticalPoint:
    P: ParabolicData
    lam: Tuple[Fraction, ...]
    t0: float
    m: Dict[int, float]
    valuations: Dict[int, float]
    rounded: Dict[int, Fraction] = field(default_factory=dict)
    toeplitz: Optional[ToeplitzReport] = None

    def to_dict(self):
        return {"n": self.P.n, "IP": list(self.P.ip), "lambda": [str(v) for v in self.lam], "t0": self.t0,
                "m": {str(k): v for k, v in sorted(self.m.items())},
                "valuations": {str(k): v for k, v in sorted(self.valuations.items())},
                "rounded": {str(k): str(v) for k, v in sorted(self.rounded.items())},
                "toeplitz": self.toeplitz.to_dict() if self.toeplitz else None,
                "heuristic": True}


class _LogSystem:
    '''
    log r_a = c_a + <e_a, log d> + <f_a, log m> for every arrow; the critical
    conditions become logsumexp(in) - logsumexp(out) = 0 at every dot
    '''

    def __init__(self, P: ParabolicData):
        self.P = P
        idx = [P.dot_index(k, a) for (k, a) in P.dots()]
        self.index = idx
        dec = quiver.symbolic_decoration(P)
        self.topology = dec.topology
        nd = P.l + 1
        arrows = dec.topology.arrows
        self.E = np.zeros((len(arrows), nd))
        self.F = np.zeros((len(arrows), len(idx)))
        self.c = np.zeros(len(arrows))
        self.key = {}
        for a_pos, a in enumerate(arrows):
            self.key[(a.tail, a.head)] = a_pos
            e = dec.arrow_value(a)
            (nmon, ncoef), = e.numer.terms()
            (dmon, dcoef), = e.denom.terms()
            self.c[a_pos] = math.log(float(Fraction(int(ncoef.numerator), int(ncoef.denominator)) /
                                           Fraction(int(dcoef.numerator), int(dcoef.denominator))))
            for k, (p, q) in enumerate(zip(nmon, dmon)):
                if k < nd:
                    self.E[a_pos, k] = p - q
                else:
                    self.F[a_pos, k - nd] = p - q
        self.ins = []
        self.outs = []
        for v in dec.topology.dots():
            self.ins.append([self.key[(a.tail, a.head)] for a in dec.topology.arrows_into(v.cell)])
            self.outs.append([self.key[(a.tail, a.head)] for a in dec.topology.arrows_out_of(v.cell)])

    def residual(self, u: np.ndarray, logd: np.ndarray) -> np.ndarray:
        logr = self.c + self.E @ logd + self.F @ u
        return np.array([logsumexp(logr[i]) - logsumexp(logr[o]) for i, o in zip(self.ins, self.outs)])


def _solve_along(system: _LogSystem, u0: np.ndarray, logd_from: np.ndarray, logd_to: np.ndarray,
                 steps: int) -> np.ndarray:
    u = u0
    for s in np.linspace(0.0, 1.0, steps + 1)[1:]:
        logd = (1 - s) * logd_from + s * logd_to
        sol = optimize.root(system.residual, u, args=(logd,), method="hybr",
                            tol=ToolkitConstants.NEWTON_TOL,
                            options={"maxfev": ToolkitConstants.NEWTON_MAX_STEPS * (len(u) + 1)})
        if not sol.success or np.max(np.abs(system.residual(sol.x, logd))) > 1e-9:
            raise NoConvergence(f"critical point solve failed at step {s:.3f}: {sol.message}")
        u = sol.x
    return u


def numeric_critical_point(P: ParabolicData, lam: Sequence[Any], t0: Optional[float] = None) -> NumericCriticalPoint:
    '''
    Positive critical point of the quiver superpotential at d = t0^lambda, followed
    from t = 1 by continuation. Valuations are log-slopes between t0 and t0^2,
    rounded with denominators bounded by 2n.
    '''
    lam = tropic.check_dominant(P, lam)
    t0 = ToolkitConstants.DEFAULT_T0 if t0 is None else float(t0)
    if not 0 < t0 < 1:
        raise ValueError("t0 must lie in (0, 1)")
    system = _LogSystem(P)
    b = P.bounds
    lam_blocks = np.array([float(lam[b[j] - 1]) for j in range(1, P.l + 2)])
    log_t0 = math.log(t0)
    steps = ToolkitConstants.CONTINUATION_STEPS
    zero = np.zeros(P.l + 1)
    u = _solve_along(system, np.zeros(len(system.index)), zero, zero, 1)
    u1 = _solve_along(system, u, zero, lam_blocks * log_t0, steps)
    u2 = _solve_along(system, u1, lam_blocks * log_t0, lam_blocks * 2 * log_t0, steps)
    log.debug("numeric critical point for %s converged", P.label())
    bound = ToolkitConstants.VALUATION_DENOMINATOR_FACTOR * P.n
    m = {i: float(math.exp(x)) for i, x in zip(system.index, u1)}
    vals = {i: float((y - x) / log_t0) for i, x, y in zip(system.index, u1, u2)}
    rounded = {i: Fraction(v).limit_denominator(bound) for i, v in vals.items()}
    Y = build_Y(P, [m[i] for i in system.index])
    return NumericCriticalPoint(P, lam, t0, m, vals, rounded, is_toeplitz(Y))


def describe(Y: GenericMatrix) -> List[List[str]]:
    return [[format_scalar(Y[i, j]) for j in range(1, Y.n + 1)] for i in range(1, Y.n + 1)]
