# exactnum.py
'''
Exact coefficient domains: rationals (fractions.Fraction), multivariate rational
functions (sympy FracField over QQ), truncated Puiseux series and tropical numbers,
together with the valuation and the tropicalization of subtraction-free expressions.
'''

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement, FracField, field
from sympy.polys.orderings import lex

from toolkit_constants import ToolkitConstants

log = logging.getLogger(__name__)


# -----------------------
# Exceptions
# -----------------------

class ExactNumError(Exception):
    pass

class UnknownValuation(ExactNumError):
    '''the series has no known terms but a finite truncation order'''
    pass

class DivisionByZero(ExactNumError, ZeroDivisionError):
    pass

class NotSubtractionFree(ExactNumError):
    pass

class NonMonomialDenominator(ExactNumError):
    pass


Rational = Fraction


def to_fraction(x: Any) -> Fraction:
    '''ints, Fractions and strings such as "5/6" or "-1"'''
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if hasattr(x, "numerator") and hasattr(x, "denominator"):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"cannot read {x!r} as an exact rational")


def parse_rational_list(text: str) -> List[Fraction]:
    '''comma separated rationals, e.g. "2,1,-1" or "1/2,0"'''
    parts = [p.strip() for p in text.split(",") if p.strip()]
    try:
        return [Fraction(p) for p in parts]
    except ValueError as e:
        raise ValueError(f'bad rational list "{text}"') from e


# -----------------------
# Puiseux series
# -----------------------

def _fmt_exponent(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e.numerator)
    return f"({e})"


def _fmt_power(e: Fraction, var: str) -> str:
    if e == 0:
        return "1"
    if e == 1:
        return var
    return f"{var}^{_fmt_exponent(e)}"


def _min_opt(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    #None is +infinity
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_opt(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None or b is None:
        return None
    return a + b


class PuiseuxSeries:
    '''
    A finite sum of rational powers of t with rational coefficients, known exactly
    below `trunc`. trunc=None means the series is exact (no unknown tail).

    Values are immutable; all arithmetic returns new series and propagates the
    truncation order pessimistically.
    '''
    __slots__ = ("_terms", "_trunc")

    def __init__(self, terms: Iterable[Tuple[Any, Any]] = (), trunc: Optional[Any] = None):
        t = None if trunc is None else to_fraction(trunc)
        acc: Dict[Fraction, Fraction] = {}
        for e, c in terms:
            e = to_fraction(e)
            c = to_fraction(c)
            acc[e] = acc.get(e, Fraction(0)) + c
        kept = tuple(sorted((e, c) for e, c in acc.items() if c != 0 and (t is None or e < t)))
        object.__setattr__(self, "_terms", kept)
        object.__setattr__(self, "_trunc", t)

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxSeries is immutable")

    # constructors

    @classmethod
    def zero(cls) -> "PuiseuxSeries":
        return cls()

    @classmethod
    def one(cls) -> "PuiseuxSeries":
        return cls([(0, 1)])

    @classmethod
    def monomial(cls, coeff: Any, exponent: Any, trunc: Optional[Any] = None) -> "PuiseuxSeries":
        return cls([(exponent, coeff)], trunc)

    @classmethod
    def coerce(cls, x: Any) -> "PuiseuxSeries":
        if isinstance(x, PuiseuxSeries):
            return x
        return cls([(0, to_fraction(x))])

    # accessors

    @property
    def terms(self) -> Tuple[Tuple[Fraction, Fraction], ...]:
        return self._terms

    @property
    def trunc(self) -> Optional[Fraction]:
        return self._trunc

    @property
    def is_exact(self) -> bool:
        return self._trunc is None

    def is_known_zero(self) -> bool:
        return not self._terms and self._trunc is None

    @property
    def valuation(self) -> Optional[Fraction]:
        '''lowest exponent; None for the exact zero series'''
        if self._terms:
            return self._terms[0][0]
        if self._trunc is None:
            return None
        raise UnknownValuation(f"no terms known below t^{_fmt_exponent(self._trunc)}")

    def _valuation_bound(self) -> Optional[Fraction]:
        #lower bound on the true valuation, None = infinity
        if self._terms:
            return self._terms[0][0]
        return self._trunc

    @property
    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            if self._trunc is None:
                raise DivisionByZero("zero series has no leading coefficient")
            raise UnknownValuation("leading term hidden beyond truncation")
        return self._terms[0][1]

    def truncate(self, order: Any) -> "PuiseuxSeries":
        return PuiseuxSeries(self._terms, _min_opt(self._trunc, to_fraction(order)))

    def evaluate(self, t0: float) -> float:
        return float(sum(float(c) * t0 ** float(e) for e, c in self._terms))

    # arithmetic

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.coerce(other)
            except TypeError:
                return NotImplemented
        return PuiseuxSeries(self._terms + other._terms, _min_opt(self._trunc, other._trunc))

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(((e, -c) for e, c in self._terms), self._trunc)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.coerce(other)
            except TypeError:
                return NotImplemented
        if self.is_known_zero() or other.is_known_zero():
            return PuiseuxSeries.zero()
        trunc = _min_opt(_add_opt(self._trunc, other._valuation_bound()),
                         _add_opt(other._trunc, self._valuation_bound()))
        prods = [(ea + eb, ca * cb) for ea, ca in self._terms for eb, cb in other._terms]
        return PuiseuxSeries(prods, trunc)

    __rmul__ = __mul__

    def inverse(self, prec: Optional[Any] = None) -> "PuiseuxSeries":
        '''
        1/s by geometric series. Relative precision is trunc - 2*val when s is
        truncated; for exact non-monomial s it is `prec` (default DEFAULT_TRUNCATION).
        '''
        if self.is_known_zero():
            raise DivisionByZero("division by the zero series")
        v = self.valuation
        c = self.leading_coefficient
        if self.is_exact and len(self._terms) == 1:
            return PuiseuxSeries.monomial(1 / c, -v)
        if self.is_exact:
            rel = to_fraction(prec) if prec is not None else Fraction(ToolkitConstants.DEFAULT_TRUNCATION)
        else:
            rel = self._trunc - v
        #s = c t^v (1 + r), r has strictly positive exponents
        r = PuiseuxSeries(((e - v, ci / c) for e, ci in self._terms[1:]), rel)
        acc = PuiseuxSeries.one().truncate(rel)
        term = PuiseuxSeries.one().truncate(rel)
        while True:
            term = (term * -r).truncate(rel)
            if not term.terms:
                break
            acc = acc + term
        scaled = PuiseuxSeries(((e - v, ci / c) for e, ci in acc.terms), rel - v)
        return scaled

    def __truediv__(self, other):
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return PuiseuxSeries.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = PuiseuxSeries.one()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __bool__(self) -> bool:
        if self._terms:
            return True
        if self._trunc is None:
            return False
        raise UnknownValuation("cannot decide whether a fully truncated series is zero")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxSeries):
            try:
                other = PuiseuxSeries.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms and self._trunc == other._trunc

    def __hash__(self):
        return hash((self._terms, self._trunc))

    def __repr__(self):
        return f"PuiseuxSeries({self})"

    def __str__(self):
        var = ToolkitConstants.SERIES_VARIABLE
        parts: List[str] = []
        for e, c in self._terms:
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif mag == 1:
                body = _fmt_power(e, var)
            else:
                body = f"{mag}*{_fmt_power(e, var)}"
            parts.append(("- " if c < 0 else "+ ") + body)
        if self._trunc is not None:
            parts.append("+ O(" + _fmt_power(self._trunc, var) + ")")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def val(s: Union[PuiseuxSeries, Any]) -> "TropValue":
    '''Val_K: lowest exponent, infinity for the zero series'''
    s = PuiseuxSeries.coerce(s)
    return TropValue(s.valuation)


def is_positive(s: Union[PuiseuxSeries, Any]) -> bool:
    s = PuiseuxSeries.coerce(s)
    return s.leading_coefficient > 0


def puiseux_arith(a: Any, b: Any, op: str, prec: Optional[Any] = None) -> PuiseuxSeries:
    a = PuiseuxSeries.coerce(a)
    b = PuiseuxSeries.coerce(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a * b.inverse(prec)
    raise ValueError(f'unknown series operation "{op}"')


# -----------------------
# Tropical numbers and expressions
# -----------------------

@dataclass(frozen=True)
class TropValue:
    '''element of Q u {inf}; None is infinity'''
    value: Optional[Fraction]

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def oplus(self, other: "TropValue") -> "TropValue":
        if self.value is None:
            return other
        if other.value is None:
            return self
        return TropValue(min(self.value, other.value))

    def otimes(self, other: "TropValue") -> "TropValue":
        if self.value is None or other.value is None:
            return TropValue(None)
        return TropValue(self.value + other.value)

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


def _natural_key(name: str):
    m = re.match(r"^([A-Za-z_]+)(\d+)$", name)
    if m:
        return (m.group(1), int(m.group(2)), "")
    return (name, -1, name)


@dataclass(frozen=True)
class AffineForm:
    '''sum of coefficient*name plus a rational constant; names cover coordinates and lambdas'''
    coeffs: Tuple[Tuple[str, Fraction], ...] = ()
    const: Fraction = Fraction(0)

    @staticmethod
    def build(coeffs: Mapping[str, Any], const: Any = 0) -> "AffineForm":
        items = tuple(sorted(((k, to_fraction(v)) for k, v in coeffs.items() if to_fraction(v) != 0),
                             key=lambda kv: _natural_key(kv[0])))
        return AffineForm(items, to_fraction(const))

    @staticmethod
    def constant(c: Any) -> "AffineForm":
        return AffineForm((), to_fraction(c))

    @staticmethod
    def variable(name: str) -> "AffineForm":
        return AffineForm(((name, Fraction(1)),), Fraction(0))

    def as_dict(self) -> Dict[str, Fraction]:
        return dict(self.coeffs)

    def names(self) -> List[str]:
        return [k for k, _ in self.coeffs]

    def coefficient(self, name: str) -> Fraction:
        return self.as_dict().get(name, Fraction(0))

    def __add__(self, other: "AffineForm") -> "AffineForm":
        acc = self.as_dict()
        for k, v in other.coeffs:
            acc[k] = acc.get(k, Fraction(0)) + v
        return AffineForm.build(acc, self.const + other.const)

    def scale(self, c: Any) -> "AffineForm":
        c = to_fraction(c)
        return AffineForm.build({k: v * c for k, v in self.coeffs}, self.const * c)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def substitute(self, values: Mapping[str, Any]) -> "AffineForm":
        '''replace some names by rationals'''
        keep: Dict[str, Fraction] = {}
        const = self.const
        for k, v in self.coeffs:
            if k in values:
                const += v * to_fraction(values[k])
            else:
                keep[k] = v
        return AffineForm.build(keep, const)

    def evaluate(self, point: Mapping[str, Any]) -> Fraction:
        out = self.const
        for k, v in self.coeffs:
            if k not in point:
                raise KeyError(f"no value for {k}")
            out += v * to_fraction(point[k])
        return out

    def __str__(self):
        parts: List[str] = []
        for k, v in self.coeffs:
            mag = abs(v)
            body = k if mag == 1 else f"{mag}*{k}"
            parts.append(("- " if v < 0 else "+ ") + body)
        if self.const != 0 or not parts:
            parts.append(("- " if self.const < 0 else "+ ") + str(abs(self.const)))
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def to_dict(self) -> Dict[str, Any]:
        return {"coeffs": {k: str(v) for k, v in self.coeffs}, "const": str(self.const)}


@dataclass(frozen=True)
class TropExpr:
    '''min over a non-empty, deduplicated set of affine forms'''
    forms: FrozenSet[AffineForm] = dc_field(default_factory=frozenset)

    def __post_init__(self):
        if not self.forms:
            raise ValueError("a tropical expression needs at least one form")

    @staticmethod
    def of(forms: Iterable[AffineForm]) -> "TropExpr":
        return TropExpr(frozenset(forms))

    def sorted_forms(self) -> List[AffineForm]:
        return sorted(self.forms, key=str)

    def evaluate(self, point: Mapping[str, Any]) -> Fraction:
        return min(f.evaluate(point) for f in self.forms)

    def substitute(self, values: Mapping[str, Any]) -> "TropExpr":
        return TropExpr.of(f.substitute(values) for f in self.forms)

    def __str__(self):
        return "min{" + ", ".join(str(f) for f in self.sorted_forms()) + "}"


_DEFAULT_TROP_PREFIXES = {"d": "lambda", "z": "zeta", "m": "mu"}


def default_rename(name: str) -> Optional[str]:
    '''d_i -> lambda_i, z_j -> zeta_j, m_j -> mu_j, t -> constant offset (None)'''
    if name == ToolkitConstants.SERIES_VARIABLE:
        return None
    m = re.match(r"^([A-Za-z]+)(\d+)$", name)
    if m and m.group(1) in _DEFAULT_TROP_PREFIXES:
        return _DEFAULT_TROP_PREFIXES[m.group(1)] + m.group(2)
    return name


def _resolve_rename(rename) -> Callable[[str], Optional[str]]:
    if rename is None:
        return default_rename
    if callable(rename):
        return rename
    table = dict(rename)
    return lambda nm: table[nm] if nm in table else default_rename(nm)


def tropicalize(e: Any, rename=None) -> TropExpr:
    '''
    Trop of a subtraction-free quotient whose denominator is a single monomial:
    each numerator monomial becomes the affine form of its exponent vector minus the
    denominator's, the variable t contributes to the constant.
    '''
    if isinstance(e, (int, Fraction)):
        if to_fraction(e) <= 0:
            raise NotSubtractionFree(f"constant {e} is not positive")
        return TropExpr.of([AffineForm.constant(0)])
    if not isinstance(e, FracElement):
        raise TypeError(f"cannot tropicalize {type(e).__name__}")
    ren = _resolve_rename(rename)
    names = [str(s) for s in e.field.symbols]
    if not e.numer:
        raise NotSubtractionFree("the zero function has no tropicalization")
    dterms = e.denom.terms()
    if len(dterms) != 1:
        raise NonMonomialDenominator(f"denominator of {e} is not a monomial")
    dmon, dcoeff = dterms[0]
    sign = 1 if dcoeff > 0 else -1
    forms = []
    for mon, c in e.numer.terms():
        if not (c * sign > 0):
            raise NotSubtractionFree(f"{e} has a negative coefficient")
        coeffs: Dict[str, Fraction] = {}
        const = Fraction(0)
        for nm, a, b in zip(names, mon, dmon):
            k = a - b
            if k == 0:
                continue
            target = ren(nm)
            if target is None:
                const += k
            else:
                coeffs[target] = coeffs.get(target, Fraction(0)) + k
        forms.append(AffineForm.build(coeffs, const))
    return TropExpr.of(forms)


# -----------------------
# Coefficient domains
# -----------------------

@dataclass(frozen=True)
class Domain:
    '''what a matrix needs from its scalars: additive and multiplicative identities and a converter'''
    name: str
    zero: Any
    one: Any
    convert: Callable[[Any], Any]

    def __repr__(self):
        return f"Domain({self.name})"


QQ_DOMAIN = Domain("QQ", Fraction(0), Fraction(1), to_fraction)
RR_DOMAIN = Domain("RR", 0.0, 1.0, float)
PUISEUX_DOMAIN = Domain("Puiseux", PuiseuxSeries.zero(), PuiseuxSeries.one(), PuiseuxSeries.coerce)


@lru_cache(maxsize=None)
def field_domain(K: FracField) -> Domain:
    def convert(x):
        if isinstance(x, FracElement) and x.field == K:
            return x
        if isinstance(x, Fraction):
            return K(x.numerator) / K(x.denominator)
        return K(x)
    names = ",".join(str(s) for s in K.symbols)
    return Domain(f"QQ({names})", K.zero, K.one, convert)


def domain_of(x: Any) -> Domain:
    if isinstance(x, FracElement):
        return field_domain(x.field)
    if isinstance(x, PuiseuxSeries):
        return PUISEUX_DOMAIN
    if isinstance(x, float):
        return RR_DOMAIN
    if isinstance(x, (int, Fraction)):
        return QQ_DOMAIN
    try:
        import numpy as np
        if isinstance(x, np.floating):
            return RR_DOMAIN
    except ImportError:
        pass
    raise TypeError(f"no coefficient domain for {type(x).__name__}")


def common_domain(values: Iterable[Any]) -> Domain:
    '''the richest domain among the values (symbolic > series > reals > rationals)'''
    rank = {"QQ": 0, "RR": 1, "Puiseux": 2}
    best = QQ_DOMAIN
    for v in values:
        d = domain_of(v)
        if rank.get(d.name, 3) > rank.get(best.name, 3):
            best = d
    return best


def is_zero(x: Any) -> bool:
    return not x


def same(a: Any, b: Any) -> bool:
    '''exact equality that survives non-canonical representations'''
    return is_zero(a - b)


def symbolic_field(names: Sequence[str]) -> Tuple[FracField, Dict[str, FracElement]]:
    '''lex-ordered field of rational functions over QQ in the declared variables'''
    if not names:
        raise ValueError("a rational function field needs at least one variable")
    K, *gens = field(",".join(names), QQ, lex)
    return K, dict(zip(names, gens))


def chart_field(n: int, count: int, prefixes: Sequence[str] = ("z",), with_t: bool = False,
                d_count: Optional[int] = None):
    '''
    field with d1..dn (or d1..d_{d_count}) plus prefix1..prefix_count for each prefix.
    Returns (K, d list, {prefix: list of generators}).
    '''
    dn = n if d_count is None else d_count
    hw = ToolkitConstants.HIGHEST_WEIGHT_PREFIX
    names = [f"{hw}{i}" for i in range(1, dn + 1)]
    for p in prefixes:
        names += [f"{p}{j}" for j in range(1, count + 1)]
    if with_t:
        names.append(ToolkitConstants.SERIES_VARIABLE)
    K, gens = symbolic_field(names)
    d = [gens[f"{hw}{i}"] for i in range(1, dn + 1)]
    groups = {p: [gens[f"{p}{j}"] for j in range(1, count + 1)] for p in prefixes}
    if with_t:
        groups[ToolkitConstants.SERIES_VARIABLE] = [gens[ToolkitConstants.SERIES_VARIABLE]]
    return K, d, groups


def format_scalar(x: Any) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def parse_expression(K: FracField, text: str) -> FracElement:
    '''read a rational function written in sympy syntax into the field K'''
    from sympy import sympify
    try:
        expr = sympify(text.replace("^", "**"))
    except Exception as e:
        raise ValueError(f'cannot parse expression "{text}"') from e
    return K.from_expr(expr)
