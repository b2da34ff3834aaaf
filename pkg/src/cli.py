# cli.py
'''python src/cli.py <subcommand> [options]

Subcommands: filling, polytope, chart, coordchange, quiver, toeplitz, conjecture, reproduce.
Results are written to stdout (JSON by default, one line per check for reproduce);
log records go to stderr.
'''

from __future__ import annotations

import argparse
import json
import logging
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple

from sympy.polys.fields import FracElement

import case_processor
from case_processor import Case, ParsedCases
import exactnum
from exactnum import (PuiseuxSeries, chart_field, format_scalar, parse_expression, parse_rational_list,
                      same, symbolic_field, to_fraction, val)
import gbcharts
import genmat
import quiver
from toolkit_constants import Chart, FactorKind, ToolkitConstants
import toeplitz
import tropic
import weyl
from weyl import ParabolicData, PositiveRoot, ReducedWord

log = logging.getLogger("flagmirror")

#bad input, reported with exit code 2
_USAGE_ERRORS = (ValueError, weyl.WeylError, gbcharts.WordNotSupported,
                 quiver.PreconditionViolated, tropic.PreconditionViolated)
_TOOLKIT_ERRORS = (exactnum.ExactNumError, genmat.GenMatError, gbcharts.ChartError, quiver.QuiverError,
                   tropic.TropicError, toeplitz.ToeplitzError)


class UsageError(ValueError):
    pass


@dataclass
class Outcome:
    payload: Any
    code: int = 0
    raw: Optional[str] = None


# -----------------------
# Argument helpers
# -----------------------

def _n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    return args.n


def _parabolic(args) -> ParabolicData:
    return ParabolicData.parse(_n(args), args.P)


def _lam(args, required: bool = True) -> Optional[List[Fraction]]:
    if args.lam is None:
        if required:
            raise UsageError("--lambda is required")
        return None
    return parse_rational_list(args.lam)


def _word(args, n: int) -> Optional[ReducedWord]:
    return weyl.parse_word(args.word, n) if args.word else None


def _chart(args) -> Chart:
    return Chart[args.chart.upper()]


def _random_positive(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 9), rng.randint(1, 9))


def _symbolic_element(chart: Chart, word: ReducedWord) -> gbcharts.ZElement:
    K, d, groups = chart_field(word.n, len(word), prefixes=(chart.coordinate_prefix,))
    coords = groups[chart.coordinate_prefix]
    if chart is Chart.STRING:
        return gbcharts.string_chart(gbcharts.StringPoint(d, coords, word))
    return gbcharts.ideal_chart(gbcharts.IdealPoint.from_list(d, coords, word))


# -----------------------
# Subcommands
# -----------------------

def cmd_filling(args) -> Outcome:
    P = _parabolic(args)
    return Outcome(tropic.ideal_filling_for_lambda(P, _lam(args)).to_dict())


def cmd_polytope(args) -> Outcome:
    P = _parabolic(args)
    chart = _chart(args)
    lam = _lam(args, required=False)
    word = _word(args, P.n)
    poly = tropic.superpotential_polytope(P, chart, lam, word)
    payload = {"chart": chart.chart_name, "P": P.to_dict(), **poly.to_dict()}
    if lam is not None:
        payload["lambda"] = [str(v) for v in lam]
    if args.vertices:
        if lam is None:
            raise UsageError("--vertices needs --lambda")
        forms = tropic.weight_forms(P, chart, word)
        image = tropic.weight_polytope_image(poly, forms, tropic.lambda_names(P, lam))
        payload["vertices"] = [{"point": [str(pt[c]) for c in poly.coords], "weight": [str(w) for w in wt]}
                               for pt, wt in image]
        extra = tropic.distinguished_points(P, poly, forms, lam)
        payload["distinguished"] = [{"point": [str(pt[c]) for c in poly.coords], "weight": [str(w) for w in wt]}
                                    for pt, wt in extra]
    return Outcome(payload)


def cmd_chart(args) -> Outcome:
    P = _parabolic(args)
    chart = _chart(args)
    if P.is_borel():
        word = _word(args, P.n) or weyl.word_i0(P.n)
        return Outcome(_symbolic_element(chart, word).to_dict())
    if chart is Chart.STRING:
        raise UsageError("the string chart is only defined for --P B")
    dec = quiver.symbolic_decoration(P)
    payload = quiver.quiver_chart_theta(dec).to_dict()
    payload["P"] = P.to_dict()
    payload["superpotential"] = format_scalar(quiver.superpotential_F(dec))
    return Outcome(payload)


def cmd_coordchange(args) -> Outcome:
    n = _n(args)
    word = _word(args, n) or weyl.word_i0(n)
    K, d, groups = chart_field(n, len(word), prefixes=(Chart.STRING.coordinate_prefix,))
    m = gbcharts.string_to_ideal_general(word, groups[Chart.STRING.coordinate_prefix])
    roots = weyl.root_order(word)
    payload = {"word": list(word.indices),
               "roots": [str(r) for r in roots],
               "m": [format_scalar(m[r]) for r in roots]}
    return Outcome(payload)


def cmd_quiver(args) -> Outcome:
    P = _parabolic(args)
    if args.m is not None:
        m = parse_rational_list(args.m)
        d = parse_rational_list(args.d) if args.d else [Fraction(1)] * (P.l + 1)
        dec = quiver.decorate(P, d, m)
    else:
        dec = quiver.symbolic_decoration(P)
    if args.dot:
        return Outcome(None, raw=dec.to_dot())
    payload = dec.to_dict()
    payload["superpotential"] = format_scalar(quiver.superpotential_F(dec))
    payload["weight"] = [format_scalar(v) for v in quiver.gamma(dec).diagonal()]
    payload["critical"] = quiver.critical_residuals(dec).to_dict()
    return Outcome(payload)


def cmd_toeplitz(args) -> Outcome:
    P = _parabolic(args)
    lam = _lam(args)
    point = toeplitz.numeric_critical_point(P, lam, args.t0)
    exact = tropic.ideal_filling_for_lambda(P, lam).as_mu()
    payload = point.to_dict()
    payload["exact_mu"] = {str(k): str(v) for k, v in sorted(exact.items())}
    payload["matches_filling"] = all(point.rounded[k] == v for k, v in exact.items())
    if P.n <= 3:
        m, Y = toeplitz.toeplitz_from_filling(P, lam, args.trunc)
        report = toeplitz.toeplitz_filling(P, m, lam=lam)
        payload["witness"] = {"m": [str(v) for v in m], "Y": toeplitz.describe(Y), "report": report.to_dict()}
    return Outcome(payload)


def cmd_conjecture(args) -> Outcome:
    P = _parabolic(args)
    if args.seed is None:
        raise UsageError("conjecture needs --seed")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    rng = random.Random(args.seed)
    failures: List[int] = []
    for trial in range(args.trials):
        d = [_random_positive(rng) for _ in range(P.l + 1)]
        m = [_random_positive(rng) for _ in P.dots()]
        report = quiver.check_conjecture(quiver.decorate(P, d, m))
        if not report.holds:
            failures.append(trial)
            log.warning("trial %d on %s: u_R and u~_R differ", trial, P.label())
    payload = {"P": P.to_dict(), "label": P.label(), "trials": args.trials, "seed": args.seed,
               "holds": args.trials - len(failures), "failures": failures}
    return Outcome(payload)


def cmd_reproduce(args) -> Outcome:
    base = Path(args.cases) if args.cases else Path(__file__).resolve().parent.parent / ToolkitConstants.CASES_DIR
    path = base / f"{args.name}.txt"
    if not path.exists():
        raise UsageError(f"{path}: no such case file")
    parsed = case_processor.load_cases_from_txt(str(path), args.name)
    lam = parse_rational_list(args.lam) if args.lam else None
    verdicts = reproduce(parsed, lam)
    passed = sum(1 for v in verdicts if v.ok)
    lines = [v.line() for v in verdicts]
    lines.append(f"[RESULT] {args.name}: {passed}/{len(verdicts)} passed")
    payload = {"name": args.name, "passed": passed, "failed": len(verdicts) - passed,
               "results": [v.to_dict() for v in verdicts]}
    return Outcome(payload, 0 if passed == len(verdicts) else 1, raw="\n".join(lines))


COMMANDS: Dict[str, Callable[[Any], Outcome]] = {
    "filling": cmd_filling,
    "polytope": cmd_polytope,
    "chart": cmd_chart,
    "coordchange": cmd_coordchange,
    "quiver": cmd_quiver,
    "toeplitz": cmd_toeplitz,
    "conjecture": cmd_conjecture,
    "reproduce": cmd_reproduce,
}


# -----------------------
# Reproduction
# -----------------------

@dataclass
class Verdict:
    case: str
    key: str
    ok: bool
    expected: str = ""
    detail: str = ""

    def line(self) -> str:
        tag = "[PASS]" if self.ok else "[FAIL]"
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{tag} {self.case}: {self.key}{tail}"

    def to_dict(self):
        return {"case": self.case, "key": self.key, "status": "PASS" if self.ok else "FAIL",
                "expected": self.expected, "detail": self.detail}


@dataclass(frozen=True)
class _Members:
    '''an expected line names one element of a set'''
    items: FrozenSet[Any]
    parse: Callable[[str], Any]


class _Resolver:
    '''EXPECT key -> derived value; deferred entries are computed on first use'''

    def __init__(self):
        self.values: Dict[str, Any] = {}
        self.deferred: Dict[str, Callable[[], Any]] = {}
        self.patterns: List[Tuple[re.Pattern, Callable[..., Any]]] = []

    def value(self, key: str, v: Any):
        self.values[key] = v

    def later(self, key: str, fn: Callable[[], Any]):
        self.deferred[key] = fn

    def pattern(self, regex: str, fn: Callable[..., Any]):
        self.patterns.append((re.compile(regex), fn))

    def __call__(self, key: str) -> Any:
        if key in self.values:
            return self.values[key]
        if key in self.deferred:
            self.values[key] = self.deferred.pop(key)()
            return self.values[key]
        for rx, fn in self.patterns:
            mt = rx.fullmatch(key)
            if mt:
                return fn(*mt.groups())
        raise KeyError(f"nothing derives {key}")


def _ints(text: str) -> Tuple[int, ...]:
    return tuple(int(p) for p in text.split(",") if p.strip())


def _case_parabolic(case: Case) -> ParabolicData:
    return ParabolicData.parse(case.get_int("n"), case.get("p", "B"))


def _case_word(case: Case, n: int) -> ReducedWord:
    w = case.get("word")
    return weyl.parse_word(w, n) if w else weyl.word_i0(n)


def _case_lambda(case: Case, override: Optional[List[Fraction]]) -> List[Fraction]:
    if "lambda" not in case.params:
        raise ValueError(f'case "{case.kind}" (line {case.line_no}) needs lambda=')
    return list(override) if override else parse_rational_list(case.params["lambda"])


def _holds(fn: Callable[..., Any], *a) -> bool:
    '''the factorization helpers assert their identities while building'''
    fn(*a)
    return True


def _derive_string_chart(case: Case, lam) -> _Resolver:
    n = case.get_int("n")
    word = _case_word(case, n)
    K, d, groups = chart_field(n, len(word), prefixes=(Chart.STRING.coordinate_prefix,))
    p = gbcharts.StringPoint(d, groups[Chart.STRING.coordinate_prefix], word)
    el = gbcharts.string_chart(p)
    res = _Resolver()
    res.pattern(r"b\[(\d+),(\d+)\]", lambda i, j: el.b[int(i), int(j)])
    res.pattern(r"weight\[(\d+)\]", lambda k: el.t_R.diagonal()[int(k) - 1])
    res.later("W", el.superpotential)
    res.later("hw_is_d", lambda: all(same(a, b) for a, b in zip(el.highest_weight(), d)))
    res.later("weight_formula", lambda: gbcharts.weight_matrix_string(p).equals(el.t_R))
    return res


def _derive_ideal_chart(case: Case, lam) -> _Resolver:
    n = case.get_int("n")
    word = _case_word(case, n)
    K, d, groups = chart_field(n, len(word), prefixes=(Chart.IDEAL.coordinate_prefix,))
    el = gbcharts.ideal_chart(gbcharts.IdealPoint.from_list(d, groups[Chart.IDEAL.coordinate_prefix], word))
    res = _Resolver()
    res.pattern(r"b\[(\d+),(\d+)\]", lambda i, j: el.b[int(i), int(j)])
    res.pattern(r"weight\[(\d+)\]", lambda k: el.t_R.diagonal()[int(k) - 1])
    res.later("W", el.superpotential)
    res.later("hw_is_d", lambda: all(same(a, b) for a, b in zip(el.highest_weight(), d)))
    return res


def _derive_coordchange(case: Case, lam) -> _Resolver:
    n = case.get_int("n")
    word = _case_word(case, n)
    K, d, groups = chart_field(n, len(word), prefixes=(Chart.STRING.coordinate_prefix,))
    z = groups[Chart.STRING.coordinate_prefix]
    m = gbcharts.string_to_ideal_general(word, z)
    roots = weyl.root_order(word)
    res = _Resolver()
    res.pattern(r"m\[(\d+)\]", lambda k: m[roots[int(k) - 1]])
    res.pattern(r"m\[(\d+),(\d+)\]", lambda i, j: m[PositiveRoot(int(i), int(j))])
    res.later("round_trip", lambda: all(same(a, b) for a, b in zip(gbcharts.ideal_to_string_general(word, m), z)))
    res.later("same_b", lambda: gbcharts.ideal_chart(gbcharts.IdealPoint(d, m, word)).b.equals(
        gbcharts.string_chart(gbcharts.StringPoint(d, z, word)).b))
    return res


def _derive_minors(case: Case, lam) -> _Resolver:
    n = case.get_int("n")
    N = n * (n - 1) // 2
    K, d, groups = chart_field(n, N, prefixes=(Chart.STRING.coordinate_prefix,))
    z = groups[Chart.STRING.coordinate_prefix]
    factors = genmat.factors_along(FactorKind.X, gbcharts.word_i0_prime(n).indices, gbcharts.p_coordinates(z, n))
    u1 = genmat.word_product(factors, n)
    pg = genmat.path_graph(factors, n)
    uT = genmat.word_product(genmat.factors_along(FactorKind.X_NEG, weyl.word_i0(n).indices, z), n).T
    res = _Resolver()
    res.pattern(r"u1\[([\d,]+);([\d,]+)\]", lambda r, c: genmat.minor(u1, _ints(r), _ints(c)))
    res.pattern(r"paths\[([\d,]+);([\d,]+)\]", lambda r, c: genmat.minor_via_paths(pg, _ints(r), _ints(c)))
    res.pattern(r"uT\[([\d,]+);([\d,]+)\]", lambda r, c: genmat.minor(uT, _ints(r), _ints(c)))
    res.pattern(r"uT\[(\d+),(\d+)\]", lambda i, j: uT[int(i), int(j)])
    res.later("u1_is_string_chart", lambda: u1.equals(gbcharts.string_u1(z, weyl.word_i0(n))))
    return res


def _derive_polytope(case: Case, lam) -> _Resolver:
    P = _case_parabolic(case)
    chart = Chart[case.get("chart", "ideal").upper()]
    lam = _case_lambda(case, lam) if "lambda" in case.params else None
    poly = tropic.superpotential_polytope(P, chart, lam)
    res = _Resolver()
    res.value("form", _Members(poly.inequality_set(), case_processor.parse_affine))
    res.value("count", len(poly.inequalities))
    if chart is Chart.STRING:
        res.later("matches_ideal", lambda: tropic.string_polytope_in_ideal_coords(poly, P.n).inequality_set() ==
                  tropic.superpotential_polytope(P, Chart.IDEAL, lam).inequality_set())
    return res


def _vertex_parser(values: Dict[str, Fraction]) -> Callable[[str], Any]:
    def parse(text: str):
        left, right = case_processor.parse_vertex_line(text)
        return tuple(f.evaluate(values) for f in left), tuple(f.evaluate(values) for f in right)
    return parse


def _derive_vertices(case: Case, lam) -> _Resolver:
    P = _case_parabolic(case)
    chart = Chart[case.get("chart", "ideal").upper()]
    lam = _case_lambda(case, lam)
    poly = tropic.superpotential_polytope(P, chart, lam)
    values = tropic.lambda_names(P, lam)
    forms = tropic.weight_forms(P, chart)
    image = tropic.weight_polytope_image(poly, forms, values)
    points = frozenset((tuple(v[c] for c in poly.coords), tuple(w)) for v, w in image)
    extra = frozenset((tuple(v[c] for c in poly.coords), tuple(w))
                      for v, w in tropic.distinguished_points(P, poly, forms, lam))
    res = _Resolver()
    res.value("vertex", _Members(points, _vertex_parser(values)))
    res.value("vertex_count", len(points))
    res.value("point", _Members(extra, _vertex_parser(values)))
    res.value("point_count", len(extra))
    return res


def _derive_critical_point(case: Case, lam) -> _Resolver:
    P = _case_parabolic(case)
    lam = _case_lambda(case, lam)
    cp = tropic.tropical_critical_point(P, lam)
    res = _Resolver()
    res.value("mu", tuple(cp.mu[k] for k in sorted(cp.mu)))
    res.value("ell", cp.ell)
    res.later("interior", lambda: tropic.superpotential_polytope(P, Chart.IDEAL, lam).interior(cp.mu_names()))
    res.later("weight", lambda: tuple(tropic.tropical_weight(cp.mu_names(), P, Chart.IDEAL, lam)))
    return res


def _derive_filling(case: Case, lam) -> _Resolver:
    P = _case_parabolic(case)
    lam = _case_lambda(case, lam)
    filling = tropic.ideal_filling_for_lambda(P, lam)
    point = tropic.filling_to_quiver_point(filling)
    topo = quiver.build_topology(P)
    res = _Resolver()
    res.pattern(r"n\[(\d+),(\d+)\]", lambda i, j: filling[(int(i), int(j))])
    res.pattern(r"star\[(\d+)\]", lambda j: point.delta[topo.star_of_block(int(j))])
    res.value("ell", filling.ell)
    res.later("round_trip", lambda: tropic.quiver_point_to_filling(P, point.rho, lam).entries == filling.entries)
    return res


def _derive_build_y(case: Case, lam) -> _Resolver:
    P = _case_parabolic(case)
    idx = [P.dot_index(k, a) for (k, a) in P.dots()]
    mp = Chart.IDEAL.coordinate_prefix
    K, gens = symbolic_field([f"{mp}{i}" for i in idx])
    m = [gens[f"{mp}{i}"] for i in idx]
    Y = toeplitz.build_Y(P, m)
    res = _Resolver()
    res.pattern(r"Y\[(\d+),(\d+)\]", lambda i, j: Y[int(i), int(j)])
    res.later("toeplitz", lambda: toeplitz.is_toeplitz(Y).is_toeplitz)
    res.later("violation_diagonal", lambda: toeplitz.is_toeplitz(Y).violation[0])
    if P.is_borel():
        res.later("recovered", lambda: all(same(toeplitz.recover_ideal_coords(Y)[i], v) for i, v in zip(idx, m)))
    return res


def _derive_toeplitz_series(case: Case, lam) -> _Resolver:
    '''GL_3/B with m_2 = m_1 m_3 / (m_1 + m_3) over Puiseux series'''
    P = ParabolicData.borel(3)
    trunc = case.get_int("trunc", ToolkitConstants.DEFAULT_TRUNCATION)
    m1 = PuiseuxSeries.monomial(1, to_fraction(case.get("mu1", "1")))
    m3 = PuiseuxSeries.monomial(1, to_fraction(case.get("mu3", "1")))
    m2 = (m1 * m3) * (m1 + m3).inverse(trunc)
    report = toeplitz.toeplitz_filling(P, [m1, m2, m3])
    res = _Resolver()
    res.value("toeplitz", report.is_toeplitz)
    res.value("valuations", tuple(val(x).value for x in (m1, m2, m3)))
    res.value("max_relation", bool(report.filling and report.filling.max_relations_hold()))
    res.later("generic_toeplitz", lambda: toeplitz.is_toeplitz(toeplitz.build_Y(P, [m1, m1 + m3, m3])).is_toeplitz)
    return res


def _derive_quiver(case: Case, lam) -> _Resolver:
    P = _case_parabolic(case)
    dec = quiver.symbolic_decoration(P)
    cache: Dict[str, Any] = {}

    def theta():
        if "theta" not in cache:
            cache["theta"] = quiver.quiver_chart_theta(dec)
        return cache["theta"]

    def weight():
        if "gamma" not in cache:
            cache["gamma"] = quiver.gamma(dec).diagonal()
        return cache["gamma"]

    def matches_ideal_chart() -> bool:
        m = {P.root_of_dot(k, a): dec.m[P.dot_index(k, a)] for (k, a) in P.dots()}
        el = gbcharts.ideal_chart(gbcharts.IdealPoint(dec.d, m, weyl.wp_w0_word(P)))
        return el.b.equals(theta().b)

    def diagonal_holds(i: str) -> bool:
        lhs, rhs = quiver.diagonal_identity(dec, int(i))
        return same(lhs, rhs)

    res = _Resolver()
    res.pattern(r"t\[(\d+)\]", lambda k: weight()[int(k) - 1])
    res.pattern(r"x\[(\d+),(\d+)\]", lambda r, c: dec.cell_value((int(r), int(c))))
    res.pattern(r"arrow\[(\d+),(\d+);(\d+),(\d+)\]",
                lambda a, b, c, e: dec.r[((int(a), int(b)), (int(c), int(e)))])
    res.pattern(r"diagonal_identity\[(\d+)\]", diagonal_holds)
    res.later("F", lambda: quiver.superpotential_F(dec))
    res.later("gl_factors", lambda: _holds(quiver.matrices_gl_ul, dec))
    res.later("gr_factors", lambda: _holds(quiver.matrices_gr_ur, dec))
    res.later("lower_is_y_product", lambda: theta().lower.equals(quiver.dots_lower(dec)))
    res.later("diagonal_is_gamma", lambda: theta().diagonal.equals(quiver.gamma(dec)))
    res.later("conjecture", lambda: quiver.check_conjecture(dec).holds)
    if P.is_borel():
        res.later("matches_ideal_chart", matches_ideal_chart)
    return res


_DERIVERS: Dict[str, Callable[[Case, Optional[List[Fraction]]], _Resolver]] = {
    "string_chart": _derive_string_chart,
    "ideal_chart": _derive_ideal_chart,
    "coordchange": _derive_coordchange,
    "minors": _derive_minors,
    "polytope": _derive_polytope,
    "vertices": _derive_vertices,
    "critical_point": _derive_critical_point,
    "filling": _derive_filling,
    "build_y": _derive_build_y,
    "toeplitz_series": _derive_toeplitz_series,
    "quiver": _derive_quiver,
}


def _agree(actual: Any, text: str) -> bool:
    if isinstance(actual, _Members):
        return actual.parse(text) in actual.items
    if isinstance(actual, bool):
        return actual == case_processor.parse_bool(text)
    if isinstance(actual, FracElement):
        return same(actual, parse_expression(actual.field, text))
    if isinstance(actual, (int, Fraction)):
        return to_fraction(actual) == to_fraction(text)
    if isinstance(actual, tuple):
        return tuple(to_fraction(x) for x in actual) == case_processor.parse_rational_tuple(text)
    return str(actual) == text.strip()


def _show(actual: Any) -> str:
    if isinstance(actual, _Members):
        return f"{len(actual.items)} candidates"
    if isinstance(actual, tuple):
        return "(" + ", ".join(format_scalar(x) for x in actual) + ")"
    return format_scalar(actual)


def reproduce(parsed: ParsedCases, lam: Optional[List[Fraction]] = None) -> List[Verdict]:
    '''re-derive every EXPECT entry; a case that cannot be derived fails all of its entries'''
    out: List[Verdict] = []
    for case in parsed.cases:
        deriver = _DERIVERS.get(case.kind)
        if deriver is None:
            raise ValueError(f'{parsed.name}: line {case.line_no}: unknown case kind "{case.kind}"')
        label = case.label()
        try:
            resolve = deriver(case, lam)
        except Exception as e:
            log.warning("%s: %s", label, e)
            out.extend(Verdict(label, x.key, False, x.text, f"{type(e).__name__}: {e}") for x in case.expects)
            continue
        for x in case.expects:
            try:
                actual = resolve(x.key)
                ok = _agree(actual, x.text)
                detail = "" if ok else f"got {_show(actual)}"
            except Exception as e:
                ok, detail = False, f"{type(e).__name__}: {e}"
            log.info("%s %s: %s", "PASS" if ok else "FAIL", label, x.key)
            out.append(Verdict(label, x.key, ok, x.text, detail))
    return out


# -----------------------
# Output
# -----------------------

def _text_lines(payload: Any, prefix: str = "") -> List[str]:
    if isinstance(payload, dict):
        out: List[str] = []
        for k in sorted(payload):
            out.extend(_text_lines(payload[k], f"{prefix}{k}."))
        return out
    key = prefix[:-1] if prefix.endswith(".") else prefix
    if isinstance(payload, list) and any(isinstance(v, (dict, list)) for v in payload):
        out = []
        for pos, v in enumerate(payload):
            out.extend(_text_lines(v, f"{key}[{pos}]."))
        return out
    if isinstance(payload, list):
        return [f"{key}: " + ", ".join(str(v) for v in payload)]
    return [f"{key}: {payload}"]


def _emit(outcome: Outcome, args):
    fmt = args.format or ("text" if args.command == "reproduce" else "json")
    if outcome.payload is None or (fmt == "text" and outcome.raw is not None):
        sys.stdout.write(outcome.raw + "\n")
    elif fmt == "json":
        json.dump(outcome.payload, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        for line in _text_lines(outcome.payload):
            print(line)


class _StderrHandler(logging.StreamHandler):
    '''follows sys.stderr when it is swapped out (test capture)'''

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def _configure_logging(verbose: bool):
    root = logging.getLogger()
    if not any(isinstance(h, _StderrHandler) for h in root.handlers):
        h = _StderrHandler()
        h.setFormatter(logging.Formatter("[%(levelname)s %(name)s] %(message)s"))
        root.addHandler(h)
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


# -----------------------
# Entry point
# -----------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="matrix size n of GL_n")
    common.add_argument("--P", default="B", help='"B" or the comma separated I^P complement n_1,...,n_l')
    common.add_argument("--lambda", dest="lam", default=None, help="highest weight, comma separated rationals")
    common.add_argument("--word", default=None, help="reduced word for w0, comma separated (default i_0)")
    common.add_argument("--chart", choices=["string", "ideal"], default="ideal", help="toric chart")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON on stdout")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="plain text on stdout")
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    ap = argparse.ArgumentParser(prog="flagmirror", description="Landau-Ginzburg models of GL_n/B and GL_n/P")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("filling", parents=[common], help="ideal filling for a highest weight")

    sp = sub.add_parser("polytope", parents=[common], help="superpotential polytope (H-representation)")
    sp.add_argument("--vertices", action="store_true", help="enumerate vertices, distinguished edge points and their weights (needs --lambda)")

    sub.add_parser("chart", parents=[common], help="symbolic b, weight and superpotential of a chart")
    sub.add_parser("coordchange", parents=[common], help="ideal coordinates in terms of string coordinates")

    sp = sub.add_parser("quiver", parents=[common], help="quiver decoration as JSON or DOT")
    sp.add_argument("--dot", action="store_true", help="write Graphviz DOT instead of JSON")
    sp.add_argument("--d", default=None, help="star values d_1..d_{l+1} (default all 1 when --m is given)")
    sp.add_argument("--m", default=None, help="dot values in (k, a) order; symbolic when omitted")

    sp = sub.add_parser("toeplitz", parents=[common], help="numeric critical point and Toeplitz check; exact Puiseux witness when n<=3")
    sp.add_argument("--t0", type=float, default=None, help="small positive real standing in for t")
    sp.add_argument("--trunc", type=int, default=None, help="Puiseux truncation for the exact witness (built for n<=3 only)")

    sp = sub.add_parser("conjecture", parents=[common], help="compare u_R with u~_R on random decorations")
    sp.add_argument("--trials", type=int, default=100, help="number of random instances")
    sp.add_argument("--seed", type=int, default=None, help="random seed (required)")

    sp = sub.add_parser("reproduce", parents=[common], help="re-derive a set of worked examples")
    sp.add_argument("name", help="case set: " + ", ".join(ToolkitConstants.CASE_SETS))
    sp.add_argument("--cases", default=None, help="directory holding <name>.txt case files")
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    _configure_logging(args.verbose)
    try:
        outcome = COMMANDS[args.command](args)
    except _USAGE_ERRORS as e:
        log.error("%s", e)
        return 2
    except _TOOLKIT_ERRORS as e:
        log.error("%s: %s", type(e).__name__, e)
        return 1
    _emit(outcome, args)
    return outcome.code


def main():
    '''parse and run'''
    sys.exit(run())


if __name__ == "__main__":
    main()
