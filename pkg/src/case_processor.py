# case_processor.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from exactnum import AffineForm, TropExpr, to_fraction


# ----------------------------
# Reproduction case files
# ----------------------------

@dataclass
class Expect:
    key: str
    text: str
    line_no: int


@dataclass
class Case:
    kind: str
    params: Dict[str, str]
    expects: List[Expect] = field(default_factory=list)
    line_no: int = 0

    def get(self, key: str, default: Optional[str] = None) -> Optional[str]:
        return self.params.get(key, default)

    def get_int(self, key: str, default: Optional[int] = None) -> int:
        v = self.params.get(key)
        if v is None:
            if default is None:
                raise ValueError(f'case "{self.kind}" (line {self.line_no}) needs {key}=')
            return default
        return int(v)

    def expected(self, key: str) -> List[Expect]:
        return [e for e in self.expects if e.key == key]

    def label(self) -> str:
        extra = " ".join(f"{k}={v}" for k, v in self.params.items() if k != "kind")
        return f"{self.kind} {extra}".strip()


@dataclass
class ParsedCases:
    name: str
    cases: List[Case]


def read_nonempty_noncomment_lines(raw_lines: List[str]) -> List[Tuple[int, str]]:
    '''blank lines and // comments are dropped; line numbers are kept for messages'''

    out: List[Tuple[int, str]] = []

    for no, ln in enumerate(raw_lines, start=1):
        s = ln.rstrip('\n')

        if not s.strip():
            continue

        if s.lstrip().startswith('//'):
            continue

        out.append((no, s.rstrip()))

    return out


def parse_header_line(line: str) -> Dict[str, str]:
    '''
    Accepts in format: CASE: kind=filling n=3 lambda=2,1,-1
    '''
    rest = line.split(":", 1)[1].strip() if ":" in line else ""
    kv: Dict[str, str] = {}
    for tok in rest.split():
        if '=' not in tok:
            raise ValueError(f'Bad case token "{tok}". Expected key=value.')
        k, v = tok.split('=', 1)
        kv[k.strip().lower()] = v.strip()
    return kv


def parse_expect_line(line: str, line_no: int) -> Expect:
    '''
    EXPECT b[2,1]: d3*(z1 + z2/z3)
    '''
    body = line.split(":", 1)
    if len(body) != 2 or not body[0].upper().startswith("EXPECT"):
        raise ValueError(f'line {line_no}: expected "EXPECT key: value", got: {line}')
    key = body[0][len("EXPECT"):].strip()
    if not key:
        raise ValueError(f'line {line_no}: EXPECT without a key')
    return Expect(key=key, text=body[1].strip(), line_no=line_no)


def load_cases_from_txt(path: str, name: Optional[str] = None) -> ParsedCases:
    with open(path, 'r', encoding='utf-8') as f:
        raw_lines = f.readlines()

    lines = read_nonempty_noncomment_lines(raw_lines)
    cases: List[Case] = []
    for no, ln in lines:
        s = ln.strip()
        up = s.upper()
        if up.startswith("CASE:"):
            kv = parse_header_line(s)
            if "kind" not in kv:
                raise ValueError(f'{path}: line {no}: CASE needs kind=')
            cases.append(Case(kind=kv["kind"], params=kv, line_no=no))
            continue
        if up.startswith("EXPECT"):
            if not cases:
                raise ValueError(f'{path}: line {no}: EXPECT before any CASE')
            cases[-1].expects.append(parse_expect_line(s, no))
            continue
        raise ValueError(f'{path}: line {no}: unrecognised line: {s}')

    if not cases:
        raise ValueError(f'{path}: no cases found')
    return ParsedCases(name=name or path, cases=cases)


# ----------------------------
# Value parsers
# ----------------------------

def parse_rational_tuple(text: str) -> Tuple[Fraction, ...]:
    s = text.strip().strip("()")
    return tuple(to_fraction(p.strip()) for p in s.split(",") if p.strip())


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1"):
        return True
    if t in ("false", "no", "0"):
        return False
    raise ValueError(f'not a boolean: "{text}"')


def parse_affine(text: str) -> AffineForm:
    '''a linear expression such as "lambda1 - lambda2 + zeta2 - 2*zeta3"'''
    from sympy import Rational, sympify
    expr = sympify(text.replace("^", "**")).expand()
    coeffs: Dict[str, Fraction] = {}
    const = Fraction(0)
    for term, c in expr.as_coefficients_dict().items():
        c = Rational(c)
        val = Fraction(int(c.p), int(c.q))
        if term.is_number:
            const += val * to_fraction(str(term))
        elif term.is_Symbol:
            coeffs[str(term)] = coeffs.get(str(term), Fraction(0)) + val
        else:
            raise ValueError(f'"{text}" is not affine')
    return AffineForm.build(coeffs, const)


def parse_trop(text: str) -> TropExpr:
    '''min{form, form, ...}'''
    s = text.strip()
    if s.startswith("min{") and s.endswith("}"):
        s = s[4:-1]
    return TropExpr.of(parse_affine(p) for p in s.split(",") if p.strip())


def parse_affine_tuple(text: str) -> Tuple[AffineForm, ...]:
    s = text.strip().strip("()")
    return tuple(parse_affine(p) for p in s.split(",") if p.strip())


def parse_vertex_line(text: str) -> Tuple[Tuple[AffineForm, ...], Tuple[AffineForm, ...]]:
    '''(a, b, c) -> (x, y, z)'''
    if "->" not in text:
        raise ValueError(f'vertex line needs "->": {text}')
    left, right = text.split("->", 1)
    return parse_affine_tuple(left), parse_affine_tuple(right)
