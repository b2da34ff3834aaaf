import os
from fractions import Fraction as F

import pytest

import case_processor
from case_processor import parse_affine, parse_bool, parse_trop, parse_vertex_line
from exactnum import AffineForm
from toolkit_constants import ToolkitConstants


def _write(tmp_path, text):
    path = tmp_path / "cases.txt"
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_load_cases(tmp_path):
    path = _write(tmp_path, "// header comment\n\nCASE: kind=filling n=3 lambda=2,1,-1\n"
                            "EXPECT n[1,2]: 1/2\nEXPECT ell: 2/3\n\nCASE: kind=polytope n=3 chart=string\n"
                            "EXPECT count: 6\n")
    parsed = case_processor.load_cases_from_txt(path, name="demo")
    assert parsed.name == "demo"
    assert [c.kind for c in parsed.cases] == ["filling", "polytope"]
    first = parsed.cases[0]
    assert first.get("lambda") == "2,1,-1"
    assert first.get_int("n") == 3
    assert first.line_no == 3
    assert [e.key for e in first.expects] == ["n[1,2]", "ell"]
    assert first.expected("ell")[0].text == "2/3"
    assert first.label() == "filling n=3 lambda=2,1,-1"


def test_missing_parameter(tmp_path):
    case = case_processor.load_cases_from_txt(_write(tmp_path, "CASE: kind=filling\n")).cases[0]
    assert case.get_int("n", 4) == 4
    with pytest.raises(ValueError):
        case.get_int("n")


@pytest.mark.parametrize("text", [
    "EXPECT ell: 1\n",
    "CASE: n=3\n",
    "CASE: kind=filling n\n",
    "CASE: kind=filling\nsomething else\n",
    "CASE: kind=filling\nEXPECT : 1\n",
    "// only a comment\n",
])
def test_malformed_files(tmp_path, text):
    with pytest.raises(ValueError):
        case_processor.load_cases_from_txt(_write(tmp_path, text))


def test_parse_affine():
    form = parse_affine("lambda1 - lambda2 + zeta2 - 2*zeta3 + 1/2")
    assert form == AffineForm.build({"lambda1": 1, "lambda2": -1, "zeta2": 1, "zeta3": -2}, F(1, 2))
    assert parse_affine("0") == AffineForm.constant(0)
    with pytest.raises(ValueError):
        parse_affine("zeta1*zeta2")


def test_parse_trop():
    trop = parse_trop("min{zeta1, lambda1 - zeta1}")
    assert set(trop.sorted_forms()) == {parse_affine("zeta1"), parse_affine("lambda1 - zeta1")}


def test_parse_vertex_line():
    point, weight = parse_vertex_line("(0, lambda1 - lambda2, 0) -> (lambda2, lambda3, lambda1)")
    assert point[1] == parse_affine("lambda1 - lambda2")
    assert weight == tuple(parse_affine(f"lambda{k}") for k in (2, 3, 1))
    with pytest.raises(ValueError):
        parse_vertex_line("(0, 0, 0)")


def test_parse_scalars():
    assert case_processor.parse_rational_tuple("(1/2, 5/6, 5/6)") == (F(1, 2), F(5, 6), F(5, 6))
    assert parse_bool("true") and parse_bool("Yes")
    assert not parse_bool("false")
    with pytest.raises(ValueError):
        parse_bool("maybe")


def test_shipped_case_files_load(cases_dir):
    for name in ToolkitConstants.CASE_SETS:
        parsed = case_processor.load_cases_from_txt(os.path.join(cases_dir, f"{name}.txt"), name=name)
        assert parsed.cases
        assert all(c.expects for c in parsed.cases)
