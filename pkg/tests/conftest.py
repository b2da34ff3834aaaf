# conftest.py
from pathlib import Path

import pytest

from exactnum import chart_field, symbolic_field
from toolkit_constants import ToolkitConstants


@pytest.fixture
def cases_dir() -> Path:
    return Path(__file__).resolve().parent.parent / ToolkitConstants.CASES_DIR


@pytest.fixture
def z3():
    '''QQ(d1..d3, z1..z3)'''
    K, d, groups = chart_field(3, 3, prefixes=("z",))
    return K, d, groups["z"]


@pytest.fixture
def m3():
    '''QQ(d1..d3, m1..m3)'''
    K, d, groups = chart_field(3, 3, prefixes=("m",))
    return K, d, groups["m"]
