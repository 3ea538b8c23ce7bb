from fractions import Fraction

import pytest
from hypothesis import strategies as st

from ttw.polyring import ParamPoly
from ttw.weyl import DiffOp

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-9, max_value=9),
    st.integers(min_value=1, max_value=5),
)


@st.composite
def param_polys(draw, max_terms=3, max_exp=2, vars_="tuabw"):
    """Sparse polynomials over a chosen subset of t, u, a, b, w."""
    names = "tuabw"
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.integers(0, max_exp)) if v in vars_ else 0 for v in names)
        terms[exp] = draw(small_rationals)
    return ParamPoly(terms)


@st.composite
def diffops(draw, max_terms=3, max_order=2, max_exp=2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        key = (draw(st.integers(0, max_order)), draw(st.integers(0, max_order)))
        terms[key] = draw(param_polys(max_terms=2, max_exp=max_exp))
    return DiffOp(terms)


@pytest.fixture
def t():
    return DiffOp.multiplication(ParamPoly.var("t"))


@pytest.fixture
def u():
    return DiffOp.multiplication(ParamPoly.var("u"))


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
