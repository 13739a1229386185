import sympy
import pytest
from hypothesis import settings

from csmclasses.poly import QQ, MultiPoly, VarSpec

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def to_sympy(f: MultiPoly):
    """Independent rendering of a MultiPoly as a sympy expression."""
    syms = sympy.symbols(f.vars.names())
    expr = sympy.Integer(0)
    for e, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if hasattr(c, "denominator") else sympy.Integer(c)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr), syms


@pytest.fixture
def v3():
    return VarSpec(3)


@pytest.fixture
def qq():
    return QQ
