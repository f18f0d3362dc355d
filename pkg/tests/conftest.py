import sys
from fractions import Fraction
from pathlib import Path

import sympy
from hypothesis import settings, strategies as st

from wres.exactalg import Poly

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

VARS2 = ("x", "y")
VARS3 = ("x", "y", "z")


def to_sympy(f: Poly):
    syms = sympy.symbols(list(f.vars))
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    return sympy.expand(sympy.Add(*[
        sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
        for e, c in f.terms.items()]))


def from_sympy(expr, vars) -> Poly:
    syms = sympy.symbols(list(vars))
    if not isinstance(syms, (list, tuple)):
        syms = [syms]
    p = sympy.Poly(sympy.expand(expr), *syms)
    return Poly(vars, {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in p.terms()})


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polys(vars=VARS2, max_deg=3, max_terms=4, constant=True):
    n = len(vars)
    exps = st.tuples(*[st.integers(0, max_deg)] * n)
    if not constant:
        exps = exps.filter(any)
    return st.dictionaries(exps, rationals.filter(bool), max_size=max_terms).map(
        lambda d: Poly(vars, d))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
