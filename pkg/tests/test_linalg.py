from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from wres import linalg

matrices = st.integers(1, 4).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


@given(matrices)
def test_nullspace_against_sympy(rows):
    ncols = len(rows[0])
    mat = [[Fraction(a) for a in r] for r in rows]
    ours = linalg.nullspace(mat, ncols)
    M = sympy.Matrix(rows)
    assert len(ours) == len(M.nullspace())
    for v in ours:
        assert all(x == 0 for x in M * sympy.Matrix([sympy.Rational(a.numerator, a.denominator) for a in v]))
    assert linalg.rank(mat, ncols) == M.rank()


@given(matrices)
def test_rref_matches_sympy(rows):
    ours, pivots = linalg.rref([[Fraction(a) for a in r] for r in rows])
    R, piv = sympy.Matrix(rows).rref()
    assert tuple(pivots) == piv
    for i, row in enumerate(ours):
        assert [sympy.Rational(a.numerator, a.denominator) for a in row] == list(R.row(i))
