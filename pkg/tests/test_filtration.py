import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import VARS2
from wres.errors import ContractError, StructuralError
from wres.exactalg import Poly, monomial_weight
from wres.filtration import (Block, WFiltration, graded_piece_basis, ideal_multiplicity,
                             initial_form, monomials_below, monomials_of_weight,
                             theta_enumerate, theta_successor)
from wres.parsing import parse_poly


def brute_theta(gw, d, upto):
    """All H in (1, upto]: scan exponent boxes and numerators directly."""
    top = gw[0] * d
    box = [range(0, math.floor(top / g) + 1) for g in gw]
    gaps = set()
    for alpha in itertools.product(*box):
        w = sum(g * a for g, a in zip(gw, alpha))
        if w < top:
            gaps.add(top - w)
    out = set()
    for gap in gaps:
        for beta in range(1, math.floor(upto * gap) + 1):
            H = Fraction(beta) / gap
            if 1 < H <= upto:
                out.add(H)
    return sorted(out)


weight_chains = st.lists(st.fractions(min_value=1, max_value=4, max_denominator=3),
                         min_size=1, max_size=3, unique=True).map(
    lambda ws: sorted(ws, reverse=True)).filter(lambda ws: ws[-1] >= 1)


@given(weight_chains, st.integers(1, 3))
def test_theta_matches_brute_force(gw, d):
    ours = theta_enumerate(gw, d, 4)
    assert [s.H for s in ours] == brute_theta(gw, d, Fraction(4))
    for sol in ours:
        assert sol.check(gw, d)


@given(weight_chains, st.integers(1, 3), st.fractions(min_value=1, max_value=3, max_denominator=5))
def test_successor_has_no_predecessor_gap(gw, d, h):
    nxt = theta_successor(gw, d, h)
    assert nxt.H > h and nxt.check(gw, d)
    between = [H for H in brute_theta(gw, d, nxt.H) if h < H < nxt.H]
    assert between == []


def test_theta_cusp_values():
    assert [s.H for s in theta_enumerate([1], 2, 3)] == [Fraction(3, 2), 2, Fraction(5, 2), 3]
    first = theta_successor([1], 2, 1)
    assert (first.H, first.witness_alpha, first.witness_beta) == (Fraction(3, 2), (0,), 3)


def test_witness_is_lexicographically_smallest():
    # H = 2 arises from alpha=(0), beta=4 and alpha=(1), beta=2
    sol = [s for s in theta_enumerate([1], 2, 2) if s.H == 2][0]
    assert (sol.witness_alpha, sol.witness_beta) == ((0,), 4)


@given(st.lists(st.fractions(min_value=1, max_value=3, max_denominator=2), min_size=2, max_size=3),
       st.fractions(min_value=0, max_value=5, max_denominator=2))
def test_monomials_of_weight_brute_force(ws, q):
    box = [range(0, math.floor(q / w) + 1) for w in ws]
    want = sorted(e for e in itertools.product(*box) if monomial_weight(e, ws) == q)
    assert sorted(monomials_of_weight(ws, q)) == want
    below = sorted(e for e in itertools.product(*box) if monomial_weight(e, ws) < q)
    assert sorted(monomials_below(ws, q)) == below


def test_filtration_validation():
    with pytest.raises(StructuralError):
        WFiltration(VARS2, (Block((0,), 2),), ())
    with pytest.raises(ContractError):
        WFiltration(VARS2, (Block((0,), 1), Block((1,), 2)), ())
    with pytest.raises(ContractError):
        Block((0,), 0)
    F = WFiltration.from_weights(("x", "y", "z"), [Fraction(3, 2), 1, 1])
    assert F.to_json() == {"blocks": [{"vars": ["x"], "weight": "3/2"}], "residual": ["y", "z"]}
    assert F.scaled(2).weights() == [3, 1, 1]


def test_initial_forms_and_orders():
    f = parse_poly("x^2+y^3+x*y^2", VARS2)
    F = WFiltration(VARS2, (Block((0,), Fraction(3, 2)), Block((1,), 1)))
    assert f.weighted_order(F.weights()) == 3
    assert initial_form(f, F, 3) == parse_poly("x^2+y^3", VARS2)
    with pytest.raises(ContractError):
        initial_form(f, F, 4)
    assert ideal_multiplicity([parse_poly("x^3", VARS2), parse_poly("y^2+x", VARS2)]) == 1
    assert ideal_multiplicity([Poly.zero(VARS2)]) is None
    with pytest.raises(StructuralError):
        ideal_multiplicity([])


def test_graded_piece_basis_is_canonical():
    basis = graded_piece_basis([Fraction(3, 2), 1], 3)
    assert sorted(basis) == [(0, 3), (2, 0)]
    assert basis == graded_piece_basis([Fraction(3, 2), 1], 3)
