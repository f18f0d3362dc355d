from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import VARS2, VARS3, polys, to_sympy
from oracle import contact_dimension
from wres.contact import (annihilator_block, full_contact_module, negative_derivations,
                          realizable_weights, straighten, straighten_all)
from wres.errors import ContractError
from wres.exactalg import Derivation, Poly, identity_images
from wres.filtration import WFiltration
from wres.parsing import parse_poly

XYZT = ("x", "y", "z", "t")


@pytest.mark.parametrize("texts,names,weights,b,expected", [
    (["x^2"], VARS2, [1, 1], 1, 1),                       # d/dy
    (["x^2+y^3"], VARS2, [Fraction(3, 2), 1], 1, 0),        # cusp at H = 3/2
    (["x^2+y^2"], XYZT, [1, 1, 1, 1], 1, 2),               # degree-2 part of x^2+y^2+(zt)^2
    (["x^2+y^2+z^2*t^2"], XYZT, [Fraction(3, 2)] * 2 + [1, 1], 1, 2),
    (["x^2+y^2+z^2*t^2"], XYZT, [2, 2, 1, 1], 1, 0),
    (["x^2+y^2*z"], VARS3, [Fraction(3, 2), 1, 1], 1, 0),
    (["x*y"], VARS2, [1, 1], 1, 0),
])
def test_dimension_against_oracle(texts, names, weights, b, expected):
    V = [parse_poly(t, names) for t in texts]
    F = [Fraction(w) for w in weights]
    # the engine wants weight-homogeneous input: keep the lowest piece
    V = [f.weighted_part(F, f.weighted_order(F)) for f in V]
    ours = negative_derivations(V, F, b)
    oracle = contact_dimension([to_sympy(f) for f in V], names, F, b)
    assert ours.dim == oracle == expected
    for D in ours.basis:
        assert all(D(f).is_zero() for f in V)
        assert D.weight(F) in (None, -Fraction(b))


homogeneous = st.lists(st.tuples(st.integers(0, 3), st.integers(-3, 3).filter(bool)),
                       min_size=1, max_size=3)


@given(homogeneous, homogeneous)
def test_random_homogeneous_against_oracle(a, b):
    # degree-3 forms in x, y, z built from random coefficients
    mons = [(3, 0, 0), (2, 1, 0), (1, 1, 1), (0, 2, 1), (0, 0, 3), (1, 0, 2)]
    f = Poly(VARS3, {mons[i]: c for i, c in a})
    g = Poly(VARS3, {mons[(i + 2) % 6]: c for i, c in b})
    V = [h for h in (f, g) if not h.is_zero()]
    ours = negative_derivations(V, [1, 1, 1], 1)
    assert ours.dim == contact_dimension([to_sympy(h) for h in V], VARS3, [1, 1, 1], 1)


def test_inhomogeneous_input_rejected():
    with pytest.raises(ContractError):
        negative_derivations([parse_poly("x+y^2", VARS2)], [1, 1], 1)


def test_vanishing_check_records_other_weights():
    F = [Fraction(2), Fraction(2), Fraction(1), Fraction(1)]
    V = [parse_poly("x^2+y^2+z^2*t^2", XYZT)]
    L = full_contact_module(V, F)
    assert set(L.other_weights) == set(b for b in realizable_weights(F) if b != 1)
    assert L.violations() == {}


def test_annihilator_block():
    L = negative_derivations([parse_poly("x^2", VARS3)], [1, 1, 1], 1)
    forms = annihilator_block(L, WFiltration.madic(VARS3))
    assert forms == [Poly.var(VARS3, 0)]


def test_straighten_linear_and_nonlinear():
    x, y = identity_images(VARS2)
    # D = 2 d/dx + 3 d/dy : pivot is x after a linear step
    D = Derivation(VARS2, [Poly.const(VARS2, 2), Poly.const(VARS2, 3)])
    sigma, p = straighten(D, [1, 1])
    assert p == 0 and D.transform(sigma) == Derivation.coordinate(VARS2, 0)
    # D = d/dy + 2y d/dx on weights (2, 1): new x' = x - y^2
    D = Derivation(VARS2, [y.scale(2), Poly.const(VARS2, 1)])
    sigma, p = straighten(D, [2, 1])
    assert p == 1
    assert sigma.images[0] == x - y * y
    assert D.transform(sigma) == Derivation.coordinate(VARS2, 1)
    with pytest.raises(ContractError):
        straighten(Derivation(VARS2, [y, Poly.zero(VARS2)]), [1, 1])


def test_straighten_all_on_graph():
    # V = {x - y^2} with weights (2, 1): L is spanned by d/dy + 2y d/dx
    V = [parse_poly("x - y^2", VARS2)]
    L = full_contact_module(V, [2, 1])
    assert L.dim == 1
    sigma, Y, Z = straighten_all(L, [2, 1])
    assert Y == [1] and Z == []
    assert V[0].substitute(sigma.inverse) == Poly.var(VARS2, 0)


def test_straighten_all_two_fields():
    V = [parse_poly("(x+y+z)^2", VARS3)]
    L = full_contact_module(V, [1, 1, 1])
    sigma, Y, Z = straighten_all(L, [1, 1, 1])
    assert len(Y) == 2 and len(Z) == 1
    g = V[0].substitute(sigma.inverse)
    assert g.variables_used() == set(Z)
