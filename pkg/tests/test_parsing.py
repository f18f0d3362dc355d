from fractions import Fraction

import pytest
from hypothesis import given

from conftest import VARS2, polys
from wres.errors import ParseError
from wres.parsing import parse_point, parse_poly, parse_rational, parse_vars


def test_basic_expressions():
    f = parse_poly("x^2+y^3", VARS2)
    assert f.coeff((2, 0)) == 1 and f.coeff((0, 3)) == 1
    assert parse_poly("x^2+y^2+(z*t)^2", ("x", "y", "z", "t")) == \
        parse_poly("x^2 + y^2 + z^2*t^2", ("x", "y", "z", "t"))
    assert parse_poly("-3/2*x - -y", VARS2).coeff((1, 0)) == Fraction(-3, 2)
    assert parse_poly("(x+1)^0", VARS2) == parse_poly("1", VARS2)


def test_primed_identifiers():
    vs = ("u", "y'")
    assert str(parse_poly("1 + y'^3", vs)) == "1 + y'^3"


@pytest.mark.parametrize("text,pos", [
    ("x^2+2z", 5),       # unknown variable
    ("2x", 1),           # juxtaposition
    ("x y", 2),
    ("x^", 2),
    ("1/0", 2),
    ("(x+y", 4),
    ("x $ y", 2),
])
def test_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_poly(text, ("x", "y", "t"))
    assert info.value.position == pos


@given(polys())
def test_print_parse_round_trip(f):
    assert parse_poly(str(f), VARS2) == f


def test_rationals_points_and_vars():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    with pytest.raises(ParseError):
        parse_rational("3/")
    assert parse_point("y=1", VARS2) == (0, 1)
    assert parse_point("x=-1/2,y=2", VARS2) == (Fraction(-1, 2), 2)
    with pytest.raises(ParseError):
        parse_point("w=1", VARS2)
    assert parse_vars("x, y ,z") == ("x", "y", "z")
    for bad in ("x,x", "", "1a"):
        with pytest.raises(ParseError):
            parse_vars(bad)
