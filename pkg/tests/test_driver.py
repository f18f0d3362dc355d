import json
from fractions import Fraction

import pytest

from wres.driver import (ChartTree, Node, Options, Status, check_reduced, integerized_branches,
                         is_principal, is_smooth_at_origin, max_invariant_points, principalize,
                         resolve_hypersurface, verify_drop)
from wres.errors import ContractError, ResourceError, VerificationError
from wres.exactalg import CoordChange, Poly, identity_images
from wres.invariant import Invariant, compute_invariant, integerize
from wres.parsing import parse_poly

XY, XYZ, XYZT = ("x", "y"), ("x", "y", "z"), ("x", "y", "z", "t")


def P(text, names):
    return parse_poly(text, names)


def test_cusp_principalization():
    tree = principalize([P("x^2+y^3", XY)])
    assert len(tree.nodes) == 3 and tree.rounds() == 1
    assert [n.status for n in tree.leaves()] == [Status.PRINCIPAL] * 2
    report = verify_drop(tree)
    assert report.ok and report.edges == 2 and report.summary() == "all 2 edges: strict drop"


def test_zt_symmetric_tree():
    tree = principalize([P("x^2+y^2+z^2*t^2", XYZT)])
    root = tree.root
    assert [([XYZT[v] for v in vs], a) for vs, a in root.center.blocks] == \
        [(["x", "y"], 2), (["z", "t"], 1)]
    kids = tree.children(root)
    assert [k.chart.name for k in kids] == ["x", "y", "z", "t"]
    assert all(k.invariant < root.invariant for k in kids)
    assert tree.rounds() <= 10
    assert all(n.status == Status.PRINCIPAL for n in tree.leaves())
    verify_drop(tree)


def test_smooth_divisor():
    tree = principalize([P("x", XY)])
    assert len(tree.nodes) == 2 and tree.nodes[1].status == Status.PRINCIPAL
    assert [str(g) for g in tree.nodes[1].generators] == ["1"]


def test_resolve_examples():
    tree = resolve_hypersurface(P("x^2+y^3", XY))
    assert tree.rounds() == 1 and [n.status for n in tree.leaves()] == [Status.SMOOTH] * 2
    tree = resolve_hypersurface(P("x+y^2", XY))
    assert len(tree.nodes) == 1 and tree.root.status == Status.SMOOTH
    tree = resolve_hypersurface(P("x^2+y^2+z^2*t^2", XYZT))
    assert all(n.status == Status.SMOOTH for n in tree.leaves())
    verify_drop(tree)


@pytest.mark.parametrize("text,names", [("x^2+y^3", XY), ("x^2+y^2+z^2*t^2", XYZT),
                                        ("x^2+y^2*z", XYZ), ("x^3+y^4", XY),
                                        ("x^2*y+y^4", XY), ("x^2+y^5", XYZ)])
def test_smooth_leaves_have_minimal_invariant(text, names):
    tree = resolve_hypersurface(P(text, names))
    m = len(names)
    for leaf in tree.leaves():
        assert leaf.status == Status.SMOOTH
        e = leaf.invariant.entries
        assert leaf.invariant.is_zero() or e == (1, m - 1) + (0,) * (2 * m - 2)
    for branch in integerized_branches(tree):
        assert all(a > b for a, b in zip(branch, branch[1:]))


def test_reduced_probe():
    check_reduced(P("x^2+y^3", XY))
    for bad in ("x^2", "(x+y)^2*y", "(x^2+y^3)^2"):
        with pytest.raises(ContractError):
            resolve_hypersurface(P(bad, XY))


def test_round_limit_gives_partial_tree():
    with pytest.raises(ResourceError) as info:
        principalize([P("x^2+y^3", XY)], opts=Options(max_rounds=0))
    partial = info.value.partial
    assert isinstance(partial, ChartTree) and len(partial.nodes) == 1
    assert partial.root.invariant.entries == (2, 1, Fraction(3, 2), 0)


def test_parallel_matches_serial():
    g = [P("x^2+y^2+z^2*t^2", XYZT)]
    a = principalize(g, opts=Options(workers=1)).to_json()
    b = principalize(g, opts=Options(workers=4)).to_json()
    assert json.dumps(a) == json.dumps(b)


def test_z_t_symmetry_of_tree():
    a = principalize([P("x^2+y^2+z^2*t^2", XYZT)])
    b = principalize([P("x^2+y^2+t^2*z^2", ("x", "y", "t", "z"))])
    assert [n.invariant for n in a.nodes] == [n.invariant for n in b.nodes]
    swap = {"z": "t", "t": "z", "z'": "t'", "t'": "z'"}
    assert [n.chart.name for n in a.nodes[1:]][:4] == ["x", "y", "z", "t"]
    assert [swap.get(n.chart.name, n.chart.name) for n in b.nodes[1:5]] == ["x", "y", "z", "t"]


def test_max_invariant_points():
    umb = [P("x^2+y^2*z", XYZ)]
    best = max_invariant_points(umb, [(0, 0, 0), (0, 0, 1)])
    assert [p for p, _ in best] == [(0, 0, 0)]
    assert best[0][1].invariant.entries == (2, 2, Fraction(3, 2), 0, 0, 0)
    other = compute_invariant([umb[0].shift((0, 0, 1))]).invariant
    assert other < best[0][1].invariant
    line = [P("x^2+y^3", XYZ)]
    assert len(max_invariant_points(line, [(0, 0, 0), (0, 0, 1)])) == 2
    assert len(max_invariant_points([P("x^2+y^3", XY)], [(0, 0)])) == 1


def test_candidate_point_expansion():
    # x^2 + (y-1)^3: the singular point sits at y = 1
    tree = principalize([P("x^2+(y-1)^3", XY)], opts=Options(candidates=[(0, 1)]))
    assert tree.root.point == (0, 1)
    assert tree.root.invariant.entries == (2, 1, Fraction(3, 2), 0)
    verify_drop(tree)


def test_principal_classification():
    names = ("u", "a")
    assert is_principal([P("1+a", names)])
    assert is_principal([P("u^2*(1+a)", names), P("u^3*a", names)], exceptional=["u"])
    assert not is_principal([P("u^2*(1+a)", names), P("u*a", names)], exceptional=["u"])
    assert not is_principal([P("u^2", names)])
    assert is_smooth_at_origin(P("a+u^2", names)) and not is_smooth_at_origin(P("a^2+u^2", names))


def test_verify_detects_non_drop():
    names = XY
    parent = Node(0, None, 0, names, [P("x^2+y^3", names)])
    parent.result = compute_invariant(parent.generators)
    child = Node(1, 0, 1, ("u", "y'"), [P("u^2+y'^3", ("u", "y'"))])
    child.result = compute_invariant(child.generators)
    tree = ChartTree([parent, child], 2)
    with pytest.raises(VerificationError):
        verify_drop(tree, use_defaults=False)
    report = verify_drop(tree, use_defaults=False, raise_on_failure=False)
    assert not report.ok and len(report.failures()) == 1


def test_samples_must_lie_on_exceptional_divisor():
    tree = principalize([P("x^2+y^3", XY)])
    with pytest.raises(ContractError):
        verify_drop(tree, samples={1: [(1, 0)]})
    report = verify_drop(tree, samples={1: [(0, -1), (0, 3), (0, Fraction(-1, 2))]})
    assert sum(1 for c in report.comparisons if c.child == 1) >= 4


def test_json_and_dot_deterministic():
    g = [P("x^2+y^3", XY)]
    t1, t2 = principalize(g), principalize(g)
    assert t1.to_dot() == t2.to_dot()
    assert json.dumps(t1.to_json()) == json.dumps(t2.to_json())
    dot = t1.to_dot()
    assert 'n0 [label="root / (2, 1, 3/2, 0) / Active"]' in dot
    assert "n0 -> n1;" in dot and "n0 -> n2;" in dot


def test_centers_are_coordinate_subspaces():
    tree = principalize([P("x^2+y^2*z", XYZ)])
    for n in tree.nodes:
        if n.center is None:
            continue
        change = n.result.coord_change
        xs = identity_images(n.variables)
        assert [im.substitute(change.inverse) for im in change.images] == xs
