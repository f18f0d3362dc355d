"""Negative-weight derivations annihilating a graded space, and the coordinate
straightening that turns them into coordinate derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import ContractError, VerificationError
from .exactalg import CoordChange, Derivation, Poly, identity_images, monomial_weight, rat
from .filtration import WFiltration, _weights, monomials_below, monomials_of_weight


@dataclass
class DerivationModule:
    basis: list[Derivation]
    weight: Fraction
    weights: list[Fraction]
    # b -> dim L_{-b} for every realizable b other than the minimal weight
    other_weights: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def violations(self) -> dict:
        return {b: n for b, n in self.other_weights.items() if n}


def _homogeneous_weight(f: Poly, weights):
    ws = {monomial_weight(e, weights) for e in f.terms}
    if len(ws) > 1:
        raise ContractError(f"{f} is not weight-homogeneous")
    return ws.pop() if ws else None


def negative_derivations(V: Sequence[Poly], F, b) -> DerivationModule:
    """Basis of the weight ``-b`` derivations killing every element of ``V``.

    Unknowns are the coefficients of ``mu * d/dx_j`` with wt(mu) = wt(x_j) - b;
    the vanishing of every coefficient of D(f) gives the linear system, whose
    kernel is read off the reduced row-echelon form. Constant-coefficient
    unknowns are placed last so free columns land on them where possible.
    """
    weights = _weights(F)
    b = rat(b)
    if b <= 0:
        raise ContractError("b must be positive")
    V = [f for f in V if not f.is_zero()]
    for f in V:
        _homogeneous_weight(f, weights)
    n = len(weights)
    names = V[0].vars if V else getattr(F, "names", tuple(f"x{j}" for j in range(n)))

    unknowns = []
    consts = []
    for j in range(n):
        for mu in monomials_of_weight(weights, weights[j] - b):
            (consts if not any(mu) else unknowns).append((j, mu))
    unknowns += consts
    if not unknowns:
        return DerivationModule([], -b, weights)

    rows_by_mono: dict = {}
    partials = [[f.partial(j) for j in range(n)] for f in V]
    for k, (j, mu) in enumerate(unknowns):
        for fi, f in enumerate(V):
            df = partials[fi][j]
            for e, c in df.terms.items():
                key = (fi, tuple(a + m for a, m in zip(e, mu)))
                rows_by_mono.setdefault(key, {})[k] = c
    matrix = []
    for key in sorted(rows_by_mono):
        row = [Fraction(0)] * len(unknowns)
        for k, c in rows_by_mono[key].items():
            row[k] = c
        matrix.append(row)

    basis = []
    for vec in linalg.nullspace(matrix, len(unknowns)):
        coeffs = [dict() for _ in range(n)]
        for k, c in enumerate(vec):
            if c:
                j, mu = unknowns[k]
                coeffs[j][mu] = c
        basis.append(Derivation(names, [Poly(names, t) for t in coeffs]))
    return DerivationModule(basis, -b, weights)


def realizable_weights(F) -> list[Fraction]:
    """Every b > 0 for which a weight ``-b`` derivation can be written down."""
    weights = _weights(F)
    out = set()
    for j, w in enumerate(weights):
        for mu in monomials_below(weights, w):
            out.add(w - monomial_weight(mu, weights))
    return sorted(out)


def full_contact_module(V: Sequence[Poly], F, check_vanishing: bool = True) -> DerivationModule:
    """The module for the minimal coordinate weight ``a0``.

    With ``check_vanishing`` every other realizable weight is solved too and
    its dimension recorded in ``other_weights``; nonzero entries are
    violations of the vanishing lemma.
    """
    weights = _weights(F)
    a0 = min(weights)
    L = negative_derivations(V, F, a0)
    if check_vanishing:
        for b in realizable_weights(F):
            if b != a0:
                L.other_weights[b] = negative_derivations(V, F, b).dim
    return L


def _min_weight_coords(weights) -> list[int]:
    a0 = min(weights)
    return [j for j, w in enumerate(weights) if w == a0]


def annihilator_block(L: DerivationModule, F) -> list[Poly]:
    """Linear forms spanning the common kernel of the constant parts of L on
    the minimal-weight coordinates (RREF basis, so deterministic)."""
    weights = _weights(F)
    coords = _min_weight_coords(weights)
    if L.basis:
        names = L.basis[0].vars
    else:
        names = F.names
    rows = []
    for D in L.basis:
        cp = D.constant_part()
        rows.append([cp[j] for j in coords])
    if rows:
        kernel = linalg.nullspace(rows, len(coords))
    else:
        kernel = [[Fraction(int(i == k)) for i in range(len(coords))] for k in range(len(coords))]
    forms = []
    for v in kernel:
        f = Poly.zero(names)
        for c, j in zip(v, coords):
            if c:
                f = f + Poly.var(names, j).scale(c)
        forms.append(f)
    return forms


def _compose(total: CoordChange, step: CoordChange) -> CoordChange:
    """Forward images compose outward; inverses compose inward."""
    images = [im.substitute(total.images) for im in step.images]
    inverse = [im.substitute(step.inverse) for im in total.inverse]
    return CoordChange(total.source, images, inverse)


def straighten(D: Derivation, F, eligible: Sequence[int] | None = None) -> tuple[CoordChange, int]:
    """Coordinates in which ``D`` is a single coordinate derivative.

    Returns ``(sigma, p)``: ``sigma.images[k]`` is the k-th new coordinate as a
    function of the old ones, ``sigma.inverse`` the reverse; in the new
    coordinates D = d/dx_p. The pivot p is the smallest eligible
    minimal-weight index with nonzero constant coefficient.
    """
    weights = _weights(F)
    names = D.vars
    n = len(names)
    mins = _min_weight_coords(weights)
    if eligible is None:
        eligible = mins
    eligible = [j for j in eligible if j in mins]
    cp = D.constant_part()
    nz = [j for j in eligible if cp[j]]
    if not nz:
        raise ContractError("derivation has no constant component in the minimal-weight directions")
    p = nz[0]
    c_p = cp[p]
    xs = identity_images(names)
    total = CoordChange(names, xs, xs)

    # linear step: D(y_p) = 1, D(x_q') = 0 for the other touched minimal-weight coords
    if c_p != 1 or len(nz) > 1:
        fwd = list(xs)
        back = list(xs)
        fwd[p] = xs[p].scale(1 / c_p)
        back[p] = xs[p].scale(c_p)
        for q in nz[1:]:
            fwd[q] = xs[q] - xs[p].scale(cp[q] / c_p)
            back[q] = xs[q] + xs[p].scale(cp[q])
        step = CoordChange(names, fwd, back)
        total = _compose(total, step)
        D = D.transform(step)

    order = sorted((j for j in range(n) if j not in mins), key=lambda j: (weights[j], j))
    for j in order:
        lam = D.coefficients[j]
        if lam.is_zero():
            continue
        G = -lam.integrate(p)
        fwd = list(xs)
        back = list(xs)
        fwd[j] = xs[j] + G
        back[j] = xs[j] - G
        step = CoordChange(names, fwd, back)
        total = _compose(total, step)
        D = D.transform(step)
        if not D.coefficients[j].is_zero():
            raise ContractError(f"coefficient along {names[j]} did not integrate away")

    target = Derivation.coordinate(names, p)
    if D != target:
        raise ContractError(f"straightening left {D}")
    return total, p


def straighten_all(L: DerivationModule, F):
    """Straighten a basis of L one field at a time.

    Returns ``(sigma, Y, Z)``: after ``sigma`` every basis field is a constant
    combination of the ``d/dy``, ``Y`` holds the dual coordinates and ``Z`` the
    remaining minimal-weight coordinates, which span the annihilator.
    """
    weights = _weights(F)
    mins = _min_weight_coords(weights)
    if L.basis:
        names = L.basis[0].vars
    else:
        names = F.names
    xs = identity_images(names)
    total = CoordChange(names, xs, xs)
    Y: list[int] = []
    for D0 in L.basis:
        D = D0.transform(total)
        for y in Y:
            mu = D.coefficients[y]
            if mu.degree() > 0:
                raise VerificationError(f"component along {names[y]} is not constant")
            D = D - Derivation.coordinate(names, y).scale(mu.constant_term())
        for y in Y:
            if any(c.involves(y) for c in D.coefficients):
                raise VerificationError("straightened fields do not commute")
        eligible = [j for j in mins if j not in Y]
        sigma, p = straighten(D, F, eligible)
        total = _compose(total, sigma)
        Y.append(p)

    # every original basis element must now be a constant field along Y
    for D0 in L.basis:
        D = D0.transform(total)
        for j, c in enumerate(D.coefficients):
            if j in Y:
                if c.degree() > 0:
                    raise VerificationError("straightened field has a non-constant Y component")
            elif not c.is_zero():
                raise VerificationError(f"straightened field still moves {names[j]}")
    Z = [j for j in mins if j not in Y]
    return total, sorted(Y), Z
