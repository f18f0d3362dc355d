"""Weighted centers and the charts of their smoothed weighted blow-up.

A center is the filtration's blocks with the weights scaled to coprime
integers ``a^0 > a^1 > ...``. Chart ``(i, j)`` puts ``x_ij = u^{a^i}`` and
``x_kl = u^{a^k} x'_kl`` for every other center variable, leaves the residual
variables alone, and carries the cyclic action ``u -> zeta u``,
``x'_kl -> zeta^{-a^k} x'_kl`` of order ``a^i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ContractError, StructuralError
from .exactalg import CoordChange, Poly, format_rat, identity_images, rat
from .invariant import InvariantResult, Termination

TRANSFORM_MODES = ("controlled", "proper")


@dataclass(frozen=True)
class Center:
    ambient: tuple[str, ...]
    blocks: tuple[tuple[tuple[int, ...], int], ...]
    threshold: int
    residual: tuple[int, ...] = ()
    # original coordinate j as a polynomial in the block coordinates,
    # translation to the chosen point already folded in
    to_block: tuple[Poly, ...] = field(default=(), compare=False)
    point: tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self):
        ws = [w for _, w in self.blocks]
        if any(int(w) != w or w <= 0 for w in ws):
            raise ContractError("center weights must be positive integers")
        if any(a <= b for a, b in zip(ws, ws[1:])):
            raise ContractError("center weights must strictly decrease")
        if ws and math.gcd(*ws) != 1:
            raise ContractError("center weights must be coprime")
        if not self.to_block:
            object.__setattr__(self, "to_block", tuple(identity_images(self.ambient)))

    @property
    def weights(self) -> list[int]:
        """Per-variable weights, 0 on the residual."""
        w = [0] * len(self.ambient)
        for vs, a in self.blocks:
            for v in vs:
                w[v] = a
        return w

    @property
    def variables(self) -> list[int]:
        return [v for vs, _ in self.blocks for v in vs]

    def is_trivial_change(self) -> bool:
        return tuple(self.to_block) == tuple(identity_images(self.ambient))

    def in_block_coordinates(self, f: Poly) -> Poly:
        return f.substitute(self.to_block)

    def ideal_generators(self) -> list[Poly]:
        """Block coordinates as polynomials in the original ones (the center ideal)."""
        return [Poly.var(self.ambient, v) for v in self.variables]

    def to_json(self) -> dict:
        out = {
            "blocks": [{"vars": [self.ambient[v] for v in vs], "weight": a}
                       for vs, a in self.blocks],
            "residual": [self.ambient[v] for v in self.residual],
            "threshold": self.threshold,
        }
        if self.point and any(self.point):
            out["point"] = {n: format_rat(p) for n, p in zip(self.ambient, self.point)}
        if not self.is_trivial_change():
            out["coordinates"] = {n: str(p) for n, p in zip(self.ambient, self.to_block)}
        return out


def clear_weights(weights: Sequence) -> tuple[list[int], Fraction]:
    """Scale rationals to coprime positive integers; returns (ints, factor)."""
    weights = [rat(w) for w in weights]
    if not weights:
        return [], Fraction(1)
    lcm = math.lcm(*(w.denominator for w in weights))
    ints = [int(w * lcm) for w in weights]
    g = math.gcd(*ints)
    return [a // g for a in ints], Fraction(lcm, g)


def make_center(res: InvariantResult, point: Sequence | None = None) -> Center:
    """Center of a computed invariant: the filtration's blocks, residual excluded.

    ``point`` is the rational point ``res`` was computed at (after translating
    it to the origin); it is folded into ``to_block``.
    """
    if res.invariant.terminated_by == Termination.UNIT_IDEAL:
        raise ContractError("the unit ideal has no center")
    F = res.filtration
    names = F.names
    ints, factor = clear_weights(F.block_weights())
    blocks = tuple((tuple(b.vars), a) for b, a in zip(F.blocks, ints))
    threshold = res.d * ints[0]
    if Fraction(res.d) * F.blocks[0].weight * factor != threshold:
        raise ContractError("threshold does not match the rescaled weights")
    if res.coord_change is None:
        inverse = identity_images(names)
    else:
        inverse = res.coord_change.inverse
    if inverse is None:
        raise ContractError("block coordinates have no polynomial inverse; "
                            "the center is only defined formally")
    pt = tuple(rat(p) for p in point) if point is not None else (Fraction(0),) * len(names)
    to_block = tuple(im + p for im, p in zip(inverse, pt))
    return Center(tuple(names), blocks, threshold, tuple(F.residual), to_block, pt)


def _fresh(base: str, taken: set) -> str:
    if base not in taken:
        return base
    k = 2
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _primed(name: str, taken: set) -> str:
    new = name + "'"
    while new in taken:
        new += "'"
    return new


@dataclass(frozen=True)
class Chart:
    index: tuple[int, int]
    parent_vars: tuple[str, ...]
    variables: tuple[str, ...]
    # block coordinates -> chart variables (the monomial map)
    monomial_map: CoordChange
    # original parent coordinates -> chart variables (translation and
    # straightening included)
    substitution: CoordChange
    group_order: int
    action_weights: tuple[int, ...]
    exceptional: str
    # parent variable name -> chart variable name for the variables that survive
    renamed: dict = field(default_factory=dict, compare=False)

    @property
    def name(self) -> str:
        i, j = self.index
        return self.parent_vars[j]

    @property
    def u(self) -> int:
        return 0

    def character(self, threshold: int) -> int:
        """Exponent c with f -> zeta^c f for every controlled-transformed generator."""
        return (-threshold) % self.group_order

    def act(self, f: Poly, k: int = 1) -> dict:
        """Image of ``f`` under zeta^k, as a map exponent-of-zeta -> polynomial."""
        out: dict[int, Poly] = {}
        for e, c in f.terms.items():
            z = sum(w * a for w, a in zip(self.action_weights, e)) * k % self.group_order
            out[z] = out.get(z, Poly.zero(f.vars)) + Poly.monomial(f.vars, e, c)
        return out

    def to_json(self) -> dict:
        return {
            "chart": self.name,
            "subst": {self.parent_vars[v]: str(im)
                      for v, im in enumerate(self.monomial_map.images)},
            "group_order": self.group_order,
            "action": list(self.action_weights),
        }


def weighted_blowup(c: Center) -> list[Chart]:
    """One chart per center variable, in block then variable order."""
    if not c.blocks:
        raise StructuralError("empty center")
    names = c.ambient
    taken = set(names)
    u = _fresh("u", taken)
    taken.add(u)
    charts = []
    for bi, (vs_i, a_i) in enumerate(c.blocks):
        for j in vs_i:
            chart_vars = [u]
            renamed = {}
            action = [1]
            local_taken = set(taken)
            for vs_k, a_k in c.blocks:
                for l in vs_k:
                    if l == j:
                        continue
                    nm = _primed(names[l], local_taken)
                    local_taken.add(nm)
                    chart_vars.append(nm)
                    renamed[names[l]] = nm
                    action.append(-a_k)
            for r in c.residual:
                chart_vars.append(names[r])
                renamed[names[r]] = names[r]
                action.append(0)
            chart_vars = tuple(chart_vars)
            U = Poly.var(chart_vars, u)
            images = []
            for v in range(len(names)):
                if v == j:
                    images.append(U ** a_i)
                elif v in c.residual:
                    images.append(Poly.var(chart_vars, names[v]))
                else:
                    a_k = c.weights[v]
                    images.append(U ** a_k * Poly.var(chart_vars, renamed[names[v]]))
            mono = CoordChange(names, images)
            full = CoordChange(names, [p.substitute(images) for p in c.to_block])
            charts.append(Chart((bi, j), names, chart_vars, mono, full, a_i,
                                tuple(action), u, renamed))
    return charts


def _u_order(f: Poly, u: int = 0):
    return min((e[u] for e in f.terms), default=None)


def _divide_u(f: Poly, k: int, u: int = 0) -> Poly:
    terms = {}
    for e, c in f.terms.items():
        if e[u] < k:
            raise ContractError(f"{f} is not divisible by the exceptional power {k}")
        e2 = list(e)
        e2[u] -= k
        terms[tuple(e2)] = c
    return Poly(f.vars, terms)


@dataclass
class Transform:
    generators: list[Poly]
    # (chart variable, remaining multiplicity) per generator
    exceptional_history: list[tuple[str, int]]
    divided: list[int]


def controlled_transform(I: Sequence[Poly], ch: Chart, c: Center,
                         mode: str = "controlled") -> Transform:
    """Pull back through the chart and divide out the exceptional parameter.

    ``controlled`` divides every generator by ``u^threshold``; ``proper``
    divides each by its own exact u-order.
    """
    if mode not in TRANSFORM_MODES:
        raise ContractError(f"unknown transform mode {mode!r}")
    out, hist, divided = [], [], []
    for f in I:
        if f.vars != ch.parent_vars:
            raise StructuralError("generator ambient does not match the chart")
        g = f.substitute(ch.substitution.images)
        if g.is_zero():
            continue
        k = c.threshold if mode == "controlled" else _u_order(g)
        h = _divide_u(g, k)
        out.append(h)
        divided.append(k)
        hist.append((ch.exceptional, _u_order(h)))
    return Transform(out, hist, divided)


def exceptional_restriction(transformed: Sequence[Poly], ch: Chart) -> list[Poly]:
    """Set the exceptional parameter to zero."""
    out = []
    for f in transformed:
        zero = list(identity_images(f.vars))
        zero[0] = Poly.zero(f.vars)
        out.append(f.substitute(zero))
    return out
