"""The resolution invariant of an ideal at the origin and its weighted filtration.

The entries are interleaved ``(d, l0, g1, l1, g2, l2, ...)`` and padded with
zeros to length ``2m``. ``compute_invariant`` runs the block induction: at
each level the candidate weights ``H`` are walked in increasing order, and the
dimension of the module of weight ``-1`` derivations killing the weight-``H``
initial forms decides between finding a new block (case A) and re-lifting the
existing blocks (case B).
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .contact import full_contact_module, straighten_all
from .errors import ContractError, ResourceError, StructuralError, VerificationError
from .exactalg import CoordChange, Poly, format_rat, identity_images, monomial_weight, rat
from .filtration import (Block, ThetaSolution, WFiltration, ideal_multiplicity,
                         theta_successor)

DEFAULT_MAX_THETA_STEPS = 10_000
# re-lifting can grow the generators without bound (limit is a power series)
DEFAULT_MAX_DEGREE = 128
# factorials beyond this are refused rather than computed
MAX_FACTORIAL_ARGUMENT = 200_000


class Termination(str, enum.Enum):
    EARLY_ZERO = "EarlyZero"
    BLOCKS_EXHAUSTED = "BlocksExhausted"
    CONVERGED = "Converged"
    UNIT_IDEAL = "UnitIdeal"


@dataclass(frozen=True)
class Invariant:
    entries: tuple[Fraction, ...]
    terminated_by: Termination

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(rat(e) for e in self.entries))
        object.__setattr__(self, "terminated_by", Termination(self.terminated_by))
        if len(self.entries) % 2:
            raise StructuralError("an invariant has an even number of entries")

    @classmethod
    def zero(cls, m: int, terminated_by=Termination.UNIT_IDEAL):
        return cls((Fraction(0),) * (2 * m), terminated_by)

    @property
    def m(self) -> int:
        return len(self.entries) // 2

    @property
    def g(self) -> list[Fraction]:
        """Odd-position entries (d, g1, g2, ...)."""
        return list(self.entries[0::2])

    @property
    def ell(self) -> list[Fraction]:
        return list(self.entries[1::2])

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __lt__(self, other):
        return lex_compare(self, other) < 0

    def __le__(self, other):
        return lex_compare(self, other) <= 0

    def __gt__(self, other):
        return lex_compare(self, other) > 0

    def __ge__(self, other):
        return lex_compare(self, other) >= 0

    def to_json(self) -> dict:
        return {"entries": [format_rat(e) for e in self.entries],
                "terminated_by": self.terminated_by.value}

    @classmethod
    def from_json(cls, data: dict) -> "Invariant":
        return cls(tuple(Fraction(e) for e in data["entries"]), data["terminated_by"])

    def format(self) -> str:
        """Trailing zeros elided after the first one, length annotated when eliding."""
        ents = list(self.entries)
        last = max((i for i, e in enumerate(ents) if e), default=-1)
        keep = min(len(ents), last + 2)
        body = ", ".join(format_rat(e) for e in ents[:keep])
        if keep < len(ents):
            return f"({body}, …) [{len(ents)} entries]"
        return f"({body})"

    def __str__(self):
        return self.format()


def lex_compare(a: Invariant, b: Invariant) -> int:
    if len(a.entries) != len(b.entries):
        raise StructuralError(
            f"cannot compare invariants of lengths {len(a.entries)} and {len(b.entries)}")
    for x, y in zip(a.entries, b.entries):
        if x != y:
            return -1 if x < y else 1
    return 0


def denominator_bound(g_prefix: Sequence) -> int:
    """An integer D_s with D_s * g_s integral for any legal next entry g_s.

    ``g_prefix = (d, g1, ..., g_{s-1})``. D_s is the factorial of
    ``d * g1...g_{s-1} * D_0 * ... * D_{s-1}`` with D_0 = 1.
    """
    g_prefix = [rat(x) for x in g_prefix]
    if not g_prefix:
        return 1
    d = g_prefix[0]
    top = Fraction(1)
    for x in g_prefix[1:]:
        top *= x
    prod = 1
    for t in range(1, len(g_prefix)):
        prod *= denominator_bound(g_prefix[:t])
    n = d * top * prod
    if n.denominator != 1:
        raise VerificationError(f"denominator bound argument {n} is not an integer")
    n = int(n)
    if n > MAX_FACTORIAL_ARGUMENT:
        raise ResourceError(f"denominator bound needs {n}!, refusing")
    return math.factorial(max(n, 1))


def integerize(inv: Invariant) -> tuple[int, ...]:
    """Integer vector order-isomorphic to ``inv``: each g-entry times the
    denominator bound of the g-entries before it; l-entries unchanged."""
    out = []
    g = inv.g
    for i, e in enumerate(inv.entries):
        if i % 2 or i == 0 or e == 0:
            v = e
        else:
            v = e * denominator_bound(g[: i // 2])
        if Fraction(v).denominator != 1:
            raise VerificationError(f"entry {i} of {inv} is not integral after scaling")
        out.append(int(v))
    return tuple(out)


def diff_correction(eps: int, inv: Invariant) -> Invariant:
    """Invariant of the same ideal after adjoining ``eps`` unused variables."""
    if eps < 0:
        raise ContractError("eps must be non-negative")
    m = inv.m
    ents = list(inv.entries) + [Fraction(0)] * (2 * eps)
    g, ell = inv.g, inv.ell
    t = next((i for i, x in enumerate(ell) if x == 0), m)
    gt = g[t] if t < m else Fraction(0)
    if gt != 0:
        upto = t
    elif t >= 1:
        upto = t - 1
    else:
        upto = -1
    for i in range(upto + 1):
        ents[2 * i + 1] += eps
    return Invariant(tuple(ents), inv.terminated_by)


@dataclass(frozen=True)
class TraceStep:
    s: int
    H: Fraction
    case: str

    def to_json(self) -> dict:
        return {"s": self.s, "H": format_rat(self.H), "case": self.case}


@dataclass
class InvariantResult:
    invariant: Invariant
    filtration: WFiltration
    coord_change: CoordChange
    witnesses: list[tuple[ThetaSolution, list[Fraction]]] = field(default_factory=list)
    trace: list[TraceStep] = field(default_factory=list)
    generators: list[Poly] = field(default_factory=list)
    d: int = 0
    vanishing: list[dict] = field(default_factory=list)

    def vanishing_violations(self) -> list[dict]:
        return [v for v in self.vanishing if v["violations"]]

    def to_json(self) -> dict:
        return {
            "invariant": self.invariant.to_json(),
            "filtration": self.filtration.to_json(),
            "trace": [t.to_json() for t in self.trace],
            "witnesses": [w.to_json() for w, _ in self.witnesses],
            "block_coordinates": {
                self.filtration.names[k]: str(im)
                for k, im in enumerate(self.coord_change.images)},
        }


def _max_degree(value=None) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("WRES_MAX_DEGREE")
    return int(env) if env else DEFAULT_MAX_DEGREE


def _max_theta_steps(value=None) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("WRES_MAX_THETA_STEPS")
    return int(env) if env else DEFAULT_MAX_THETA_STEPS


class _State:
    """Generators and the cumulative coordinate change during one run."""

    def __init__(self, gens: list[Poly]):
        self.names = gens[0].vars
        self.gens = gens
        xs = identity_images(self.names)
        self.total = CoordChange(self.names, xs, xs)

    def apply(self, sigma: CoordChange):
        if all(im == x for im, x in zip(sigma.images, identity_images(self.names))):
            return
        self.gens = [g.substitute(sigma.inverse) for g in self.gens]
        images = [im.substitute(self.total.images) for im in sigma.images]
        inverse = [im.substitute(sigma.inverse) for im in self.total.inverse]
        self.total = CoordChange(self.names, images, inverse)


def _h_cap(gens, blocks, residual, top):
    """Largest H at which a residual-divisible term can still reach the threshold."""
    bw = {}
    for b in blocks:
        for v in b.vars:
            bw[v] = b.weight
    res = set(residual)
    dmax = max((g.degree() for g in gens), default=0)
    e_min = None
    for g in gens:
        for e in g.terms:
            q = sum(e[v] for v in res)
            if not q:
                continue
            gap = top - sum((bw[v] * k for v, k in enumerate(e) if v in bw), Fraction(0))
            if gap > 0 and (e_min is None or gap < e_min):
                e_min = gap
    if e_min is None:
        return None
    return Fraction(dmax) / e_min


def _is_graph(f: Poly, p: int, pivots) -> bool:
    rest = f - Poly.var(f.vars, p)
    return not any(rest.involves(q) for q in pivots)


def _smooth_complete_intersection(gens: list[Poly], m: int) -> InvariantResult | None:
    """(1, m-k, 0, ...) for k order-one generators with independent linear parts.

    Formally such an ideal is generated by k coordinates. Block coordinates
    are the generators themselves (row-reduced); the inverse change is only
    recorded when every generator is linear.
    """
    names = gens[0].vars
    k = len(gens)
    if any(g.order() != 1 for g in gens):
        return None
    lin = []
    for g in gens:
        row = [g.coeff(tuple(int(i == j) for i in range(m))) for j in range(m)]
        lin.append(row)
    aug = [row + [Fraction(int(i == r)) for i in range(k)] for r, row in enumerate(lin)]
    rows, pivots = linalg.rref(aug, m)
    if len(pivots) != k:
        return None
    reduced = []
    for row in rows:
        f = Poly.zero(names)
        for c, g in zip(row[m:], gens):
            if c:
                f = f + g.scale(c)
        reduced.append(f)
    xs = identity_images(names)
    images = list(xs)
    for p, f in zip(pivots, reduced):
        images[p] = f
    inverse = None
    if all(f.degree() == 1 for f in reduced):
        mat = [[im.coeff(tuple(int(i == j) for i in range(m))) for j in range(m)] for im in images]
        inverse = CoordChange.linear(names, mat).inverse
    elif all(_is_graph(f, p, pivots) for p, f in zip(pivots, reduced)):
        # f = x_p + phi(non-pivot variables): x_p = y_p - phi
        inverse = list(xs)
        for p, f in zip(pivots, reduced):
            inverse[p] = xs[p] + xs[p] - f
    change = CoordChange(names, images, inverse)
    ell = m - k
    ents = [Fraction(1), Fraction(ell)] + [Fraction(0)] * (2 * m - 2)
    term = Termination.CONVERGED if ell else Termination.EARLY_ZERO
    residual = tuple(j for j in range(m) if j not in pivots)
    F = WFiltration(names, (Block(tuple(pivots), Fraction(1)),), residual, change)
    return InvariantResult(Invariant(tuple(ents), term), F, change,
                           generators=[xs[p] for p in pivots], d=1)


def compute_invariant(gens: Sequence[Poly], m: int | None = None, *,
                      max_theta_steps: int | None = None,
                      max_degree: int | None = None,
                      check_vanishing: bool = True,
                      shortcut: bool = True) -> InvariantResult:
    """Invariant and weighted filtration of the ideal generated by ``gens`` at the origin.

    With ``shortcut`` a smooth complete intersection (every generator of order
    one, linear parts independent) is answered directly; the general loop
    would re-lift forever when the smooth locus is not a polynomial graph.
    """
    gens = list(gens)
    if not gens:
        raise StructuralError("empty generator list")
    names = gens[0].vars
    if m is None:
        m = len(names)
    if m != len(names):
        raise StructuralError(f"ambient dimension {m} does not match {len(names)} variables")
    if all(g.is_zero() for g in gens):
        raise ContractError("the zero ideal has infinite multiplicity")
    cap = _max_theta_steps(max_theta_steps)
    deg_cap = _max_degree(max_degree)
    state = _State([g for g in gens if not g.is_zero()])
    ident = CoordChange(names, identity_images(names), identity_images(names))

    d = ideal_multiplicity(state.gens)
    if d == 0:
        F = WFiltration(names, (), tuple(range(m)), ident)
        return InvariantResult(Invariant.zero(m), F, ident, generators=state.gens, d=0)

    if shortcut and d == 1:
        direct = _smooth_complete_intersection(state.gens, m)
        if direct is not None:
            return direct

    entries = [Fraction(d)]
    result = InvariantResult(None, None, None, d=d)

    V = [g.homogeneous_part(d) for g in state.gens if g.order() == d]
    F0 = WFiltration.madic(names)
    L = full_contact_module(V, F0, check_vanishing)
    result.vanishing.append({"s": 0, "H": Fraction(1), "violations": L.violations()})
    sigma, Y, Z = straighten_all(L, F0)
    state.apply(sigma)
    entries.append(Fraction(L.dim))

    blocks = [Block(tuple(Z), Fraction(1))]
    residual = list(Y)

    def finish(term: Termination, blocks, residual):
        ents = entries + [Fraction(0)] * (2 * m - len(entries))
        result.invariant = Invariant(tuple(ents), term)
        result.coord_change = state.total
        result.filtration = WFiltration(names, tuple(blocks), tuple(sorted(residual)), state.total)
        result.generators = state.gens
        return result

    if L.dim == 0:
        return finish(Termination.EARLY_ZERO, blocks, residual)

    s = 1
    while True:
        gw = [b.weight for b in blocks]
        top = gw[0] * d
        h = Fraction(1)
        steps = 0
        while True:
            H_cap = _h_cap(state.gens, blocks, residual, top)
            sol = theta_successor(gw, d, h)
            if H_cap is None or sol.H > H_cap:
                return finish(Termination.CONVERGED, blocks, residual)
            steps += 1
            if steps > cap:
                finish(Termination.CONVERGED, blocks, residual)
                raise ResourceError(
                    f"more than {cap} parameter steps at level {s}", partial=result)
            if max(g.degree() for g in state.gens) > deg_cap:
                finish(Termination.CONVERGED, blocks, residual)
                raise ResourceError(
                    f"generators exceed degree {deg_cap} while re-lifting at level {s}",
                    partial=result)
            H = sol.H
            FH = WFiltration(names, tuple(Block(b.vars, b.weight * H) for b in blocks),
                             tuple(sorted(residual)))
            weights = FH.weights()
            threshold = H * top
            V = []
            for g in state.gens:
                o = g.weighted_order(weights)
                if o < threshold:
                    raise ContractError(
                        f"generator {g} has weighted order {o} below {threshold} at H={H}")
                part = g.weighted_part(weights, threshold)
                if not part.is_zero():
                    V.append(part)
            L = full_contact_module(V, FH, check_vanishing)
            result.vanishing.append({"s": s, "H": H, "violations": L.violations()})
            sigma, Y, Z = straighten_all(L, FH)
            state.apply(sigma)
            if L.dim < len(residual):
                result.trace.append(TraceStep(s, H, "A"))
                result.witnesses.append((sol, gw))
                blocks = [Block(b.vars, b.weight * H) for b in blocks] + [Block(tuple(Z), Fraction(1))]
                residual = list(Y)
                entries.extend([H, Fraction(L.dim)])
                break
            result.trace.append(TraceStep(s, H, "B"))
            h = H
        if not residual:
            return finish(Termination.BLOCKS_EXHAUSTED, blocks, residual)
        s += 1


def invariant_at(gens: Sequence[Poly], point=None, **kw) -> InvariantResult:
    """Invariant at a rational point, by translating it to the origin."""
    gens = list(gens)
    if point is not None and any(rat(p) for p in point):
        gens = [g.shift(point) for g in gens]
    return compute_invariant(gens, **kw)


def reconstructed_block_weights(inv: Invariant, nblocks: int) -> list[Fraction]:
    """Block weights g^i = g_{i+1} ... g_{s-1} rebuilt from the g-entries."""
    g = inv.g
    s = nblocks
    out = []
    for i in range(s):
        w = Fraction(1)
        for t in range(i + 1, s):
            w *= g[t]
        out.append(w)
    return out
