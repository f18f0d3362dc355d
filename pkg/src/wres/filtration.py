"""Block-weighted filtrations, weighted orders, initial forms and the set of
sub-inductive parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .errors import ContractError, StructuralError
from .exactalg import CoordChange, Poly, format_rat, monomial_weight, rat


@dataclass(frozen=True)
class Block:
    vars: tuple[int, ...]
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "weight", rat(self.weight))
        if self.weight <= 0:
            raise ContractError("block weight must be positive")


@dataclass(frozen=True)
class WFiltration:
    """Blocks of coordinates with strictly decreasing weights, plus a residual
    block of weight 1. ``coord_change`` maps the original coordinates to the
    ones the blocks refer to (identity when absent)."""

    names: tuple[str, ...]
    blocks: tuple[Block, ...] = ()
    residual: tuple[int, ...] = ()
    coord_change: CoordChange | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "blocks", tuple(self.blocks))
        object.__setattr__(self, "residual", tuple(self.residual))
        seen = [v for b in self.blocks for v in b.vars] + list(self.residual)
        if sorted(seen) != list(range(len(self.names))):
            raise StructuralError("blocks and residual must partition the variables")
        ws = [b.weight for b in self.blocks]
        if any(a <= b for a, b in zip(ws, ws[1:])):
            raise ContractError("block weights must strictly decrease")
        if ws and ws[-1] < 1:
            raise ContractError("last block weight must be at least 1")

    @classmethod
    def madic(cls, names):
        """All coordinates of weight 1 (powers of the maximal ideal)."""
        return cls(names, (), tuple(range(len(names))))

    @classmethod
    def from_weights(cls, names, weights):
        """Group variables by weight; weight-1 variables become the residual."""
        weights = [rat(w) for w in weights]
        groups: dict[Fraction, list[int]] = {}
        residual = []
        for j, w in enumerate(weights):
            if w == 1:
                residual.append(j)
            else:
                groups.setdefault(w, []).append(j)
        blocks = tuple(Block(tuple(groups[w]), w) for w in sorted(groups, reverse=True))
        return cls(names, blocks, tuple(residual))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def weights(self) -> list[Fraction]:
        w = [Fraction(1)] * self.nvars
        for b in self.blocks:
            for v in b.vars:
                w[v] = b.weight
        return w

    def block_weights(self) -> list[Fraction]:
        return [b.weight for b in self.blocks]

    def scaled(self, h) -> "WFiltration":
        """Blocks rescaled by ``h``, residual kept at weight 1."""
        h = rat(h)
        return WFiltration(self.names, tuple(Block(b.vars, b.weight * h) for b in self.blocks),
                           self.residual, self.coord_change)

    def to_json(self) -> dict:
        return {
            "blocks": [{"vars": [self.names[v] for v in b.vars], "weight": format_rat(b.weight)}
                       for b in self.blocks],
            "residual": [self.names[v] for v in self.residual],
        }


def _weights(F) -> list[Fraction]:
    if isinstance(F, WFiltration):
        return F.weights()
    return [rat(w) for w in F]


def weighted_order(f: Poly, F):
    """Minimum weighted degree over the terms of ``f``; ``None`` stands for infinity."""
    return f.weighted_order(_weights(F))


def ideal_multiplicity(gens: Sequence[Poly]):
    """Order of the ideal at the origin; ``None`` when every generator is zero."""
    if not gens:
        raise StructuralError("empty generator list")
    orders = [g.order() for g in gens if not g.is_zero()]
    return min(orders) if orders else None


def initial_form(f: Poly, F, threshold) -> Poly:
    w = _weights(F)
    threshold = rat(threshold)
    o = f.weighted_order(w)
    if o is not None and o < threshold:
        raise ContractError(f"weighted order {o} is below the threshold {threshold}")
    return f.weighted_part(w, threshold)


def monomials_of_weight(weights: Sequence[Fraction], q) -> list[tuple]:
    q = rat(q)
    n = len(weights)
    out = []
    if q < 0:
        return out

    def rec(j, left, acc):
        if j == n:
            if left == 0:
                out.append(tuple(acc))
            return
        w = weights[j]
        k = 0
        while k * w <= left:
            acc.append(k)
            rec(j + 1, left - k * w, acc)
            acc.pop()
            k += 1

    rec(0, q, [])
    return out


def monomials_below(weights: Sequence[Fraction], bound) -> list[tuple]:
    """All monomials of weight strictly less than ``bound``."""
    bound = rat(bound)
    n = len(weights)
    out = []

    def rec(j, used, acc):
        if j == n:
            out.append(tuple(acc))
            return
        k = 0
        while used + k * weights[j] < bound:
            acc.append(k)
            rec(j + 1, used + k * weights[j], acc)
            acc.pop()
            k += 1

    if bound > 0:
        rec(0, Fraction(0), [])
    return out


def graded_piece_basis(F, q) -> list[tuple]:
    """Exponent vectors of weight exactly ``q``, in canonical term order."""
    from .exactalg import term_key
    return sorted(monomials_of_weight(_weights(F), q), key=term_key)


@dataclass(frozen=True)
class ThetaSolution:
    H: Fraction
    witness_alpha: tuple[int, ...]
    witness_beta: int

    def check(self, block_weights: Sequence[Fraction], d: int) -> bool:
        s = sum((rat(g) * a for g, a in zip(block_weights, self.witness_alpha)), Fraction(0))
        top = rat(block_weights[0]) * d
        return self.H * s + self.witness_beta == self.H * top and s < top

    def to_json(self) -> dict:
        return {"H": format_rat(self.H), "alpha": list(self.witness_alpha),
                "beta": self.witness_beta}


def _alphas(block_weights: Sequence[Fraction], top: Fraction):
    """All (alpha, sum g^i alpha_i) with the sum strictly below ``top``."""
    n = len(block_weights)

    def rec(j, used, acc):
        if j == n:
            yield tuple(acc), used
            return
        k = 0
        while used + k * block_weights[j] < top:
            acc.append(k)
            yield from rec(j + 1, used + k * block_weights[j], acc)
            acc.pop()
            k += 1

    yield from rec(0, Fraction(0), [])


def _block_weights(F) -> list[Fraction]:
    if isinstance(F, WFiltration):
        return F.block_weights()
    return [rat(w) for w in F]


def theta_enumerate(F, d: int, upto) -> list[ThetaSolution]:
    """Every H in the parameter set with 1 < H <= upto, ascending.

    H ranges over beta / (g^0 d - sum g^i alpha_i) for integer alpha >= 0 with
    the denominator positive and beta >= 1; one witness kept per H, the
    lexicographically smallest (alpha, beta).
    """
    gw = _block_weights(F)
    if d < 1 or not gw:
        raise ContractError("need d >= 1 and at least one block")
    upto = rat(upto)
    top = gw[0] * d
    best: dict[Fraction, tuple] = {}
    if upto <= 1:
        return []
    for alpha, used in _alphas(gw, top):
        delta = top - used
        beta = floor(delta) + 1
        while Fraction(beta) / delta <= upto:
            H = Fraction(beta) / delta
            key = alpha + (beta,)
            if H not in best or key < best[H]:
                best[H] = key
            beta += 1
    return [ThetaSolution(H, best[H][:-1], best[H][-1]) for H in sorted(best)]


def theta_successor(F, d: int, h) -> ThetaSolution:
    """Smallest element of the parameter set strictly greater than ``h`` (h >= 1)."""
    gw = _block_weights(F)
    h = max(rat(h), Fraction(1))
    top = gw[0] * d
    best = None
    for alpha, used in _alphas(gw, top):
        delta = top - used
        beta = floor(h * delta) + 1
        H = Fraction(beta) / delta
        key = (H, alpha, beta)
        if best is None or key < best:
            best = key
    H, alpha, beta = best
    return ThetaSolution(H, alpha, beta)
