"""Exact multivariate polynomials over Q, substitutions and derivations.

A ``Poly`` is a sparse map from exponent tuples to nonzero ``Fraction``
coefficients over a fixed tuple of variable names. Values are immutable;
every operation returns a new object.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import ContractError, StructuralError

Mono = tuple


def rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def format_rat(q) -> str:
    q = rat(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def term_key(exps: Mono):
    # increasing total degree, then lexicographically larger first
    return (sum(exps), tuple(-e for e in exps))


class Poly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Mono, object] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                c = rat(c)
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise StructuralError(f"exponent {e} does not match {n} variables")
                    clean[e] = c
        self.terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, vars):
        return cls(vars)

    @classmethod
    def const(cls, vars, c):
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, which):
        vars = tuple(vars)
        j = vars.index(which) if isinstance(which, str) else which
        e = [0] * len(vars)
        e[j] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars, exps, c=1):
        return cls(vars, {tuple(exps): c})

    @classmethod
    def _raw(cls, vars, terms):
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    # basic queries ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self) -> int | None:
        """Lowest total degree of a term; None for zero."""
        return min((sum(e) for e in self.terms), default=None)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_unit_at_origin(self) -> bool:
        return self.constant_term() != 0

    def coeff(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: term_key(t[0]))

    def involves(self, j: int) -> bool:
        return any(e[j] for e in self.terms)

    def variables_used(self) -> set[int]:
        return {j for e in self.terms for j, k in enumerate(e) if k}

    # arithmetic -------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise StructuralError(f"ambient mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other):
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = rat(c)
        if not c:
            return Poly.zero(self.vars)
        return Poly._raw(self.vars, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly._raw(self.vars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ContractError("only non-negative integer powers")
        result = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.vars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # calculus ---------------------------------------------------------
    def partial(self, j: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[j]:
                f = list(e)
                f[j] -= 1
                out[tuple(f)] = c * e[j]
        return Poly._raw(self.vars, out)

    def integrate(self, j: int) -> "Poly":
        """Antiderivative in ``x_j`` with no x_j-free constant of integration."""
        out = {}
        for e, c in self.terms.items():
            f = list(e)
            f[j] += 1
            out[tuple(f)] = c / f[j]
        return Poly._raw(self.vars, out)

    # substitution -----------------------------------------------------
    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable j by ``images[j]``; images share one target ambient."""
        if len(images) != self.nvars:
            raise StructuralError("one image per variable required")
        if not images:
            return self
        target = images[0].vars
        for im in images:
            if im.vars != target:
                raise StructuralError("images must share an ambient")
        result = Poly.zero(target)
        powers: list[dict[int, Poly]] = [{0: Poly.const(target, 1), 1: im} for im in images]

        def power(j, k):
            cache = powers[j]
            if k not in cache:
                cache[k] = images[j] ** k
            return cache[k]

        for e, c in self.terms.items():
            t = Poly.const(target, c)
            for j, k in enumerate(e):
                if k:
                    t = t * power(j, k)
            result = result + t
        return result

    def shift(self, point: Sequence) -> "Poly":
        """Translate so that ``point`` becomes the origin: x_j -> x_j + p_j."""
        images = [Poly.var(self.vars, j) + rat(p) for j, p in enumerate(point)]
        return self.substitute(images)

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        pt = [rat(p) for p in point]
        for e, c in self.terms.items():
            v = c
            for p, k in zip(pt, e):
                if k:
                    v *= p ** k
            total += v
        return total

    def rename(self, vars: Sequence[str]) -> "Poly":
        if len(vars) != self.nvars:
            raise StructuralError("rename must keep the variable count")
        return Poly._raw(tuple(vars), dict(self.terms))

    def embed(self, vars: Sequence[str]) -> "Poly":
        """Re-express in a larger (or reordered) ambient containing all used names."""
        vars = tuple(vars)
        idx = []
        for j, name in enumerate(self.vars):
            if name in vars:
                idx.append(vars.index(name))
            elif self.involves(j):
                raise StructuralError(f"variable {name} missing from target ambient")
            else:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(vars)
            for j, k in enumerate(e):
                if k:
                    f[idx[j]] = k
            out[tuple(f)] = c
        return Poly._raw(vars, out)

    # weights ----------------------------------------------------------
    def weighted_order(self, weights: Sequence[Fraction]):
        """Minimum weighted degree of a term, or None for the zero polynomial."""
        return min((sum((w * k for w, k in zip(weights, e)), Fraction(0)) for e in self.terms),
                   default=None)

    def weighted_part(self, weights: Sequence[Fraction], q) -> "Poly":
        q = rat(q)
        return Poly._raw(self.vars, {
            e: c for e, c in self.terms.items()
            if sum((w * k for w, k in zip(weights, e)), Fraction(0)) == q})

    def truncate(self, degree: int) -> "Poly":
        return Poly._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) <= degree})

    def homogeneous_part(self, degree: int) -> "Poly":
        return Poly._raw(self.vars, {e: c for e, c in self.terms.items() if sum(e) == degree})

    # printing ---------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (name if k == 1 else f"{name}^{k}") for name, k in zip(self.vars, e) if k)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = format_rat(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rat(a)}*{mono}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Poly({str(self)!r}, vars={self.vars})"


def monomial_weight(exps: Mono, weights: Sequence[Fraction]) -> Fraction:
    return sum((w * k for w, k in zip(weights, exps)), Fraction(0))


def identity_images(vars) -> list[Poly]:
    return [Poly.var(vars, j) for j in range(len(vars))]


class CoordChange:
    """A polynomial substitution ``x_j -> images[j]``.

    ``images`` live in the target ambient; ``inverse`` (optional) maps the
    target variables back into the source ambient so that substituting one
    after the other is the identity.
    """

    __slots__ = ("source", "images", "inverse")

    def __init__(self, source: Sequence[str], images: Sequence[Poly],
                 inverse: Sequence[Poly] | None = None):
        self.source = tuple(source)
        self.images = tuple(images)
        if len(self.images) != len(self.source):
            raise StructuralError("one image per source variable required")
        self.inverse = tuple(inverse) if inverse is not None else None

    @property
    def target(self):
        return self.images[0].vars if self.images else self.source

    @classmethod
    def identity(cls, vars):
        ims = identity_images(vars)
        return cls(vars, ims, ims)

    @classmethod
    def linear(cls, vars, matrix):
        """x_i -> sum_j matrix[i][j] x_j with exact inverse."""
        vars = tuple(vars)
        n = len(vars)
        try:
            inv = linalg.inverse(matrix)
        except ValueError:
            raise ContractError("linear part is not invertible") from None
        fwd = [sum((Poly.var(vars, j).scale(matrix[i][j]) for j in range(n)), Poly.zero(vars))
               for i in range(n)]
        back = [sum((Poly.var(vars, j).scale(inv[i][j]) for j in range(n)), Poly.zero(vars))
                for i in range(n)]
        return cls(vars, fwd, back)

    def apply(self, f: Poly) -> Poly:
        if f.vars != self.source:
            raise StructuralError(f"ambient mismatch: {f.vars} vs {self.source}")
        return f.substitute(self.images)

    def inverted(self) -> "CoordChange":
        if self.inverse is None:
            raise ContractError("no stored inverse")
        return CoordChange(self.target, self.inverse, self.images)

    def then(self, other: "CoordChange") -> "CoordChange":
        """Substitute self first, then other (``other.apply(self.apply(f))``)."""
        if other.source != self.target:
            raise StructuralError("composition ambient mismatch")
        images = [im.substitute(other.images) for im in self.images]
        inverse = None
        if self.inverse is not None and other.inverse is not None:
            inverse = [im.substitute(self.inverse) for im in other.inverse]
        return CoordChange(self.source, images, inverse)

    def linear_part(self) -> list[list[Fraction]]:
        n = len(self.target)
        rows = []
        for im in self.images:
            row = []
            for j in range(n):
                e = [0] * n
                e[j] = 1
                row.append(im.coeff(e))
            rows.append(row)
        return rows

    def truncated_inverse(self, degree: int) -> list[Poly]:
        """Inverse substitution correct modulo terms of total degree > ``degree``.

        Requires square, origin-preserving, with invertible linear part.
        Fixed-point iteration ``tau = A^-1 (x - N(tau))`` gains one degree per
        pass.
        """
        n = len(self.source)
        if len(self.target) != n:
            raise ContractError("only square substitutions can be inverted")
        if any(im.constant_term() for im in self.images):
            raise ContractError("substitution must fix the origin")
        a = self.linear_part()
        try:
            ainv = linalg.inverse(a)
        except ValueError:
            raise ContractError("linear part is not invertible") from None
        tgt = self.target
        xs = identity_images(tgt)
        nonlinear = [im - im.homogeneous_part(1) for im in self.images]
        tau = [sum((xs[j].scale(ainv[i][j]) for j in range(n)), Poly.zero(tgt)) for i in range(n)]
        for _ in range(degree):
            resid = [xs[i] - nonlinear[i].substitute(tau) for i in range(n)]
            tau = [sum((resid[j].scale(ainv[i][j]) for j in range(n)), Poly.zero(tgt)).truncate(degree)
                   for i in range(n)]
        return tau

    def __eq__(self, other):
        return (isinstance(other, CoordChange) and self.source == other.source
                and self.images == other.images)

    def __repr__(self):
        body = ", ".join(f"{v} -> {im}" for v, im in zip(self.source, self.images))
        return f"CoordChange({body})"


class Derivation:
    """``sum_j coefficients[j] * d/dx_j``."""

    __slots__ = ("vars", "coefficients")

    def __init__(self, vars: Sequence[str], coefficients: Sequence[Poly]):
        self.vars = tuple(vars)
        self.coefficients = tuple(coefficients)
        if len(self.coefficients) != len(self.vars):
            raise StructuralError("one coefficient per variable required")
        for c in self.coefficients:
            if c.vars != self.vars:
                raise StructuralError("coefficient ambient mismatch")

    @classmethod
    def coordinate(cls, vars, j):
        vars = tuple(vars)
        coeffs = [Poly.const(vars, int(i == j)) for i in range(len(vars))]
        return cls(vars, coeffs)

    def __call__(self, f: Poly) -> Poly:
        return apply_derivation(self, f)

    def __add__(self, other: "Derivation"):
        return Derivation(self.vars, [a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other: "Derivation"):
        return Derivation(self.vars, [a - b for a, b in zip(self.coefficients, other.coefficients)])

    def scale(self, c) -> "Derivation":
        return Derivation(self.vars, [a.scale(c) for a in self.coefficients])

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def bracket(self, other: "Derivation") -> "Derivation":
        return Derivation(self.vars, [self(b) - other(a)
                                      for a, b in zip(self.coefficients, other.coefficients)])

    def constant_part(self) -> list[Fraction]:
        return [c.constant_term() for c in self.coefficients]

    def transform(self, change: CoordChange) -> "Derivation":
        """Express in new coordinates ``y = change.images`` (y_k as functions of x).

        New coefficient k is D(y_k) rewritten via ``change.inverse``.
        """
        if change.inverse is None:
            raise ContractError("derivation transport needs an exact inverse")
        coeffs = [self(y).substitute(change.inverse) for y in change.images]
        return Derivation(change.target, coeffs)

    def weight(self, weights: Sequence[Fraction]):
        """Common weight of a weight-homogeneous derivation; None if zero."""
        ws = set()
        for j, c in enumerate(self.coefficients):
            for e in c.terms:
                ws.add(monomial_weight(e, weights) - weights[j])
        if not ws:
            return None
        if len(ws) > 1:
            raise ContractError("derivation is not weight-homogeneous")
        return ws.pop()

    def __eq__(self, other):
        return (isinstance(other, Derivation) and self.vars == other.vars
                and self.coefficients == other.coefficients)

    def __repr__(self):
        parts = [f"({c})*d_{v}" for v, c in zip(self.vars, self.coefficients) if not c.is_zero()]
        return "Derivation(" + (" + ".join(parts) if parts else "0") + ")"


def ring_op(op: str, f: Poly, g=None) -> Poly:
    """Named dispatch for the four ring operations."""
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    if op == "pow":
        return f ** g
    raise ValueError(op)


def substitute(f: Poly, sigma: CoordChange) -> Poly:
    return sigma.apply(f)


def partial(f: Poly, j: int) -> Poly:
    return f.partial(j)


def integrate_in_var(f: Poly, j: int) -> Poly:
    return f.integrate(j)


def apply_derivation(d: Derivation, f: Poly) -> Poly:
    if d.vars != f.vars:
        raise StructuralError(f"ambient mismatch: {d.vars} vs {f.vars}")
    out = Poly.zero(f.vars)
    for j, c in enumerate(d.coefficients):
        if c.is_zero():
            continue
        df = f.partial(j)
        if not df.is_zero():
            out = out + c * df
    return out


def polys_in(vars, exprs: Iterable) -> list[Poly]:
    from .parsing import parse_poly
    return [e if isinstance(e, Poly) else parse_poly(e, vars) for e in exprs]
