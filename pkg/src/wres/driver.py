"""Principalization and hypersurface resolution over a tree of charts.

Each node holds generators in its chart's variables. An unfinished node is
expanded at the candidate point of maximal invariant (the chart origin unless
more candidates are given): its center is blown up and every chart becomes a
child. Node ids are assigned breadth-first in chart order, whatever the
execution order of sibling computations.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import sympy

from .blowup import (Center, Chart, TRANSFORM_MODES, controlled_transform, make_center,
                     weighted_blowup)
from .errors import ContractError, ResourceError, VerificationError, WresError
from .exactalg import Poly, format_rat, identity_images, rat
from .invariant import (Invariant, InvariantResult, Termination, compute_invariant,
                        integerize, lex_compare)


class Status(str, enum.Enum):
    ACTIVE = "Active"
    PRINCIPAL = "Principal"
    SMOOTH = "Smooth"
    PRUNED = "Pruned"


@dataclass
class Options:
    max_rounds: int = 10
    transform: str = "controlled"
    # extra rational points tried at the root, as full coordinate tuples
    candidates: list = field(default_factory=list)
    workers: int = 1
    max_theta_steps: int | None = None

    def __post_init__(self):
        if self.transform not in TRANSFORM_MODES:
            raise ContractError(f"unknown transform mode {self.transform!r}")
        if self.max_rounds < 0:
            raise ContractError("max_rounds must be non-negative")


@dataclass
class Node:
    id: int
    parent_id: int | None
    round: int
    variables: tuple[str, ...]
    generators: list[Poly]
    chart: Chart | None = None
    result: InvariantResult | None = None
    status: Status = Status.ACTIVE
    center: Center | None = None
    point: tuple[Fraction, ...] | None = None
    exceptional: tuple[str, ...] = ()
    note: str = ""

    @property
    def invariant(self) -> Invariant | None:
        return self.result.invariant if self.result is not None else None

    @property
    def label(self) -> str:
        chart = "root" if self.chart is None else f"{self.chart.name}-chart"
        inv = self.invariant.format() if self.invariant is not None else "-"
        return f"{chart} / {inv} / {self.status.value}"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "parent_id": self.parent_id,
            "round": self.round,
            "variables": list(self.variables),
            "chart": self.chart.to_json() if self.chart is not None else None,
            "generators": [str(g) for g in self.generators],
            "invariant": self.invariant.to_json() if self.invariant is not None else None,
            "status": self.status.value,
            "center": self.center.to_json() if self.center is not None else None,
            "exceptional": list(self.exceptional),
            **({"note": self.note} if self.note else {}),
        }


@dataclass
class ChartTree:
    nodes: list[Node]
    m: int
    transform: str = "controlled"

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def node(self, i: int) -> Node:
        return self.nodes[i]

    def children(self, node: Node) -> list[Node]:
        return [n for n in self.nodes if n.parent_id == node.id]

    def edges(self) -> list[tuple[Node, Node]]:
        return [(self.nodes[n.parent_id], n) for n in self.nodes if n.parent_id is not None]

    def leaves(self) -> list[Node]:
        parents = {n.parent_id for n in self.nodes}
        return [n for n in self.nodes if n.id not in parents]

    def rounds(self) -> int:
        return max((n.round for n in self.nodes), default=0)

    def branches(self) -> list[list[Node]]:
        out = []
        for leaf in self.leaves():
            path = [leaf]
            while path[-1].parent_id is not None:
                path.append(self.nodes[path[-1].parent_id])
            out.append(path[::-1])
        return out

    def to_json(self) -> dict:
        return {"m": self.m, "transform": self.transform,
                "nodes": [n.to_json() for n in sorted(self.nodes, key=lambda n: n.id)]}

    def to_dot(self) -> str:
        lines = ["digraph charts {"]
        for n in sorted(self.nodes, key=lambda n: n.id):
            label = n.label.replace('"', '\\"')
            lines.append(f'  n{n.id} [label="{label}"];')
        for n in sorted(self.nodes, key=lambda n: n.id):
            if n.parent_id is not None:
                lines.append(f"  n{n.parent_id} -> n{n.id};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# --- node classification ---------------------------------------------------

def _monomial_in(f: Poly, allowed: set[int]):
    """Exponent of the largest monomial in ``allowed`` variables dividing f."""
    if f.is_zero():
        return None
    n = f.nvars
    return tuple(min(e[j] for e in f.terms) if j in allowed else 0 for j in range(n))


def _divide_monomial(f: Poly, mono) -> Poly:
    return Poly(f.vars, {tuple(a - b for a, b in zip(e, mono)): c for e, c in f.terms.items()})


def is_principal(gens: Sequence[Poly], exceptional: Sequence[str] = ()) -> bool:
    """A generator is a unit at the origin, or is an exceptional monomial times
    a unit and that monomial divides every other generator."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    if any(g.is_unit_at_origin() for g in gens):
        return True
    names = gens[0].vars
    allowed = {names.index(e) for e in exceptional if e in names}
    if not allowed:
        return False
    for g in gens:
        mono = _monomial_in(g, allowed)
        if not any(mono) or not _divide_monomial(g, mono).is_unit_at_origin():
            continue
        if all(all(all(a >= b for a, b in zip(e, mono)) for e in h.terms) for h in gens):
            return True
    return False


def is_smooth_at_origin(f: Poly) -> bool:
    """Jacobian criterion: f or one of its first partials is a unit at the origin."""
    if f.is_unit_at_origin():
        return True
    return any(f.partial(j).is_unit_at_origin() for j in range(f.nvars))


def check_reduced(f: Poly) -> None:
    """gcd(f, df/dx_1, ..., df/dx_m) must be constant."""
    syms = sympy.symbols([f"v{j}" for j in range(f.nvars)])
    expr = _to_sympy(f, syms)
    g = expr
    for s in syms:
        g = sympy.gcd(g, sympy.diff(expr, s))
        if g.is_number:
            return
    if not sympy.Poly(g, *syms).is_ground:
        raise ContractError(f"{f} is not reduced: shares the factor {g} with its partials")


def _to_sympy(f: Poly, syms):
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator)
                       * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
                       for e, c in f.terms.items()])


# --- candidate points ----------------------------------------------------------

def invariant_at(gens: Sequence[Poly], point=None, **kw) -> InvariantResult:
    gens = list(gens)
    if point is not None and any(rat(p) for p in point):
        gens = [g.shift(point) for g in gens]
    return compute_invariant(gens, **kw)


def max_invariant_points(I: Sequence[Poly], candidates: Sequence, **kw):
    """Candidates (with their results) whose invariant is lexicographically maximal."""
    scored = []
    for p in candidates:
        p = tuple(rat(x) for x in p)
        scored.append((p, invariant_at(I, p, **kw)))
    best = []
    for p, r in scored:
        if not best:
            best = [(p, r)]
            continue
        c = lex_compare(r.invariant, best[0][1].invariant)
        if c > 0:
            best = [(p, r)]
        elif c == 0:
            best.append((p, r))
    return best


# --- the loop -------------------------------------------------------------------

def _child_exceptional(parent: Node, chart: Chart, center: Center) -> tuple[str, ...]:
    """Exceptional coordinates of a child: the new parameter plus earlier ones
    that are still plain coordinates through the center's change of variables."""
    out = [chart.exceptional]
    for e in parent.exceptional:
        j = parent.variables.index(e)
        if center.to_block[j] != Poly.var(parent.variables, j):
            continue
        if e in chart.renamed:
            out.append(chart.renamed[e])
    return tuple(out)


def _expand(node: Node, opts: Options, done: Callable[[Node], bool], round_: int):
    """Compute the node's invariant, classify it, and build its children."""
    m = len(node.variables)
    kw = {"max_theta_steps": opts.max_theta_steps}
    if done(node):
        node.result = compute_invariant(node.generators, **kw)
        return []
    pts = [(Fraction(0),) * m]
    if node.parent_id is None:
        pts += [tuple(rat(x) for x in p) for p in opts.candidates]
    best = max_invariant_points(node.generators, pts, **kw)
    point, res = best[0]
    node.result = res
    node.point = point
    if res.invariant.terminated_by == Termination.UNIT_IDEAL:
        node.status = Status.PRINCIPAL
        return []
    if res.coord_change is not None and res.coord_change.inverse is None:
        node.status = Status.PRUNED
        node.note = ("smooth center with no polynomial block coordinates: "
                     + ("blowing up the divisor gives the unit ideal"
                        if len(node.generators) == 1 else "not expanded"))
        return []
    center = make_center(res, point)
    node.center = center
    children = []
    for ch in weighted_blowup(center):
        tr = controlled_transform(node.generators, ch, center, opts.transform)
        child = Node(-1, node.id, round_, ch.variables, tr.generators, ch)
        child.exceptional = _child_exceptional(node, ch, center)
        children.append(child)
    return children


def _run(gens: Sequence[Poly], opts: Options, done: Callable[[Node], bool],
         leaf_status: Status) -> ChartTree:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ContractError("the zero ideal cannot be principalized")
    names = gens[0].vars
    root = Node(0, None, 0, names, list(gens))
    tree = ChartTree([root], len(names), opts.transform)
    frontier = [root]
    pool = ThreadPoolExecutor(opts.workers) if opts.workers > 1 else None

    origin = (Fraction(0),) * len(names)
    cands = [tuple(rat(x) for x in p) for p in opts.candidates]

    def finished(n: Node) -> bool:
        # a root whose worst point is a user candidate is never done at the origin
        if n.parent_id is None and cands:
            (pt, res), *_ = max_invariant_points(n.generators, [origin] + cands,
                                                 max_theta_steps=opts.max_theta_steps)
            if pt != origin and not res.invariant.is_zero():
                return False
        return done(n)

    def mark(n: Node):
        if finished(n):
            n.status = leaf_status

    try:
        round_ = 0
        while frontier:
            for n in frontier:
                mark(n)
            pending = [n for n in frontier if n.status == Status.ACTIVE]
            if pending and round_ >= opts.max_rounds:
                for n in frontier:
                    if n.result is None:
                        try:
                            n.result = compute_invariant(n.generators, max_theta_steps=opts.max_theta_steps)
                        except WresError:
                            pass
                raise ResourceError(
                    f"{len(pending)} chart(s) still unresolved after {opts.max_rounds} round(s)",
                    partial=tree)
            round_ += 1
            if pool is not None:
                results = list(pool.map(lambda n: _expand(n, opts, finished, round_), frontier))
            else:
                results = [_expand(n, opts, finished, round_) for n in frontier]
            nxt = []
            for kids in results:
                for k in kids:
                    k.id = len(tree.nodes)
                    tree.nodes.append(k)
                    nxt.append(k)
            frontier = nxt
    except ResourceError as e:
        if e.partial is None or not isinstance(e.partial, ChartTree):
            e.partial = tree
        raise
    finally:
        if pool is not None:
            pool.shutdown()
    return tree


def principalize(I: Sequence[Poly], m: int | None = None, opts: Options | None = None) -> ChartTree:
    """Blow up weighted centers until every chart origin sees a principal ideal."""
    opts = opts or Options()
    if m is not None and I and m != I[0].nvars:
        raise ContractError("dimension does not match the generators")
    return _run(I, opts, lambda n: is_principal(n.generators, n.exceptional), Status.PRINCIPAL)


def resolve_hypersurface(f: Poly, opts: Options | None = None) -> ChartTree:
    """Proper-transform chain until the hypersurface is smooth at every chart origin."""
    opts = opts or Options(transform="proper")
    if opts.transform != "proper":
        opts = Options(opts.max_rounds, "proper", opts.candidates, opts.workers,
                       opts.max_theta_steps)
    if f.is_zero():
        raise ContractError("the zero polynomial is not a hypersurface")
    if f.is_unit_at_origin() and not f.variables_used():
        raise ContractError("a constant is not a hypersurface")
    check_reduced(f)
    return _run([f], opts, lambda n: is_smooth_at_origin(n.generators[0]), Status.SMOOTH)


# --- verification -----------------------------------------------------------------

@dataclass
class Comparison:
    parent: int
    child: int
    where: str
    parent_invariant: Invariant
    child_invariant: Invariant
    strict: bool

    def to_json(self) -> dict:
        return {"parent": self.parent, "child": self.child, "at": self.where,
                "parent_invariant": self.parent_invariant.to_json(),
                "child_invariant": self.child_invariant.to_json(),
                "strict_drop": self.strict}


@dataclass
class DropReport:
    comparisons: list[Comparison]
    edges: int

    @property
    def ok(self) -> bool:
        return all(c.strict for c in self.comparisons)

    def failures(self) -> list[Comparison]:
        return [c for c in self.comparisons if not c.strict]

    def summary(self) -> str:
        if self.ok:
            return f"all {self.edges} edges: strict drop"
        return f"{len(self.failures())} of {len(self.comparisons)} comparisons failed"

    def to_json(self) -> dict:
        return {"edges": self.edges, "ok": self.ok,
                "comparisons": [c.to_json() for c in self.comparisons]}


def default_samples(chart_vars: Sequence[str]) -> list[tuple[Fraction, ...]]:
    """Deterministic rational points on the exceptional divisor (u = 0)."""
    n = len(chart_vars)
    pts = []
    for c in (Fraction(1), Fraction(-1), Fraction(1, 2)):
        pts.append((Fraction(0),) + (c,) * (n - 1))
    for j in range(1, n):
        p = [Fraction(0)] * n
        p[j] = Fraction(2)
        pts.append(tuple(p))
    return list(dict.fromkeys(pts))


def verify_drop(tree: ChartTree, samples: dict | None = None, use_defaults: bool = True,
                raise_on_failure: bool = True, max_theta_steps: int | None = None) -> DropReport:
    """Compare every child invariant with its parent's, at the child origin and
    at rational sample points on the exceptional divisor.

    ``samples`` maps a node id to extra points (tuples in the child's
    variables); points with nonzero exceptional coordinate are rejected.
    """
    samples = samples or {}
    comps = []
    edges = tree.edges()
    for parent, child in edges:
        p_inv = parent.invariant
        c_inv = child.invariant
        if c_inv is None:
            c_inv = compute_invariant(child.generators, max_theta_steps=max_theta_steps).invariant
        pad = _pad(p_inv, c_inv)
        comps.append(Comparison(parent.id, child.id, "origin", pad[0], pad[1],
                                lex_compare(*pad) > 0))
        pts = list(samples.get(child.id, []))
        if use_defaults:
            pts += default_samples(child.variables)
        for p in pts:
            p = tuple(rat(x) for x in p)
            if p[0] != 0:
                raise ContractError(f"sample point {p} is not on the exceptional divisor")
            if not any(p):
                continue
            r = invariant_at(child.generators, p, max_theta_steps=max_theta_steps)
            pad = _pad(p_inv, r.invariant)
            where = "(" + ", ".join(f"{v}={format_rat(x)}" for v, x in zip(child.variables, p)) + ")"
            comps.append(Comparison(parent.id, child.id, where, pad[0], pad[1],
                                    lex_compare(*pad) > 0))
    report = DropReport(comps, len(edges))
    if raise_on_failure and not report.ok:
        bad = report.failures()[0]
        raise VerificationError(
            f"no strict drop on edge {bad.parent} -> {bad.child} at {bad.where}: "
            f"{bad.parent_invariant} vs {bad.child_invariant}")
    return report


def _pad(a: Invariant, b: Invariant):
    # charts keep the ambient dimension, so lengths agree; guard anyway
    if len(a.entries) != len(b.entries):
        raise VerificationError("invariants of different lengths along an edge")
    return a, b


def integerized_branches(tree: ChartTree) -> list[list[tuple[int, ...]]]:
    return [[integerize(n.invariant) for n in path if n.invariant is not None]
            for path in tree.branches()]
