"""Command-line front end.

    wres invariant -v x,y -i "x^2+y^3"
    wres principalize -v x,y,z,t -i "x^2+y^2+(z*t)^2" --json tree.json --dot tree.dot
    wres verify -v x,y -i "x^2+y^3"

Exit codes: 1 parse error, 2 contract error, 3 verification failure,
4 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .blowup import controlled_transform, exceptional_restriction, make_center, weighted_blowup
from .driver import (ChartTree, Options, max_invariant_points, principalize,
                     resolve_hypersurface, verify_drop)
from .errors import ParseError, ResourceError, WresError
from .exactalg import format_rat
from .parsing import parse_point, parse_poly, parse_vars

COMMANDS = ("invariant", "center", "blowup", "principalize", "resolve", "verify")


@dataclass
class Request:
    command: str
    variables: tuple[str, ...]
    generators: list[str]
    max_rounds: int = 10
    transform: str = "controlled"
    at: list[str] = field(default_factory=list)
    json_path: str | None = None
    dot_path: str | None = None
    trace: bool = False

    def polys(self):
        return [parse_poly(g, self.variables) for g in self.generators]

    def points(self):
        return [parse_point(p, self.variables) for p in self.at]

    def to_argv(self) -> list[str]:
        argv = [self.command, "-v", ",".join(self.variables)]
        for g in self.generators:
            argv += ["-i", g]
        if self.max_rounds != 10:
            argv += ["--max-rounds", str(self.max_rounds)]
        if self.transform != "controlled":
            argv += ["--transform", self.transform]
        for p in self.at:
            argv += ["--at", p]
        if self.json_path:
            argv += ["--json", self.json_path]
        if self.dot_path:
            argv += ["--dot", self.dot_path]
        if self.trace:
            argv.append("--trace")
        return argv


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wres", description="Resolution invariants and weighted blow-ups over Q.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("-v", "--vars", required=True, help="comma-separated variable names")
    p.add_argument("-i", "--ideal", action="append", required=True,
                   help="generator expression (repeatable)")
    p.add_argument("--json", dest="json_path", metavar="PATH")
    p.add_argument("--dot", dest="dot_path", metavar="PATH")
    p.add_argument("--max-rounds", type=int, default=10)
    p.add_argument("--transform", choices=("controlled", "proper"), default="controlled")
    p.add_argument("--at", action="append", default=[], metavar="x=a,y=b",
                   help="extra rational candidate point (repeatable)")
    p.add_argument("--trace", action="store_true")
    return p


def parse_request(argv: Sequence[str]) -> Request:
    ns = _parser().parse_args(list(argv))
    req = Request(ns.command, parse_vars(ns.vars), list(ns.ideal), ns.max_rounds,
                  ns.transform, list(ns.at), ns.json_path, ns.dot_path, ns.trace)
    req.polys()
    req.points()
    if req.max_rounds < 0:
        raise ParseError("--max-rounds must be non-negative")
    return req


def _write(path: str | None, text: str):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(path: str | None, data):
    if path:
        _write(path, json.dumps(data, indent=2, ensure_ascii=False) + "\n")


def _describe_filtration(F) -> list[str]:
    lines = []
    for b in F.blocks:
        lines.append(f"  block {{{', '.join(F.names[v] for v in b.vars)}}} weight {format_rat(b.weight)}")
    if F.residual:
        lines.append(f"  residual {{{', '.join(F.names[v] for v in F.residual)}}}")
    return lines


def _point_text(names, p) -> str:
    return ", ".join(f"{n}={format_rat(x)}" for n, x in zip(names, p))


def _best(req: Request):
    gens = req.polys()
    m = len(req.variables)
    pts = [tuple([0] * m)] + req.points()
    return gens, max_invariant_points(gens, pts)[0]


def _cmd_invariant(req: Request, out) -> int:
    gens, (pt, res) = _best(req)
    print(f"inv = {res.invariant.format()}", file=out)
    print(f"terminated by {res.invariant.terminated_by.value}", file=out)
    if any(pt):
        print(f"at {_point_text(req.variables, pt)}", file=out)
    for line in _describe_filtration(res.filtration):
        print(line, file=out)
    if req.trace:
        for t in res.trace:
            print(f"  s={t.s} H={format_rat(t.H)} case {t.case}", file=out)
    _dump(req.json_path, {**res.to_json(), "point": [format_rat(x) for x in pt]})
    return 0


def _cmd_center(req: Request, out) -> int:
    gens, (pt, res) = _best(req)
    c = make_center(res, pt)
    print(f"inv = {res.invariant.format()}", file=out)
    for vs, a in c.blocks:
        print(f"  {{{', '.join(c.ambient[v] for v in vs)}}} weight {a}", file=out)
    if c.residual:
        print(f"  residual {{{', '.join(c.ambient[v] for v in c.residual)}}} (not in the center)", file=out)
    print(f"threshold {c.threshold}", file=out)
    if not c.is_trivial_change():
        for n, p in zip(c.ambient, c.to_block):
            print(f"  {n} = {p}", file=out)
    _dump(req.json_path, c.to_json())
    return 0


def _cmd_blowup(req: Request, out) -> int:
    gens, (pt, res) = _best(req)
    c = make_center(res, pt)
    charts = []
    for ch in weighted_blowup(c):
        tr = controlled_transform(gens, ch, c, req.transform)
        restr = exceptional_restriction(tr.generators, ch)
        subst = ", ".join(f"{k}={v}" for k, v in ch.to_json()["subst"].items())
        print(f"{ch.name}-chart: {subst}  (group order {ch.group_order})", file=out)
        print(f"  transform: {', '.join(map(str, tr.generators))}", file=out)
        print(f"  on the exceptional divisor: {', '.join(map(str, restr))}", file=out)
        charts.append({**ch.to_json(), "variables": list(ch.variables),
                       "transform": [str(g) for g in tr.generators],
                       "exceptional_restriction": [str(g) for g in restr]})
    _dump(req.json_path, {"center": c.to_json(), "charts": charts})
    return 0


def _print_tree(tree: ChartTree, out):
    for n in sorted(tree.nodes, key=lambda n: n.id):
        parent = "-" if n.parent_id is None else str(n.parent_id)
        gens = "; ".join(map(str, n.generators))
        print(f"[{n.id}] parent {parent} round {n.round}: {n.label}  ({gens})", file=out)
        if n.note:
            print(f"      {n.note}", file=out)


def _tree(req: Request, tree_fn) -> ChartTree:
    opts = Options(max_rounds=req.max_rounds, transform=req.transform,
                   candidates=req.points())
    return tree_fn(req.polys(), opts)


def _run_tree(req: Request, out, tree_fn, verify: bool) -> int:
    try:
        tree = _tree(req, tree_fn)
    except ResourceError as e:
        if isinstance(e.partial, ChartTree):
            _print_tree(e.partial, out)
            _dump(req.json_path, e.partial.to_json())
            _write(req.dot_path, e.partial.to_dot())
        raise
    _print_tree(tree, out)
    data = tree.to_json()
    if verify:
        report = verify_drop(tree, raise_on_failure=False)
        data["verification"] = report.to_json()
        if req.trace:
            for c in report.comparisons:
                mark = "<" if c.strict else "NOT <"
                print(f"  {c.child} {mark} {c.parent} at {c.where}: "
                      f"{c.child_invariant} vs {c.parent_invariant}", file=out)
        print(report.summary(), file=out)
        _dump(req.json_path, data)
        _write(req.dot_path, tree.to_dot())
        if not report.ok:
            verify_drop(tree)  # raises with the failing edge
        return 0
    _dump(req.json_path, data)
    _write(req.dot_path, tree.to_dot())
    return 0


def _resolve(gens, opts):
    if len(gens) != 1:
        raise ParseError("resolve takes exactly one generator")
    opts.transform = "proper"
    return resolve_hypersurface(gens[0], opts)


def _principalize(gens, opts):
    return principalize(gens, opts=opts)


def run(req: Request, out=None) -> int:
    out = out or sys.stdout
    if req.command == "invariant":
        return _cmd_invariant(req, out)
    if req.command == "center":
        return _cmd_center(req, out)
    if req.command == "blowup":
        return _cmd_blowup(req, out)
    if req.command == "principalize":
        return _run_tree(req, out, _principalize, verify=False)
    if req.command == "resolve":
        return _run_tree(req, out, _resolve, verify=False)
    if req.command == "verify":
        fn = _resolve if req.transform == "proper" else _principalize
        return _run_tree(req, out, fn, verify=True)
    raise ParseError(f"unknown command {req.command!r}")


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        return run(parse_request(argv))
    except WresError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
