"""Run the example suite end to end and write one JSON record per ideal.

    python scripts/run_suite.py --out results/suite.json
    python scripts/run_suite.py --transform proper --max-rounds 6

Each record holds the invariant, the center, the principalization (or
resolution) tree and its drop verification, plus wall-clock timings.
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from wres.blowup import make_center
from wres.driver import Options, principalize, resolve_hypersurface, verify_drop
from wres.errors import WresError
from wres.invariant import compute_invariant
from wres.parsing import parse_poly

XY, XYZ, XYZT = ("x", "y"), ("x", "y", "z"), ("x", "y", "z", "t")

DEFAULT_SUITE = [
    ("x^2+y^3", XY), ("x^2+y^2+z^2*t^2", XYZT), ("x^2+y^3", XYZ), ("x", XY),
    ("x^2+y^2*z", XYZ), ("x^2+y^5", XY), ("x^2+y^5", XYZ), ("x^3+y^4", XY),
    ("x^2-y^2*z", XYZ), ("x^2*y+y^4", XY), ("x^2+y^4", XY), ("x^3+y^5", XY),
    ("x*y", XY), ("x^2+y^3+z^4", XYZ), ("x^2+y^2+z^3", XYZ), ("x^3+y^3+z^3", XYZ),
    ("x^2+y^7", XY), ("x*y*z", XYZ), ("x^2+y^3*z^2", XYZ), ("x^4+y^6", XY),
]


@dataclass
class SuiteConfig:
    out: Path = Path("results/suite.json")
    transform: str = "controlled"
    max_rounds: int = 10
    workers: int = 1
    # (generator, variables); empty means DEFAULT_SUITE
    ideals: list = field(default_factory=list)

    @classmethod
    def from_args(cls, argv=None) -> "SuiteConfig":
        p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
        p.add_argument("--out", type=Path, default=cls.out)
        p.add_argument("--transform", choices=("controlled", "proper"), default=cls.transform)
        p.add_argument("--max-rounds", type=int, default=cls.max_rounds)
        p.add_argument("--workers", type=int, default=cls.workers)
        p.add_argument("--ideal", nargs=2, action="append", metavar=("POLY", "VARS"),
                       help="extra ideal, e.g. --ideal 'x^2+y^3' x,y (replaces the default suite)")
        ns = p.parse_args(argv)
        ideals = [(f, tuple(v.split(","))) for f, v in ns.ideal or []]
        return cls(ns.out, ns.transform, ns.max_rounds, ns.workers, ideals)


def run_one(text: str, names: tuple, cfg: SuiteConfig) -> dict:
    rec = {"ideal": text, "variables": list(names)}
    f = parse_poly(text, names)
    t0 = time.perf_counter()
    try:
        res = compute_invariant([f])
        rec["invariant"] = res.to_json()
        rec["center"] = make_center(res).to_json()
        rec["t_invariant"] = time.perf_counter() - t0
        opts = Options(max_rounds=cfg.max_rounds, transform=cfg.transform, workers=cfg.workers)
        t1 = time.perf_counter()
        tree = resolve_hypersurface(f, opts) if cfg.transform == "proper" else principalize([f], opts=opts)
        rec["t_tree"] = time.perf_counter() - t1
        report = verify_drop(tree, raise_on_failure=False)
        rec["tree"] = tree.to_json()
        rec["verification"] = report.to_json()
        rec["ok"] = report.ok
    except WresError as e:
        rec["error"] = f"{type(e).__name__}: {e}"
        rec["ok"] = False
    return rec


def main(argv=None) -> int:
    cfg = SuiteConfig.from_args(argv)
    suite = cfg.ideals or DEFAULT_SUITE
    records = []
    for text, names in suite:
        rec = run_one(text, names, cfg)
        records.append(rec)
        inv = rec.get("invariant", {}).get("invariant", {}).get("entries", "-")
        status = "ok" if rec["ok"] else rec.get("error", "drop FAILED")
        nodes = len(rec.get("tree", {}).get("nodes", []))
        print(f"{text:>18} in {','.join(names):8} inv=({', '.join(inv)}) nodes={nodes} {status}")
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    meta = {k: str(v) if isinstance(v, Path) else v for k, v in asdict(cfg).items()}
    cfg.out.write_text(json.dumps({"config": meta, "records": records}, indent=2, default=str))
    print(f"wrote {cfg.out}")
    return 0 if all(r["ok"] for r in records) else 3


if __name__ == "__main__":
    raise SystemExit(main())
