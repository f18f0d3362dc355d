"""Check that random unimodular coordinate changes leave invariants unchanged.

    python scripts/invariance_sweep.py --trials 50 --seed 7
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from wres.exactalg import CoordChange
from wres.invariant import compute_invariant
from wres.parsing import parse_poly

from run_suite import DEFAULT_SUITE


@dataclass
class SweepConfig:
    trials: int = 20
    seed: int = 2024
    # elementary row operations per change, times the dimension
    mixing: int = 3
    max_coeff: int = 3


def unimodular(n: int, rng: random.Random, cfg: SweepConfig) -> list[list[int]]:
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(cfg.mixing * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([k for k in range(-cfg.max_coeff, cfg.max_coeff + 1) if k])
        M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return M


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=SweepConfig.trials)
    p.add_argument("--seed", type=int, default=SweepConfig.seed)
    p.add_argument("--mixing", type=int, default=SweepConfig.mixing)
    ns = p.parse_args(argv)
    cfg = SweepConfig(ns.trials, ns.seed, ns.mixing)
    rng = random.Random(cfg.seed)
    total_bad = 0
    for text, names in DEFAULT_SUITE:
        f = parse_poly(text, names)
        base = compute_invariant([f]).invariant
        t0 = time.perf_counter()
        bad = 0
        for _ in range(cfg.trials):
            sigma = CoordChange.linear(names, unimodular(len(names), rng, cfg))
            bad += compute_invariant([sigma.apply(f)]).invariant.entries != base.entries
        total_bad += bad
        print(f"{text:>18}  inv={base}  mismatches={bad}/{cfg.trials}  "
              f"{time.perf_counter() - t0:.2f}s")
    return 1 if total_bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
