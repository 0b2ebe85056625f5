#!/usr/bin/env python3
"""Run verify_theorem1 and verify_corollary1 over a grid of (n, e).

Each cell uses the Fermat witness and a few random generic models.  A
mismatch with the hypotheses satisfied is printed loudly and makes the
script exit with status 1.
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field
from typing import List, Tuple

from jacsyz.ring import GF, QQ
from jacsyz.toric import ToricModel, random_generic, verify_corollary1, verify_theorem1


@dataclass
class GridConfig:
    cells: List[Tuple[int, int]] = field(default_factory=lambda: [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2)])
    random_models: int = 3
    bound: int = 10
    seed: int = 0
    field: str = "fp"


@dataclass
class CellResult:
    n: int
    e: int
    label: str
    hypotheses: bool
    theorem: bool
    corollary: bool
    seconds: float


def run_cell(n: int, e: int, cfg: GridConfig) -> List[CellResult]:
    fld = GF() if cfg.field == "fp" else QQ
    models = [("fermat", ToricModel.fermat(n, e, fld))]
    for k in range(cfg.random_models):
        seed = cfg.seed + 1000 * k + 17 * n + e
        models.append((f"seed={seed}", random_generic(n, e, seed, cfg.bound, fld=fld)[0]))
    out = []
    for label, m in models:
        t0 = time.perf_counter()
        thm = verify_theorem1(m)
        cor = verify_corollary1(m)
        out.append(CellResult(n, e, label, thm.hypotheses_hold, thm.match, cor.match,
                              round(time.perf_counter() - t0, 2)))
    return out


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cell", action="append", metavar="N,E", help="grid cell, repeatable")
    p.add_argument("--random-models", type=int, default=3)
    p.add_argument("--bound", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", choices=["q", "fp"], default="fp")
    p.add_argument("--json", action="store_true")
    a = p.parse_args(argv)
    cfg = GridConfig(random_models=a.random_models, bound=a.bound, seed=a.seed, field=a.field)
    if a.cell:
        cfg.cells = [tuple(int(x) for x in c.split(",")) for c in a.cell]
    results = [r for n, e in cfg.cells for r in run_cell(n, e, cfg)]
    failed = [r for r in results if r.hypotheses and not (r.theorem and r.corollary)]
    if a.json:
        print(json.dumps({"config": asdict(cfg), "results": [asdict(r) for r in results]}, indent=2))
    else:
        print(f"{'n':>2} {'e':>2} {'model':<12} {'hyp':>4} {'thm':>4} {'cor':>4} {'sec':>6}")
        for r in results:
            print(f"{r.n:>2} {r.e:>2} {r.label:<12} {r.hypotheses!s:>4.4} {r.theorem!s:>4.4} "
                  f"{r.corollary!s:>4.4} {r.seconds:>6}")
    for r in failed:
        print(f"MISMATCH with hypotheses satisfied: n={r.n} e={r.e} {r.label}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
