#!/usr/bin/env python3
"""Empirical acceptance rates of the normal-crossing check on random dense g.

Reports, per (n, e, bound), the fraction of raw samples that are normal
crossing, how often the regular-sequence check agrees, and the mean number
of attempts random_generic needs.  No density claim is made from these.
"""
from __future__ import annotations

import argparse
import json
import random
import time
from dataclasses import asdict, dataclass, field
from typing import List

from jacsyz.ring import GF, QQ
from jacsyz.toric import GenericityNotFound, check_normal_crossing, check_regular_sequence, random_generic, random_model


@dataclass
class RateConfig:
    ns: List[int] = field(default_factory=lambda: [2])
    es: List[int] = field(default_factory=lambda: [1, 2, 3])
    bounds: List[int] = field(default_factory=lambda: [1, 2, 10])
    samples: int = 100
    seed: int = 0
    field: str = "q"


@dataclass
class RateRow:
    n: int
    e: int
    bound: int
    samples: int
    nc_rate: float
    rs_rate: float
    nc_without_rs: int
    mean_attempts: float
    not_found: int
    seconds: float


def measure(n: int, e: int, bound: int, cfg: RateConfig) -> RateRow:
    fld = GF() if cfg.field == "fp" else QQ
    rng = random.Random(hash((cfg.seed, n, e, bound)) & 0xFFFFFFFF)
    t0 = time.perf_counter()
    nc = rs = bad = 0
    for _ in range(cfg.samples):
        m = random_model(n, e, rng, bound, fld)
        if m is None:
            continue
        a = check_normal_crossing(m)[0]
        b = check_regular_sequence(m)
        nc += a
        rs += b
        bad += a and not b
    attempts, missing = [], 0
    for s in range(cfg.samples):
        try:
            attempts.append(random_generic(n, e, cfg.seed * 100_003 + s, bound, fld=fld)[1])
        except GenericityNotFound:
            missing += 1
    mean = sum(attempts) / len(attempts) if attempts else float("nan")
    return RateRow(n, e, bound, cfg.samples, nc / cfg.samples, rs / cfg.samples, bad, mean, missing,
                   round(time.perf_counter() - t0, 2))


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, nargs="+", default=[2])
    p.add_argument("--e", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--bound", type=int, nargs="+", default=[1, 2, 10])
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--field", choices=["q", "fp"], default="q")
    p.add_argument("--json", action="store_true")
    a = p.parse_args(argv)
    cfg = RateConfig(a.n, a.e, a.bound, a.samples, a.seed, a.field)
    rows = [measure(n, e, b, cfg) for n in cfg.ns for e in cfg.es for b in cfg.bounds]
    if a.json:
        print(json.dumps({"config": asdict(cfg), "rows": [asdict(r) for r in rows]}, indent=2))
        return 0
    print(f"{'n':>2} {'e':>2} {'bound':>5} {'NC':>6} {'RS':>6} {'NC&!RS':>6} {'attempts':>8} {'miss':>4} {'sec':>6}")
    for r in rows:
        print(f"{r.n:>2} {r.e:>2} {r.bound:>5} {r.nc_rate:>6.2f} {r.rs_rate:>6.2f} {r.nc_without_rs:>6} "
              f"{r.mean_attempts:>8.2f} {r.not_found:>4} {r.seconds:>6}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
