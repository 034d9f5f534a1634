#!/usr/bin/env python3
"""Simulate every scenario in a directory under both movement policies.

Prints one row per (scenario, policy) with the outcome counts, and can dump
the same table as JSON for downstream analysis:

    python3 scripts/run_sweep.py scenarios/ --max-ticks 500 --json out.json
"""

from __future__ import annotations

import argparse
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from bmod import SimConfig, Simulation, parse
from bmod.sim import POLICIES


def run_file(path: str, config: SimConfig) -> dict | None:
    with open(path, encoding="utf-8") as handle:
        result = parse(handle.read())
    if result.scenario is None:
        for diag in result.diagnostics:
            print(diag.render(path), file=sys.stderr)
        return None
    sim = Simulation(result.scenario, config)
    outcome = sim.run()
    return {
        "scenario": os.path.basename(path),
        "policy": config.policy,
        "ticks": outcome.ticks,
        "evacuated": outcome.evacuated,
        "dead": outcome.dead,
        "trapped": outcome.trapped,
        "burning_cells": outcome.burning,
        "trace_events": len(sim.trace),
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("directory", help="directory of .bmod files")
    parser.add_argument("--max-ticks", type=int, default=10_000)
    parser.add_argument("--fire-period", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", metavar="FILE", help="also write rows as JSON")
    args = parser.parse_args()

    names = sorted(n for n in os.listdir(args.directory) if n.endswith(".bmod"))
    if not names:
        print(f"no .bmod files in {args.directory}", file=sys.stderr)
        return 1

    rows = []
    for name in names:
        for policy in POLICIES:
            config = SimConfig(seed=args.seed, max_ticks=args.max_ticks,
                               fire_period=args.fire_period, policy=policy)
            row = run_file(os.path.join(args.directory, name), config)
            if row is not None:
                rows.append(row)

    width = max(len(r["scenario"]) for r in rows)
    header = f"{'scenario':<{width}}  {'policy':<14} {'ticks':>5} {'evac':>4} {'dead':>4} {'trap':>4}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(f"{r['scenario']:<{width}}  {r['policy']:<14} {r['ticks']:>5} "
              f"{r['evacuated']:>4} {r['dead']:>4} {r['trapped']:>4}")

    if args.json:
        with open(args.json, "w", encoding="utf-8") as handle:
            json.dump(rows, handle, indent=2, sort_keys=True)
            handle.write("\n")
        print(f"\nwrote {len(rows)} rows to {args.json}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
