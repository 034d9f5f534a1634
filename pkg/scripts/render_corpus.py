#!/usr/bin/env python3
"""Render every bundled artifact into a build directory.

For each scenario in scenarios/ this writes the initial-state SVG plus one
snapshot every N ticks of the simulation, and next to those the metamodel
class diagram (DOT) and feature spreadsheet (CSV):

    python3 scripts/render_corpus.py --out build/gallery --every 2
"""

from __future__ import annotations

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from bmod import (
    SimConfig,
    Simulation,
    ViewStyle,
    build_bmod_metamodel,
    export_class_diagram,
    export_spreadsheet,
    parse,
    render_scenario,
)

DEFAULT_SCENARIOS = os.path.join(os.path.dirname(__file__), "..", "scenarios")


def write(path: str, text: str) -> None:
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    print(f"wrote {path}")


def render_run(path: str, out_dir: str, style: ViewStyle, every: int, max_ticks: int) -> None:
    stem = os.path.splitext(os.path.basename(path))[0]
    with open(path, encoding="utf-8") as handle:
        result = parse(handle.read())
    if result.scenario is None:
        for diag in result.diagnostics:
            print(diag.render(path), file=sys.stderr)
        return
    write(os.path.join(out_dir, f"{stem}.t0000.svg"),
          render_scenario(result.scenario, style))
    sim = Simulation(result.scenario, SimConfig(max_ticks=max_ticks))
    while sim.active_people and sim.tick < max_ticks:
        sim.step()
        if sim.tick % every == 0 or not sim.active_people:
            write(os.path.join(out_dir, f"{stem}.t{sim.tick:04d}.svg"),
                  render_scenario(sim.scenario, style, sim))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--scenarios", default=DEFAULT_SCENARIOS)
    parser.add_argument("--out", default="build/gallery")
    parser.add_argument("--every", type=int, default=2, help="ticks between snapshots")
    parser.add_argument("--max-ticks", type=int, default=100)
    parser.add_argument("--style", metavar="FILE", help="JSON style overrides")
    args = parser.parse_args()

    style = ViewStyle.load(args.style) if args.style else ViewStyle()
    mm = build_bmod_metamodel()
    write(os.path.join(args.out, "bmod.dot"), export_class_diagram(mm))
    write(os.path.join(args.out, "bmod.csv"), export_spreadsheet(mm))

    names = sorted(n for n in os.listdir(args.scenarios) if n.endswith(".bmod"))
    if not names:
        print(f"no .bmod files in {args.scenarios}", file=sys.stderr)
        return 1
    for name in names:
        render_run(os.path.join(args.scenarios, name), args.out,
                   style, args.every, args.max_ticks)
    return 0


if __name__ == "__main__":
    sys.exit(main())
