"""Command-line front end.

Subcommands: ``check`` (alias ``validate``), ``simulate``, ``codegen``,
``export``, ``fmt``. Exit codes are a stable contract: 0 success, 1 semantic
errors (validation or snapshot problems), 2 usage or parse errors, 3 IO
errors. ``--config`` names a JSON object whose keys are flag names; explicit
flags win over config values, config values win over built-in defaults. All
file output goes through a temp-file-plus-rename so readers never observe a
half-written artifact.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

from .codegen import build_manifest, generate, list_templates
from .diagnostics import Diagnostic
from .meta import InterchangeError, build_bmod_metamodel, metamodel_from_json
from .parser import parse
from .serializer import serialize
from .sim import (
    POLICIES,
    InvalidScenarioError,
    SimConfig,
    Simulation,
    SimTerminatedError,
    trace_to_jsonl,
)
from .validator import validate
from .views import ViewStyle, export_class_diagram, export_spreadsheet, render_scenario

OK, SEMANTIC, USAGE, IO = 0, 1, 2, 3

VIEWS = ("classes", "spreadsheet", "scenario")


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8", errors="replace") as handle:
            return handle.read()
    except OSError as exc:
        raise CliFailure(IO, f"cannot read {path}: {exc}") from exc


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bmod-tmp-")
    except OSError as exc:
        raise CliFailure(IO, f"cannot write {path}: {exc}") from exc
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.chmod(tmp, 0o644)  # mkstemp defaults to owner-only
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise CliFailure(IO, f"cannot write {path}: {exc}") from exc


def _print_diags(diags: list[Diagnostic], path: str, stream) -> None:
    for diag in diags:
        print(diag.render(path), file=stream)


def _verbosity(args) -> int:
    if args.quiet:
        return 0
    if args.verbose:
        return 2
    return 1


def _load_config(args) -> dict:
    if not args.config:
        return {}
    text = read_text(args.config)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliFailure(USAGE, f"config {args.config}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise CliFailure(USAGE, f"config {args.config}: expected a JSON object")
    return doc


def _effective(args, config: dict, name: str, default, cast):
    value = getattr(args, name, None)
    if value is None:
        value = config.get(name)
    if value is None:
        return default
    try:
        return cast(value)
    except (TypeError, ValueError) as exc:
        raise CliFailure(USAGE, f"bad value for {name}: {value!r}") from exc


def _sim_config(args, config: dict) -> SimConfig:
    try:
        return SimConfig(
            seed=_effective(args, config, "seed", 0, int),
            max_ticks=_effective(args, config, "max_ticks", 10_000, int),
            fire_period=_effective(args, config, "fire_period", 1, int),
            policy=_effective(args, config, "policy", "signs_first", str),
        )
    except ValueError as exc:
        raise CliFailure(USAGE, str(exc)) from exc


def _load_scenario(path: str):
    """Parse and validate, or raise CliFailure with the right exit code."""
    result = parse(read_text(path))
    if result.scenario is None:
        _print_diags(result.diagnostics, path, sys.stderr)
        raise CliFailure(USAGE, f"{path}: does not parse")
    diags = validate(result.scenario)
    if any(d.is_error for d in diags):
        _print_diags(diags, path, sys.stderr)
        raise CliFailure(SEMANTIC, f"{path}: validation failed")
    return result.scenario


# --- check ---------------------------------------------------------------------

def cmd_check(args) -> int:
    verbosity = _verbosity(args)
    result = parse(read_text(args.path))
    if result.scenario is None:
        _print_diags(result.diagnostics, args.path, sys.stdout)
        return USAGE
    diags = validate(result.scenario)
    shown = diags if verbosity >= 1 else [d for d in diags if d.is_error]
    _print_diags(shown, args.path, sys.stdout)
    if any(d.is_error for d in diags):
        return SEMANTIC
    if verbosity >= 2 and not diags:
        rooms = sum(len(f.rooms) for f in result.scenario.floors)
        print(f"{args.path}: ok ({len(result.scenario.floors)} floor(s), {rooms} room(s))")
    return OK


# --- simulate --------------------------------------------------------------------

def _summary_line(result) -> str:
    return (f"ticks={result.ticks} evacuated={result.evacuated} "
            f"dead={result.dead} trapped={result.trapped}")


def _run_one(path: str, sim_config: SimConfig, out_dir: str | None):
    scenario = _load_scenario(path)
    try:
        sim = Simulation(scenario, sim_config)
    except InvalidScenarioError as exc:  # unreachable after _load_scenario, kept for safety
        _print_diags(exc.diagnostics, path, sys.stderr)
        raise CliFailure(SEMANTIC, f"{path}: validation failed") from exc
    result = sim.run()
    if out_dir is not None:
        stem = os.path.splitext(os.path.basename(path))[0]
        atomic_write(os.path.join(out_dir, f"{stem}.result.json"), result.to_json())
        atomic_write(os.path.join(out_dir, f"{stem}.trace.jsonl"), trace_to_jsonl(sim.trace))
    return result


def cmd_simulate(args) -> int:
    config = _load_config(args)
    sim_config = _sim_config(args, config)
    out_dir = args.out if args.out is not None else config.get("out")
    verbosity = _verbosity(args)

    if args.sweep:
        return _cmd_sweep(args, sim_config, out_dir, verbosity)

    if not args.path:
        raise CliFailure(USAGE, "simulate needs a scenario file or --sweep DIR")
    result = _run_one(args.path, sim_config, out_dir)
    if args.format == "json":
        sys.stdout.write(result.to_json())
    elif verbosity >= 1:
        print(_summary_line(result))
    return OK


def _cmd_sweep(args, sim_config: SimConfig, out_dir: str | None, verbosity: int) -> int:
    try:
        names = sorted(n for n in os.listdir(args.sweep) if n.endswith(".bmod"))
    except OSError as exc:
        raise CliFailure(IO, f"cannot read {args.sweep}: {exc}") from exc
    if not names:
        raise CliFailure(USAGE, f"{args.sweep}: no .bmod files to sweep")
    jobs = max(1, args.jobs or min(8, os.cpu_count() or 1))

    def work(name: str):
        path = os.path.join(args.sweep, name)
        try:
            return name, OK, _summary_line(_run_one(path, sim_config, out_dir))
        except CliFailure as exc:
            return name, exc.code, f"error: {exc.message}"

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        rows = list(pool.map(work, names))
    worst = OK
    for name, code, line in rows:
        worst = max(worst, code)
        if verbosity >= 1 or code != OK:
            print(f"{name}: {line}", file=sys.stdout if code == OK else sys.stderr)
    return worst


# --- codegen ---------------------------------------------------------------------

def _load_metamodel(args):
    if args.builtin is not None:
        if args.builtin != "bmod":
            raise CliFailure(USAGE, f"unknown builtin {args.builtin!r}; available: bmod")
        return build_bmod_metamodel(), "bmod"
    if not args.source:
        raise CliFailure(USAGE, "need a metamodel JSON file or --builtin bmod")
    try:
        mm = metamodel_from_json(read_text(args.source))
    except InterchangeError as exc:
        raise CliFailure(USAGE, f"{args.source}: {exc}") from exc
    return mm, os.path.splitext(os.path.basename(args.source))[0]


def cmd_codegen(args) -> int:
    config = _load_config(args)
    templates, template_warnings = list_templates()
    for warning in template_warnings:
        print(warning.render(), file=sys.stderr)
    name = _effective(args, config, "template", "java", str)
    if name not in templates:
        available = ", ".join(sorted(templates))
        raise CliFailure(USAGE, f"unknown template {name!r}; available: {available}")
    mm, _ = _load_metamodel(args)
    files, warnings = generate(mm, templates[name])
    for warning in warnings:
        print(warning.render(), file=sys.stderr)
    out_dir = args.out if args.out is not None else config.get("out") or "generated"
    target = os.path.join(out_dir, name)
    for fname, content in sorted(files.items()):
        atomic_write(os.path.join(target, fname), content)
    atomic_write(os.path.join(target, "manifest.json"), build_manifest(name, files))
    if _verbosity(args) >= 2:
        print(f"wrote {len(files)} file(s) and manifest.json to {target}")
    return OK


# --- export ----------------------------------------------------------------------

def _load_style(args, config: dict) -> ViewStyle:
    path = args.style if args.style is not None else config.get("style")
    if not path:
        return ViewStyle()
    try:
        return ViewStyle.load(path)
    except OSError as exc:
        raise CliFailure(IO, f"cannot read {path}: {exc}") from exc
    except (json.JSONDecodeError, ValueError) as exc:
        raise CliFailure(USAGE, f"{path}: bad style: {exc}") from exc


def cmd_export(args) -> int:
    config = _load_config(args)
    out_dir = args.out if args.out is not None else config.get("out") or "."
    view = args.view

    if view in ("classes", "spreadsheet"):
        mm, stem = _load_metamodel(args)
        if view == "classes":
            text, ext = export_class_diagram(mm), "dot"
        else:
            text, ext = export_spreadsheet(mm), "csv"
    else:
        if not args.source:
            raise CliFailure(USAGE, "export --view scenario needs a scenario file")
        style = _load_style(args, config)
        stem = os.path.splitext(os.path.basename(args.source))[0]
        sim = None
        if args.at_tick is not None:
            scenario = _load_scenario(args.source)
            sim = Simulation(scenario, _sim_config(args, config))
            for _ in range(args.at_tick):
                try:
                    sim.step()
                except SimTerminatedError:
                    break
        else:
            result = parse(read_text(args.source))
            if result.scenario is None:
                _print_diags(result.diagnostics, args.source, sys.stderr)
                raise CliFailure(USAGE, f"{args.source}: does not parse")
            scenario = result.scenario
        text, ext = render_scenario(scenario, style, sim), "svg"

    out_path = os.path.join(out_dir, f"{stem}.{ext}")
    atomic_write(out_path, text)
    if _verbosity(args) >= 2:
        print(f"wrote {out_path}")
    return OK


# --- fmt -------------------------------------------------------------------------

def cmd_fmt(args) -> int:
    worst = OK
    for path in args.paths:
        text = read_text(path)
        result = parse(text)
        if result.scenario is None:
            _print_diags(result.diagnostics, path, sys.stderr)
            worst = max(worst, USAGE)
            continue
        canonical = serialize(result.scenario)
        if args.in_place:
            if canonical != text:
                atomic_write(path, canonical)
        else:
            sys.stdout.write(canonical)
    return worst


# --- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--config", metavar="FILE", help="JSON file with default option values")
    volume = common.add_mutually_exclusive_group()
    volume.add_argument("--quiet", action="store_true", help="only report errors")
    volume.add_argument("--verbose", action="store_true", help="report extra detail")

    sim_flags = argparse.ArgumentParser(add_help=False)
    sim_flags.add_argument("--seed", type=int, metavar="N")
    sim_flags.add_argument("--max-ticks", type=int, metavar="N", dest="max_ticks")
    sim_flags.add_argument("--fire-period", type=int, metavar="N", dest="fire_period")
    sim_flags.add_argument("--policy", choices=POLICIES)

    parser = argparse.ArgumentParser(
        prog="bmod",
        description="Building-evacuation scenario toolchain: check, simulate, generate, export.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_check = sub.add_parser(
        "check", aliases=["validate"], parents=[common],
        help="parse and validate a scenario file",
    )
    p_check.add_argument("path", metavar="FILE")
    p_check.set_defaults(func=cmd_check)

    p_sim = sub.add_parser(
        "simulate", parents=[common, sim_flags],
        help="run a scenario to completion and report outcomes",
    )
    p_sim.add_argument("path", nargs="?", metavar="FILE")
    p_sim.add_argument("--sweep", metavar="DIR",
                       help="simulate every .bmod file in DIR")
    p_sim.add_argument("--jobs", type=int, metavar="N",
                       help="parallel workers for --sweep")
    p_sim.add_argument("--format", choices=("text", "json"), default="text")
    p_sim.set_defaults(func=cmd_simulate)

    p_gen = sub.add_parser(
        "codegen", parents=[common],
        help="generate classes with accessors from a metamodel",
    )
    p_gen.add_argument("source", nargs="?", metavar="METAMODEL_JSON")
    p_gen.add_argument("--builtin", metavar="NAME",
                       help="use a built-in metamodel (bmod)")
    p_gen.add_argument("--template", metavar="NAME")
    p_gen.set_defaults(func=cmd_codegen)

    p_exp = sub.add_parser(
        "export", parents=[common, sim_flags],
        help="write a class diagram, feature spreadsheet, or scenario picture",
    )
    p_exp.add_argument("source", nargs="?", metavar="FILE")
    p_exp.add_argument("--view", choices=VIEWS, required=True)
    p_exp.add_argument("--builtin", metavar="NAME",
                       help="use a built-in metamodel (bmod)")
    p_exp.add_argument("--at-tick", type=int, metavar="N", dest="at_tick",
                       help="simulate N steps and draw that state")
    p_exp.add_argument("--style", metavar="FILE", help="JSON style overrides")
    p_exp.set_defaults(func=cmd_export)

    p_fmt = sub.add_parser(
        "fmt", parents=[common],
        help="rewrite scenario files in canonical form",
    )
    p_fmt.add_argument("paths", nargs="+", metavar="FILE")
    p_fmt.add_argument("--in-place", action="store_true", dest="in_place")
    p_fmt.set_defaults(func=cmd_fmt)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliFailure as exc:
        print(f"bmod: {exc.message}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
