"""End-to-end command-line behavior through real subprocesses."""

from __future__ import annotations

import json
import os
import stat
import subprocess
import sys

import pytest

from conftest import CORRIDOR, SCENARIO_DIR, SEALED, TWO_ROOMS

OK, SEMANTIC, USAGE, IO_ERROR = 0, 1, 2, 3


def bmod(*args, cwd=None, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run(
        [sys.executable, "-m", "bmod", *args],
        capture_output=True, text=True, cwd=cwd, env=full_env, timeout=60,
    )


@pytest.fixture
def corridor_file(tmp_path):
    path = tmp_path / "corridor.bmod"
    path.write_text(CORRIDOR)
    return str(path)


# --- check ------------------------------------------------------------------------

def test_check_valid_file_is_silent_and_zero(corridor_file):
    proc = bmod("check", corridor_file)
    assert proc.returncode == OK
    assert proc.stdout == "" and proc.stderr == ""


def test_check_semantic_error_prints_one_line(tmp_path):
    path = tmp_path / "bad.bmod"
    path.write_text('floor "F" {\n  room "R" 2 x 1 {\n    door "d" at (0,0) to "R"\n  }\n}\n')
    proc = bmod("check", str(path))
    assert proc.returncode == SEMANTIC
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == 1 and "VAL_DOOR_SAME_ROOM" in lines[0]


def test_check_parse_error_exits_two(tmp_path):
    path = tmp_path / "broken.bmod"
    path.write_text('floor "F" { room }')
    proc = bmod("check", str(path))
    assert proc.returncode == USAGE
    assert "PARSE_" in proc.stdout


def test_check_missing_file_exits_three(tmp_path):
    proc = bmod("check", str(tmp_path / "ghost.bmod"))
    assert proc.returncode == IO_ERROR
    assert proc.stderr.startswith("bmod:")


def test_check_warnings_do_not_fail(tmp_path):
    path = tmp_path / "sealed.bmod"
    path.write_text(SEALED)
    proc = bmod("check", str(path))
    assert proc.returncode == OK
    assert "VAL_NO_EXIT" in proc.stdout


def test_check_quiet_suppresses_warnings(tmp_path):
    path = tmp_path / "sealed.bmod"
    path.write_text(SEALED)
    proc = bmod("check", "--quiet", str(path))
    assert proc.returncode == OK and proc.stdout == ""


def test_validate_is_an_alias(corridor_file):
    assert bmod("validate", corridor_file).returncode == OK


def test_check_corpus_files(scenario_dir):
    for name in sorted(os.listdir(scenario_dir)):
        if name.endswith(".bmod"):
            proc = bmod("check", os.path.join(scenario_dir, name))
            assert proc.returncode == OK, (name, proc.stdout, proc.stderr)


# --- simulate ------------------------------------------------------------------------

def test_simulate_corridor_summary_line(corridor_file):
    proc = bmod("simulate", corridor_file)
    assert proc.returncode == OK
    assert proc.stdout.strip() == "ticks=2 evacuated=1 dead=0 trapped=0"


def test_simulate_max_ticks_zero_traps_everyone(corridor_file):
    proc = bmod("simulate", corridor_file, "--max-ticks", "0")
    assert proc.stdout.strip() == "ticks=0 evacuated=0 dead=0 trapped=1"


def test_simulate_json_format(corridor_file):
    proc = bmod("simulate", corridor_file, "--format", "json")
    doc = json.loads(proc.stdout)
    assert (doc["ticks"], doc["evacuated"]) == (2, 1)
    assert doc["outcomes"] == {"p": "evacuated"}


def test_simulate_writes_result_and_trace_when_out_given(corridor_file, tmp_path):
    out = tmp_path / "results"
    proc = bmod("simulate", corridor_file, "--out", str(out))
    assert proc.returncode == OK
    result = json.loads((out / "corridor.result.json").read_text())
    assert result["evacuated"] == 1
    trace_lines = (out / "corridor.trace.jsonl").read_text().splitlines()
    assert len(trace_lines) == 3
    assert all(json.loads(line)["tick"] in (1, 2) for line in trace_lines)


def test_simulate_output_files_are_world_readable(corridor_file, tmp_path):
    out = tmp_path / "results"
    bmod("simulate", corridor_file, "--out", str(out))
    mode = stat.S_IMODE(os.stat(out / "corridor.result.json").st_mode)
    assert mode & 0o044 == 0o044


def test_simulate_rejects_invalid_scenarios(tmp_path):
    path = tmp_path / "bad.bmod"
    path.write_text('floor "F" {\n  room "R" 2 x 1 {\n    door "d" at (0,0) to "R"\n  }\n}\n')
    proc = bmod("simulate", str(path))
    assert proc.returncode == SEMANTIC


def test_simulate_policy_flag(tmp_path):
    path = tmp_path / "split.bmod"
    path.write_text(
        'floor "F" {\n'
        '  room "R" 5 x 1 {\n'
        '    door "near" at (0,0) exit\n'
        '    person "p" at (1,0)\n'
        "    sign at (1,0) facing east\n"
        '    door "far" at (4,0) exit\n'
        "  }\n"
        "}\n"
    )
    signs = bmod("simulate", str(path)).stdout
    direct = bmod("simulate", str(path), "--policy", "shortest_path").stdout
    assert signs.strip() == "ticks=3 evacuated=1 dead=0 trapped=0"
    assert direct.strip() == "ticks=1 evacuated=1 dead=0 trapped=0"


def test_sweep_runs_every_scenario_in_sorted_order(tmp_path):
    for name, text in (("b.bmod", CORRIDOR), ("a.bmod", TWO_ROOMS)):
        (tmp_path / name).write_text(text)
    proc = bmod("simulate", "--sweep", str(tmp_path), "--jobs", "2")
    assert proc.returncode == OK
    lines = proc.stdout.strip().splitlines()
    assert lines[0].startswith("a.bmod") and lines[1].startswith("b.bmod")
    assert "ticks=2 evacuated=1" in lines[1]


def test_sweep_empty_directory_is_a_usage_error(tmp_path):
    assert bmod("simulate", "--sweep", str(tmp_path)).returncode == USAGE


def test_sweep_reports_the_worst_exit_code(tmp_path):
    (tmp_path / "good.bmod").write_text(CORRIDOR)
    (tmp_path / "bad.bmod").write_text("floor {")
    proc = bmod("simulate", "--sweep", str(tmp_path))
    assert proc.returncode == USAGE


# --- config file ----------------------------------------------------------------------

def test_config_file_supplies_defaults(corridor_file, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"max_ticks": 0}))
    proc = bmod("simulate", corridor_file, "--config", str(config))
    assert proc.stdout.strip() == "ticks=0 evacuated=0 dead=0 trapped=1"


def test_flags_override_the_config_file(corridor_file, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"max_ticks": 0}))
    proc = bmod("simulate", corridor_file, "--config", str(config), "--max-ticks", "50")
    assert proc.stdout.strip() == "ticks=2 evacuated=1 dead=0 trapped=0"


def test_bad_config_is_a_usage_error(corridor_file, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text("[1, 2]")
    assert bmod("simulate", corridor_file, "--config", str(config)).returncode == USAGE


# --- codegen ----------------------------------------------------------------------------

def test_codegen_builtin_java_layout(tmp_path):
    out = tmp_path / "gen"
    proc = bmod("codegen", "--builtin", "bmod", "--template", "java", "--out", str(out))
    assert proc.returncode == OK
    produced = sorted(os.listdir(out / "java"))
    assert len([n for n in produced if n.endswith(".java")]) == 9
    assert "manifest.json" in produced
    manifest = json.loads((out / "java" / "manifest.json").read_text())
    assert manifest["template"] == "java" and len(manifest["files"]) == 9


def test_codegen_rerun_is_identical(tmp_path):
    out = tmp_path / "gen"
    bmod("codegen", "--builtin", "bmod", "--out", str(out))
    first = (out / "java" / "manifest.json").read_bytes()
    bmod("codegen", "--builtin", "bmod", "--out", str(out))
    assert (out / "java" / "manifest.json").read_bytes() == first


def test_codegen_unknown_template_names_the_alternatives(tmp_path):
    proc = bmod("codegen", "--builtin", "bmod", "--template", "cobol", "--out", str(tmp_path))
    assert proc.returncode == USAGE
    assert "java" in proc.stderr and "neutral" in proc.stderr


def test_codegen_from_metamodel_json(tmp_path):
    mm_path = tmp_path / "mini.json"
    mm_path.write_text(json.dumps({
        "name": "mini",
        "classes": [
            {"name": "Thing", "attributes": [{"name": "label", "kind": "string"}]},
        ],
    }))
    out = tmp_path / "gen"
    proc = bmod("codegen", str(mm_path), "--template", "neutral", "--out", str(out))
    assert proc.returncode == OK
    assert (out / "neutral" / "Thing.txt").exists()


def test_codegen_user_template_dir(tmp_path):
    tpl_dir = tmp_path / "templates"
    tpl_dir.mkdir()
    (tpl_dir / "tiny.json").write_text(json.dumps({
        "extension": "rec", "header": "", "class_doc": "",
        "class_open": "{class_name}:\n", "class_close": "", "constructor": "",
    }))
    out = tmp_path / "gen"
    proc = bmod("codegen", "--builtin", "bmod", "--template", "tiny", "--out", str(out),
                env={"BMOD_TEMPLATE_DIR": str(tpl_dir)})
    assert proc.returncode == OK
    assert (out / "tiny" / "Cell.rec").read_text().startswith("Cell:")


# --- export ---------------------------------------------------------------------------------

def test_export_classes_writes_a_dot_file(tmp_path):
    proc = bmod("export", "--view", "classes", "--builtin", "bmod", "--out", str(tmp_path))
    assert proc.returncode == OK
    content = (tmp_path / "bmod.dot").read_text()
    assert content.startswith('digraph "bmod"')


def test_export_spreadsheet_writes_csv(tmp_path):
    proc = bmod("export", "--view", "spreadsheet", "--builtin", "bmod", "--out", str(tmp_path))
    assert proc.returncode == OK
    assert (tmp_path / "bmod.csv").read_text().startswith("class,feature,kind")


def test_export_scenario_initial_state(corridor_file, tmp_path):
    proc = bmod("export", "--view", "scenario", corridor_file, "--out", str(tmp_path))
    assert proc.returncode == OK
    svg = (tmp_path / "corridor.svg").read_text()
    assert svg.startswith("<?xml") and 'class="person"' in svg


def test_export_scenario_at_tick_reflects_simulation(tmp_path):
    path = tmp_path / "burn.bmod"
    path.write_text(
        'floor "G" {\n  room "B" 3 x 3 {\n    fire at (1,1)\n  }\n}\n'
    )
    bmod("export", "--view", "scenario", str(path), "--at-tick", "1", "--out", str(tmp_path))
    svg = (tmp_path / "burn.svg").read_text()
    assert svg.count('class="fire"') == 5


def test_export_invalid_view_is_a_usage_error(corridor_file, tmp_path):
    proc = bmod("export", "--view", "hologram", corridor_file, "--out", str(tmp_path))
    assert proc.returncode == USAGE


def test_export_scenario_requires_a_file(tmp_path):
    proc = bmod("export", "--view", "scenario", "--builtin", "bmod", "--out", str(tmp_path))
    assert proc.returncode == USAGE


def test_export_style_file(corridor_file, tmp_path):
    style = tmp_path / "style.json"
    style.write_text(json.dumps({"person_fill": "#123456"}))
    bmod("export", "--view", "scenario", corridor_file, "--style", str(style),
         "--out", str(tmp_path))
    assert "#123456" in (tmp_path / "corridor.svg").read_text()


def test_export_bad_style_is_a_usage_error(corridor_file, tmp_path):
    style = tmp_path / "style.json"
    style.write_text(json.dumps({"person_fill": "mauve"}))
    proc = bmod("export", "--view", "scenario", corridor_file, "--style", str(style),
                "--out", str(tmp_path))
    assert proc.returncode == USAGE


# --- fmt ------------------------------------------------------------------------------------

MESSY = 'floor "G" { room "A" 3 x 1 { door "out" at (2,0) exit person "p" at (0,0) } }\n'


def test_fmt_prints_canonical_form(tmp_path):
    path = tmp_path / "messy.bmod"
    path.write_text(MESSY)
    proc = bmod("fmt", str(path))
    assert proc.returncode == OK
    assert proc.stdout == CORRIDOR
    assert path.read_text() == MESSY


def test_fmt_in_place_rewrites_once(tmp_path):
    path = tmp_path / "messy.bmod"
    path.write_text(MESSY)
    assert bmod("fmt", "--in-place", str(path)).returncode == OK
    assert path.read_text() == CORRIDOR
    before = os.stat(path).st_mtime_ns
    bmod("fmt", "--in-place", str(path))
    assert os.stat(path).st_mtime_ns == before  # already canonical: untouched


def test_fmt_reports_parse_failures(tmp_path):
    path = tmp_path / "broken.bmod"
    path.write_text("floor {")
    proc = bmod("fmt", str(path))
    assert proc.returncode == USAGE


# --- general ----------------------------------------------------------------------------------

def test_no_subcommand_is_a_usage_error():
    assert bmod().returncode == USAGE


def test_unknown_flag_is_a_usage_error(corridor_file):
    assert bmod("check", corridor_file, "--turbo").returncode == USAGE


def test_console_script_matches_module_invocation(corridor_file):
    script = subprocess.run(["bmod", "check", corridor_file],
                            capture_output=True, text=True)
    assert script.returncode == OK
