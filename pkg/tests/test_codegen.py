"""Template-driven class generation: goldens, naming, manifests, user templates."""

from __future__ import annotations

import hashlib
import json
import os

import pytest

from bmod.codegen import (
    JAVA_TEMPLATE,
    NEUTRAL_TEMPLATE,
    GenTemplate,
    build_manifest,
    generate,
    list_templates,
    lower_camel,
    upper_camel,
)
from bmod.meta import (
    MetaAttribute,
    MetaClass,
    MetaModel,
    MetaReference,
    build_bmod_metamodel,
)
from conftest import GOLDEN_DIR

MM = build_bmod_metamodel()


def java_files() -> dict:
    files, warnings = generate(MM, JAVA_TEMPLATE)
    assert warnings == []
    return files


# --- naming helpers ---------------------------------------------------------------

@pytest.mark.parametrize("raw,lower,upper", [
    ("name", "name", "Name"),
    ("onFire", "onFire", "OnFire"),
    ("target_room", "targetRoom", "TargetRoom"),
    ("x", "x", "X"),
    ("EMSign", "eMSign", "EMSign"),
])
def test_camel_casing(raw, lower, upper):
    assert lower_camel(raw) == lower
    assert upper_camel(raw) == upper


# --- golden files ------------------------------------------------------------------

def test_java_output_matches_committed_goldens_byte_for_byte():
    files = java_files()
    golden_names = sorted(os.listdir(os.path.join(GOLDEN_DIR, "java")))
    assert sorted(files) == golden_names
    for name, content in files.items():
        with open(os.path.join(GOLDEN_DIR, "java", name), encoding="utf-8") as fh:
            assert content == fh.read(), f"golden drift in {name}"


def test_every_attribute_has_both_accessors_by_naming_rule():
    files = java_files()
    for cls in MM.classes:
        body = files[f"{cls.name}.java"]
        for attr in cls.attributes:
            camel = upper_camel(attr.name)
            reader = f"is{camel}(" if attr.kind == "boolean" else f"get{camel}("
            assert reader in body, (cls.name, attr.name)
            assert f"set{camel}(" in body, (cls.name, attr.name)


def test_single_valued_references_get_getter_and_setter():
    door = java_files()["Door.java"]
    assert "public Cell getCell()" in door
    assert "public void setCell(Cell cell)" in door


def test_many_valued_references_get_adder_and_remover():
    room = java_files()["Room.java"]
    assert "public java.util.List<Cell> getCells()" in room
    assert "public void addCells(Cell cells)" in room
    assert "public void removeCells(Cell cells)" in room
    assert "setCells" not in room


def test_inheritance_becomes_extends():
    assert "public class Wall extends Cell {" in java_files()["Wall.java"]


def test_zero_feature_class_is_constructor_and_doc_header_only():
    content = java_files()["CellNavigationManager.java"]
    assert "public CellNavigationManager() {" in content
    assert content.startswith("// CellNavigationManager.java")
    assert "get" not in content and "set" not in content and "private" not in content


def test_enum_attributes_document_their_literals():
    sign = java_files()["EMSign.java"]
    assert "One of: north, south, east, west." in sign


def test_generation_is_deterministic():
    assert java_files() == java_files()


def test_empty_metamodel_generates_no_files():
    files, warnings = generate(MetaModel("empty", []), JAVA_TEMPLATE)
    assert files == {} and warnings == []


def test_abstract_classes_still_get_a_file():
    mm = MetaModel("m", [MetaClass("Base", abstract=True), MetaClass("Leaf", supertype="Base")])
    files, _ = generate(mm, JAVA_TEMPLATE)
    assert sorted(files) == ["Base.java", "Leaf.java"]
    assert "abstract class Base" in files["Base.java"]


# --- reserved words ---------------------------------------------------------------------

def test_reserved_field_name_renamed_with_warning():
    mm = MetaModel("m", [MetaClass("Config", attributes=(
        MetaAttribute("class", "string"),
        MetaAttribute("static", "boolean"),
    ))])
    files, warnings = generate(mm, JAVA_TEMPLATE)
    body = files["Config.java"]
    assert "private String class_;" in body
    assert "private boolean static_;" in body
    assert sorted(w.code for w in warnings) == ["GEN_RESERVED_WORD", "GEN_RESERVED_WORD"]


def test_neutral_template_has_no_reserved_words():
    mm = MetaModel("m", [MetaClass("Config", attributes=(MetaAttribute("class", "string"),))])
    files, warnings = generate(mm, NEUTRAL_TEMPLATE)
    assert warnings == []
    assert "class" in files["Config.txt"]


# --- manifest ---------------------------------------------------------------------------

def test_manifest_lists_sha256_per_file():
    files = java_files()
    doc = json.loads(build_manifest("java", files))
    assert doc["template"] == "java"
    assert sorted(doc["files"]) == sorted(files)
    for name, digest in doc["files"].items():
        assert digest == hashlib.sha256(files[name].encode()).hexdigest()


def test_manifest_is_stable_across_reruns():
    assert build_manifest("java", java_files()) == build_manifest("java", java_files())


# --- user templates ------------------------------------------------------------------------

def test_from_json_overlays_the_neutral_defaults():
    tpl = GenTemplate.from_json(
        {"extension": "hpp", "class_open": "struct {class_name} {{\n"},
        default_name="cpp",
    )
    assert tpl.name == "cpp" and tpl.extension == "hpp"
    assert tpl.class_close == NEUTRAL_TEMPLATE.class_close


def test_from_json_rejects_unknown_keys():
    with pytest.raises(ValueError):
        GenTemplate.from_json({"colour": "red"}, default_name="x")


def test_user_template_generates_files(tmp_path):
    (tmp_path / "brief.json").write_text(json.dumps({
        "extension": "txt",
        "class_open": "type {class_name}\n",
        "class_close": "",
        "header": "",
        "class_doc": "",
        "constructor": "",
    }))
    templates, warnings = list_templates(str(tmp_path))
    assert warnings == []
    assert set(templates) >= {"java", "neutral", "brief"}
    files, _ = generate(MM, templates["brief"])
    assert files["Wall.txt"].startswith("type Wall")


def test_list_templates_reads_the_environment(tmp_path, monkeypatch):
    (tmp_path / "envy.json").write_text("{}")
    monkeypatch.setenv("BMOD_TEMPLATE_DIR", str(tmp_path))
    templates, _ = list_templates()
    assert "envy" in templates


def test_unreadable_template_dir_downgrades_to_warning():
    templates, warnings = list_templates("/definitely/not/here")
    assert set(templates) == {"java", "neutral"}
    assert [w.code for w in warnings] == ["GEN_TEMPLATE_UNREADABLE"]


def test_broken_template_file_is_skipped_with_warning(tmp_path):
    (tmp_path / "broken.json").write_text("{nope")
    (tmp_path / "fine.json").write_text("{}")
    templates, warnings = list_templates(str(tmp_path))
    assert "fine" in templates and "broken" not in templates
    assert [w.code for w in warnings] == ["GEN_TEMPLATE_INVALID"]


def test_neutral_output_readable_for_any_metamodel():
    mm = MetaModel("m", [MetaClass("Pair", attributes=(MetaAttribute("left", "integer"),),
                                   references=(MetaReference("next", "Pair"),))])
    files, _ = generate(mm, NEUTRAL_TEMPLATE)
    body = files["Pair.txt"]
    assert "class Pair" in body and "reads left" in body and "writes left" in body
