"""Template-driven source generation from a metamodel.

Each metaclass becomes one file: fields for its declared features plus
documented accessors (get/set for single values, is-getters for booleans
where the language wants them, add/remove for collections). Everything the
output looks like comes from a :class:`GenTemplate`, a bundle of pattern
strings, so new target languages are JSON files, not code. Field names that
collide with a target's reserved words get a trailing underscore and a
warning rather than an error.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, fields, replace

from .diagnostics import WARNING, Diagnostic
from .meta import BOOLEAN, ENUM, INTEGER, STRING, MetaAttribute, MetaClass, MetaModel

GENERATION_RULES = {
    "GEN_RESERVED_WORD": "field renamed because it is a reserved word in the target",
    "GEN_TEMPLATE_UNREADABLE": "template directory could not be read",
    "GEN_TEMPLATE_INVALID": "template file ignored because it is malformed",
}

TEMPLATE_DIR_ENV = "BMOD_TEMPLATE_DIR"


@dataclass(frozen=True)
class GenTemplate:
    """Pattern strings for one target language.

    Placeholders use ``str.format`` syntax; each pattern sees only the names
    listed next to it here. Member patterns must end with a newline; the
    generator inserts blank lines between members itself.
    """

    name: str
    extension: str
    header: str           # {model_name} {class_name}
    class_doc: str        # {class_name} {model_name}
    class_open: str       # {abstract} {class_name} {extends}
    extends_clause: str   # {supertype}
    class_close: str
    field_single: str     # {type} {field} {init}
    init_value: str       # {value}
    field_many: str       # {list_type} {field}
    list_type: str        # {type}
    constructor: str      # {class_name}
    getter: str           # {accessor} {type} {field} {feature} {class_name} {enum_note}
    setter: str           # same
    adder: str            # same
    remover: str          # same
    enum_note: str        # {literals}
    type_names: dict[str, str]  # boolean/integer/string/enum
    boolean_is_prefix: bool = False
    reserved_words: tuple[str, ...] = ()

    @classmethod
    def from_json(cls, doc: dict, default_name: str) -> "GenTemplate":
        if not isinstance(doc, dict):
            raise ValueError("template document must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ValueError(f"unknown template field(s): {', '.join(unknown)}")
        base = replace(NEUTRAL_TEMPLATE, name=str(doc.get("name", default_name)))
        overrides = {}
        for f in fields(cls):
            if f.name in ("name", "type_names", "reserved_words") or f.name not in doc:
                continue
            value = doc[f.name]
            if f.name == "boolean_is_prefix":
                overrides[f.name] = bool(value)
            elif isinstance(value, str):
                overrides[f.name] = value
            else:
                raise ValueError(f"template field {f.name!r} must be a string")
        if "type_names" in doc:
            if not isinstance(doc["type_names"], dict):
                raise ValueError("type_names must be an object")
            merged = dict(base.type_names)
            merged.update({str(k): str(v) for k, v in doc["type_names"].items()})
            overrides["type_names"] = merged
        if "reserved_words" in doc:
            overrides["reserved_words"] = tuple(str(w) for w in doc["reserved_words"])
        return replace(base, **overrides)


JAVA_RESERVED = (
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char",
    "class", "const", "continue", "default", "do", "double", "else", "enum",
    "extends", "final", "finally", "float", "for", "goto", "if", "implements",
    "import", "instanceof", "int", "interface", "long", "native", "new",
    "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "try", "void", "volatile", "while",
)

JAVA_TEMPLATE = GenTemplate(
    name="java",
    extension="java",
    header="// {class_name}.java, generated from the {model_name} metamodel.\n",
    class_doc="/**\n * {model_name} model element {class_name}.\n */\n",
    class_open="public {abstract}class {class_name}{extends} {{\n",
    extends_clause=" extends {supertype}",
    class_close="}}\n",
    field_single="    private {type} {field}{init};\n",
    init_value=" = {value}",
    field_many="    private {list_type} {field} = new java.util.ArrayList<>();\n",
    list_type="java.util.List<{type}>",
    constructor="    public {class_name}() {{\n    }}\n",
    getter=(
        "    /**\n"
        "     * Returns the {feature} of this {class_name}.{enum_note}\n"
        "     */\n"
        "    public {type} {accessor}() {{\n"
        "        return this.{field};\n"
        "    }}\n"
    ),
    setter=(
        "    /**\n"
        "     * Sets the {feature} of this {class_name}.{enum_note}\n"
        "     */\n"
        "    public void {accessor}({type} {field}) {{\n"
        "        this.{field} = {field};\n"
        "    }}\n"
    ),
    adder=(
        "    /**\n"
        "     * Adds a value to the {feature} of this {class_name}.\n"
        "     */\n"
        "    public void {accessor}({type} {field}) {{\n"
        "        this.{field}.add({field});\n"
        "    }}\n"
    ),
    remover=(
        "    /**\n"
        "     * Removes a value from the {feature} of this {class_name}.\n"
        "     */\n"
        "    public void {accessor}({type} {field}) {{\n"
        "        this.{field}.remove({field});\n"
        "    }}\n"
    ),
    enum_note=" One of: {literals}.",
    type_names={BOOLEAN: "boolean", INTEGER: "int", STRING: "String", ENUM: "String"},
    boolean_is_prefix=True,
    reserved_words=JAVA_RESERVED,
)

NEUTRAL_TEMPLATE = GenTemplate(
    name="neutral",
    extension="txt",
    header="{class_name} ({model_name} model)\n",
    class_doc="",
    class_open="{abstract}class {class_name}{extends}\n",
    extends_clause=" extends {supertype}",
    class_close="end\n",
    field_single="  field {field}: {type}{init}\n",
    init_value=" = {value}",
    field_many="  field {field}: {list_type}\n",
    list_type="list of {type}",
    constructor="  new {class_name}()\n",
    getter="  {accessor}(): {type}  reads {feature}{enum_note}\n",
    setter="  {accessor}({field}: {type})  writes {feature}\n",
    adder="  {accessor}({field}: {type})  appends to {feature}\n",
    remover="  {accessor}({field}: {type})  removes from {feature}\n",
    enum_note=", one of {literals}",
    type_names={BOOLEAN: "boolean", INTEGER: "integer", STRING: "string", ENUM: "enum"},
    boolean_is_prefix=False,
    reserved_words=(),
)

BUILTIN_TEMPLATES = (JAVA_TEMPLATE, NEUTRAL_TEMPLATE)


def lower_camel(name: str) -> str:
    parts = [p for p in name.split("_") if p]
    if not parts:
        return name
    head = parts[0][0].lower() + parts[0][1:]
    return head + "".join(p[0].upper() + p[1:] for p in parts[1:])


def upper_camel(name: str) -> str:
    camel = lower_camel(name)
    return camel[0].upper() + camel[1:]


def _render_value(kind: str, value) -> str:
    if kind == BOOLEAN:
        return "true" if value else "false"
    if kind == INTEGER:
        return str(value)
    escaped = str(value).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def generate(mm: MetaModel, template: GenTemplate) -> tuple[dict[str, str], list[Diagnostic]]:
    """Render one file per class. Returns the files keyed by name, plus warnings."""
    files: dict[str, str] = {}
    warnings: list[Diagnostic] = []
    for cls in mm.classes:
        files[f"{cls.name}.{template.extension}"] = _render_class(mm, cls, template, warnings)
    return files, warnings


def _render_class(mm: MetaModel, cls: MetaClass, template: GenTemplate,
                  warnings: list[Diagnostic]) -> str:
    ctx = {
        "model_name": mm.name,
        "class_name": cls.name,
        "abstract": "abstract " if cls.abstract else "",
        "extends": template.extends_clause.format(supertype=cls.supertype) if cls.supertype else "",
    }
    parts = []
    if template.header:
        parts.append(template.header.format(**ctx))
        parts.append("\n")
    if template.class_doc:
        parts.append(template.class_doc.format(**ctx))
    parts.append(template.class_open.format(**ctx))

    members: list[str] = []
    field_lines: list[str] = []
    for feat in list(cls.attributes) + list(cls.references):
        field_name = lower_camel(feat.name)
        if field_name in template.reserved_words:
            field_name += "_"
            warnings.append(Diagnostic(
                WARNING, "GEN_RESERVED_WORD",
                f"{cls.name}.{feat.name}: renamed to {field_name!r} "
                f"({template.name} reserves the word)",
                cls.name,
            ))
        many = feat.upper is None or feat.upper > 1
        if isinstance(feat, MetaAttribute):
            base_type = template.type_names[feat.kind]
            enum_note = (
                template.enum_note.format(literals=", ".join(feat.literals))
                if feat.kind == ENUM else ""
            )
            is_boolean = feat.kind == BOOLEAN
            default = feat.default
            kind = feat.kind
        else:
            base_type = feat.target
            enum_note = ""
            is_boolean = False
            default = None
            kind = None

        fctx = {
            **ctx,
            "field": field_name,
            "feature": feat.name,
            "enum_note": enum_note,
            "type": base_type,
            "list_type": template.list_type.format(type=base_type),
        }
        suffix = upper_camel(feat.name)
        if many:
            field_lines.append(template.field_many.format(**fctx))
            members.append(template.getter.format(
                **{**fctx, "type": fctx["list_type"], "accessor": f"get{suffix}"}))
            members.append(template.adder.format(**{**fctx, "accessor": f"add{suffix}"}))
            members.append(template.remover.format(**{**fctx, "accessor": f"remove{suffix}"}))
        else:
            init = ""
            if default is not None:
                init = template.init_value.format(value=_render_value(kind, default))
            field_lines.append(template.field_single.format(**fctx, init=init))
            get_prefix = "is" if (is_boolean and template.boolean_is_prefix) else "get"
            members.append(template.getter.format(**{**fctx, "accessor": f"{get_prefix}{suffix}"}))
            members.append(template.setter.format(**{**fctx, "accessor": f"set{suffix}"}))

    parts.extend(field_lines)
    if template.constructor:
        if field_lines:
            parts.append("\n")
        parts.append(template.constructor.format(**ctx))
    for member in members:
        parts.append("\n")
        parts.append(member)
    parts.append(template.class_close.format(**ctx))
    return "".join(parts)


def build_manifest(template_name: str, files: dict[str, str]) -> str:
    digest = {
        name: hashlib.sha256(content.encode("utf-8")).hexdigest()
        for name, content in sorted(files.items())
    }
    return json.dumps({"template": template_name, "files": digest},
                      sort_keys=True, indent=2) + "\n"


def list_templates(template_dir: str | None = None) -> tuple[dict[str, GenTemplate], list[Diagnostic]]:
    """Builtin templates plus JSON templates from ``BMOD_TEMPLATE_DIR``.

    A missing directory or broken template file downgrades to a warning and
    the builtins still work.
    """
    templates = {t.name: t for t in BUILTIN_TEMPLATES}
    warnings: list[Diagnostic] = []
    directory = template_dir if template_dir is not None else os.environ.get(TEMPLATE_DIR_ENV)
    if not directory:
        return templates, warnings
    try:
        entries = sorted(os.listdir(directory))
    except OSError as exc:
        warnings.append(Diagnostic(
            WARNING, "GEN_TEMPLATE_UNREADABLE",
            f"cannot read template directory: {exc}", directory,
        ))
        return templates, warnings
    for fname in entries:
        if not fname.endswith(".json"):
            continue
        path = os.path.join(directory, fname)
        try:
            with open(path, encoding="utf-8") as handle:
                doc = json.load(handle)
            tpl = GenTemplate.from_json(doc, default_name=fname[:-5])
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            warnings.append(Diagnostic(
                WARNING, "GEN_TEMPLATE_INVALID", f"ignoring template: {exc}", path,
            ))
            continue
        templates[tpl.name] = tpl
    return templates, warnings
