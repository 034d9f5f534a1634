"""Read-only projections: class diagram, feature spreadsheet, scenario picture.

The class diagram is Graphviz DOT with UML arrow conventions (hollow head
for inheritance, diamond tail for containment, dashed for plain references).
The spreadsheet is RFC 4180 CSV, one row per declared feature. The scenario
picture is standalone SVG; passing a live simulation overlays its burning
cells and the people still in the building instead of the initial state.
All three are deterministic functions of their inputs.
"""

from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from csv import writer as csv_writer
from dataclasses import dataclass, fields, replace
from io import StringIO

from .meta import BOOLEAN, ENUM, MetaAttribute, MetaClass, MetaModel
from .nav import PAIRED, Cell, ScenarioIndex
from .scenario import Scenario
from .serializer import serialize
from .sim import Simulation


class StateMismatchError(Exception):
    """Simulation state offered for a different scenario than the one drawn."""


_HEX_DIGITS = set("0123456789abcdefABCDEF")


def _is_hex_color(value: str) -> bool:
    return (
        isinstance(value, str)
        and len(value) == 7
        and value.startswith("#")
        and all(ch in _HEX_DIGITS for ch in value[1:])
    )


@dataclass(frozen=True)
class ViewStyle:
    """Colors, glyph letters, and geometry for the scenario picture.

    Every color is a 6-digit hex string; every element kind carries both a
    fill color and a one-letter glyph drawn on top of it.
    """

    cell_size: int = 32
    background: str = "#ffffff"
    room_fill: str = "#f7f7f2"
    room_border: str = "#333333"
    grid_line: str = "#d9d9d9"
    wall_fill: str = "#44423e"
    fire_fill: str = "#e25822"
    door_fill: str = "#b08950"
    exit_fill: str = "#2e8b57"
    locked_stroke: str = "#b03030"
    sign_fill: str = "#1d5fa8"
    person_fill: str = "#6a3fb5"
    connector: str = "#888888"
    label_color: str = "#222222"
    glyph_color: str = "#ffffff"
    font_family: str = "monospace"
    wall_glyph: str = "W"
    fire_glyph: str = "F"
    door_glyph: str = "D"
    exit_glyph: str = "E"
    sign_glyph: str = "S"
    person_glyph: str = "P"

    def __post_init__(self) -> None:
        if not isinstance(self.cell_size, int) or self.cell_size < 4:
            raise ValueError("cell_size must be an integer of at least 4")
        for spec in fields(self):
            if not spec.name.endswith(("_fill", "_color", "_stroke")) and spec.name not in (
                "background",
                "grid_line",
                "room_border",
                "connector",
            ):
                continue
            value = getattr(self, spec.name)
            if not _is_hex_color(value):
                raise ValueError(f"style color {spec.name} must look like #rrggbb, got {value!r}")

    @classmethod
    def from_json(cls, doc: dict) -> "ViewStyle":
        if not isinstance(doc, dict):
            raise ValueError("style document must be a JSON object")
        known = {f.name: f.type for f in fields(cls)}
        overrides = {}
        for key, value in doc.items():
            if key not in known:
                raise ValueError(f"unknown style key {key!r}")
            if key == "cell_size":
                overrides[key] = int(value)
            else:
                overrides[key] = str(value)
        return replace(cls(), **overrides)

    @classmethod
    def load(cls, path: str) -> "ViewStyle":
        with open(path, encoding="utf-8") as handle:
            return cls.from_json(json.load(handle))


# --- class diagram (DOT) ------------------------------------------------------

def _dot_string(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _label_attr(text: str) -> str:
    # record labels already contain intentional backslash escapes, keep them
    return text.replace('"', '\\"')


def _record_escape(text: str) -> str:
    out = []
    for ch in text:
        if ch in "{}|<>":
            out.append("\\" + ch)
        else:
            out.append(ch)
    return "".join(out)


def _attr_type(attr: MetaAttribute) -> str:
    if attr.kind == ENUM:
        return "enum(" + "|".join(attr.literals) + ")"
    return attr.kind


def _attr_default(attr: MetaAttribute) -> str:
    if attr.default is None:
        return ""
    if attr.kind == BOOLEAN:
        return "true" if attr.default else "false"
    return str(attr.default)


def _record_label(cls: MetaClass) -> str:
    title = cls.name + ("\\n(abstract)" if cls.abstract else "")
    attr_lines = []
    for attr in cls.attributes:
        line = f"{attr.name} : {_attr_type(attr)}"
        default = _attr_default(attr)
        if default:
            line += f" = {default}"
        attr_lines.append(_record_escape(line) + "\\l")
    op_lines = [
        _record_escape(f"{op.name}({', '.join(op.params)})") + "\\l"
        for op in cls.operations
    ]
    return "{" + _record_escape(title) + "|" + "".join(attr_lines) + "|" + "".join(op_lines) + "}"


def _multiplicity(lower: int, upper: int | None) -> str:
    return f"{lower}..{'*' if upper is None else upper}"


def export_class_diagram(mm: MetaModel) -> str:
    lines = [
        f'digraph "{_dot_string(mm.name)}" {{',
        '  rankdir="BT";',
        "  node [shape=record, fontsize=10];",
    ]
    for cls in mm.classes:
        lines.append(f'  "{_dot_string(cls.name)}" [label="{_label_attr(_record_label(cls))}"];')
    for cls in mm.classes:
        if cls.supertype is not None:
            lines.append(
                f'  "{_dot_string(cls.name)}" -> "{_dot_string(cls.supertype)}" [arrowhead=onormal];'
            )
        for ref in cls.references:
            label = _dot_string(f"{ref.name} {_multiplicity(ref.lower, ref.upper)}")
            if ref.containment:
                attrs = f'dir=both, arrowtail=diamond, arrowhead=none, label="{label}"'
            else:
                attrs = f'style=dashed, arrowhead=open, label="{label}"'
            lines.append(f'  "{_dot_string(cls.name)}" -> "{_dot_string(ref.target)}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- spreadsheet (CSV) --------------------------------------------------------

SPREADSHEET_HEADER = ("class", "feature", "kind", "type", "lower", "upper", "default")


def export_spreadsheet(mm: MetaModel) -> str:
    rows: list[tuple[str, ...]] = []
    for cls in mm.classes:
        if not cls.attributes and not cls.references:
            rows.append((cls.name, "", "", "", "", "", ""))
            continue
        for attr in cls.attributes:
            rows.append((
                cls.name, attr.name, "attribute", _attr_type(attr),
                str(attr.lower), "*" if attr.upper is None else str(attr.upper),
                _attr_default(attr),
            ))
        for ref in cls.references:
            rows.append((
                cls.name, ref.name,
                "containment" if ref.containment else "reference",
                ref.target,
                str(ref.lower), "*" if ref.upper is None else str(ref.upper),
                "",
            ))
    rows.sort(key=lambda r: (r[0], r[1]))
    buffer = StringIO()
    out = csv_writer(buffer, lineterminator="\r\n")
    out.writerow(SPREADSHEET_HEADER)
    out.writerows(rows)
    return buffer.getvalue()


# --- scenario picture (SVG) ----------------------------------------------------

_MARGIN = 20
_ROOM_GAP = 24
_FLOOR_GAP = 36
_LABEL = 16


def render_scenario(scenario: Scenario, style: ViewStyle | None = None,
                    sim: Simulation | None = None) -> str:
    style = style or ViewStyle()
    if sim is not None and serialize(sim.scenario) != serialize(scenario):
        raise StateMismatchError("simulation state belongs to a different scenario")
    index = ScenarioIndex(scenario)
    if sim is not None:
        burning = set(sim.burning)
        people = [(p.name, p.cell) for p in sim.people if p.active]
    else:
        burning = set(index.initial_fires)
        people = [(s.decl.name, s.cell) for s in index.people]

    cs = style.cell_size
    origins: dict[str, tuple[int, int]] = {}
    width = 0
    y_cursor = _MARGIN
    floor_rows: list[tuple[str, int]] = []  # (floor name, label y)
    for floor in scenario.floors:
        floor_rows.append((floor.name, y_cursor + _LABEL))
        y_cursor += _LABEL + 8
        x_cursor = _MARGIN
        tallest = 0
        for room in floor.rooms:
            if room.name in origins:  # duplicate names are drawn at the first site
                continue
            origins[room.name] = (x_cursor, y_cursor + _LABEL)
            x_cursor += room.width * cs + _ROOM_GAP
            tallest = max(tallest, _LABEL + room.height * cs)
        width = max(width, x_cursor - _ROOM_GAP + _MARGIN if floor.rooms else _MARGIN * 2)
        y_cursor += tallest + _FLOOR_GAP
    height = y_cursor - _FLOOR_GAP + _MARGIN if scenario.floors else _MARGIN * 2
    width = max(width, _MARGIN * 2)

    svg = ET.Element("svg", {
        "xmlns": "http://www.w3.org/2000/svg",
        "width": str(width),
        "height": str(height),
        "viewBox": f"0 0 {width} {height}",
        "font-family": style.font_family,
    })
    ET.SubElement(svg, "rect", {
        "x": "0", "y": "0", "width": str(width), "height": str(height),
        "fill": style.background,
    })
    for name, label_y in floor_rows:
        text = ET.SubElement(svg, "text", {
            "x": str(_MARGIN), "y": str(label_y),
            "fill": style.label_color, "font-size": "13",
        })
        text.text = f"floor {name}"

    def cell_rect(cell: Cell) -> tuple[int, int]:
        ox, oy = origins[cell[0]]
        return ox + cell[1] * cs, oy + cell[2] * cs

    def glyph(rx: int, ry: int, letter: str) -> None:
        text = ET.SubElement(svg, "text", {
            "x": str(rx + cs // 2), "y": str(ry + cs // 2),
            "fill": style.glyph_color, "font-size": str(max(cs // 2, 6)),
            "text-anchor": "middle", "dominant-baseline": "central",
            "class": "glyph",
        })
        text.text = letter

    for name, room in index.rooms.items():
        ox, oy = origins[name]
        label = ET.SubElement(svg, "text", {
            "x": str(ox), "y": str(oy - 4),
            "fill": style.label_color, "font-size": "11",
        })
        label.text = name
        ET.SubElement(svg, "rect", {
            "x": str(ox), "y": str(oy),
            "width": str(room.width * cs), "height": str(room.height * cs),
            "fill": style.room_fill, "stroke": style.room_border,
        })
        for gx in range(1, room.width):
            ET.SubElement(svg, "line", {
                "x1": str(ox + gx * cs), "y1": str(oy),
                "x2": str(ox + gx * cs), "y2": str(oy + room.height * cs),
                "stroke": style.grid_line,
            })
        for gy in range(1, room.height):
            ET.SubElement(svg, "line", {
                "x1": str(ox), "y1": str(oy + gy * cs),
                "x2": str(ox + room.width * cs), "y2": str(oy + gy * cs),
                "stroke": style.grid_line,
            })
        for wx, wy in sorted(index.walls[name]):
            if index.in_bounds((name, wx, wy)):
                rx, ry = cell_rect((name, wx, wy))
                ET.SubElement(svg, "rect", {
                    "x": str(rx), "y": str(ry), "width": str(cs), "height": str(cs),
                    "fill": style.wall_fill, "class": "wall",
                })
                glyph(rx, ry, style.wall_glyph)

    for cell in sorted(burning):
        if index.in_bounds(cell):
            rx, ry = cell_rect(cell)
            ET.SubElement(svg, "rect", {
                "x": str(rx), "y": str(ry), "width": str(cs), "height": str(cs),
                "fill": style.fire_fill, "class": "fire",
            })
            glyph(rx, ry, style.fire_glyph)

    for door in index.doors:
        if not index.in_bounds(door.cell):
            continue
        rx, ry = cell_rect(door.cell)
        attrs = {
            "x": str(rx + cs // 8), "y": str(ry + cs // 8),
            "width": str(cs - cs // 4), "height": str(cs - cs // 4),
            "fill": style.exit_fill if door.decl.exit else style.door_fill,
            "class": "door",
        }
        if door.decl.locked:
            attrs["stroke"] = style.locked_stroke
            attrs["stroke-width"] = "2"
        rect = ET.SubElement(svg, "rect", attrs)
        title = ET.SubElement(rect, "title")
        title.text = door.decl.name
        glyph(rx, ry, style.exit_glyph if door.decl.exit else style.door_glyph)

    for cell, direction in sorted(index.signs_at.items()):
        if not index.in_bounds(cell) or index.is_wall(cell):
            continue
        rx, ry = cell_rect(cell)
        cx, cy = rx + cs / 2, ry + cs / 2
        reach = cs * 0.36
        points = " ".join(
            f"{px:g},{py:g}"
            for px, py in ((cx, cy - reach), (cx + reach, cy),
                           (cx, cy + reach), (cx - reach, cy))
        )
        diamond = ET.SubElement(svg, "polygon", {
            "points": points, "fill": style.sign_fill, "class": "sign",
        })
        title = ET.SubElement(diamond, "title")
        title.text = direction
        glyph(rx, ry, style.sign_glyph)

    # each mutually paired connection is drawn from its lower-indexed door only
    for door in index.doors:
        if door.outcome != PAIRED:
            continue
        other = index.doors[door.counterpart]
        mutual = other.outcome == PAIRED and other.counterpart == door.index
        if mutual and door.index > other.index:
            continue
        if not (index.in_bounds(door.cell) and index.in_bounds(other.cell)):
            continue
        ax, ay = cell_rect(door.cell)
        bx, by = cell_rect(other.cell)
        ET.SubElement(svg, "line", {
            "x1": str(ax + cs // 2), "y1": str(ay + cs // 2),
            "x2": str(bx + cs // 2), "y2": str(by + cs // 2),
            "stroke": style.connector, "stroke-dasharray": "4 3",
            "class": "pair",
        })

    for name, cell in people:
        if not index.in_bounds(cell):
            continue
        rx, ry = cell_rect(cell)
        circle = ET.SubElement(svg, "circle", {
            "cx": str(rx + cs // 2), "cy": str(ry + cs // 2),
            "r": str(max(cs // 3, 3)),
            "fill": style.person_fill, "class": "person",
        })
        title = ET.SubElement(circle, "title")
        title.text = name
        glyph(rx, ry, style.person_glyph)

    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(svg, encoding="unicode") + "\n"
