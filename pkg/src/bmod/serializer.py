"""Scenario declarations back to canonical text.

Canonical form: two-space indents, one declaration per line, room items
ordered by row, then column, then item kind (walls, fires, people, signs,
doors), LF line endings, and a single trailing newline. Serializing a parse
of canonical text reproduces it byte for byte.
"""

from __future__ import annotations

from .scenario import DoorDecl, PersonDecl, RoomDecl, Scenario, SignDecl

_ESCAPE = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


def quote(name: str) -> str:
    return '"' + "".join(_ESCAPE.get(ch, ch) for ch in name) + '"'


def _item_lines(room: RoomDecl) -> list[str]:
    # (y, x, kind rank, declaration order) keeps same-cell items in a fixed order
    items: list[tuple[tuple[int, int, int, int], str]] = []
    for i, (x, y) in enumerate(room.walls):
        items.append(((y, x, 0, i), f"wall at ({x},{y})"))
    for i, (x, y) in enumerate(room.fires):
        items.append(((y, x, 1, i), f"fire at ({x},{y})"))
    for i, p in enumerate(room.people):
        items.append(((p.y, p.x, 2, i), f"person {quote(p.name)} at ({p.x},{p.y})"))
    for i, s in enumerate(room.signs):
        items.append(((s.y, s.x, 3, i), f"sign at ({s.x},{s.y}) facing {s.direction}"))
    for i, d in enumerate(room.doors):
        items.append(((d.y, d.x, 4, i), _door_line(d)))
    items.sort(key=lambda pair: pair[0])
    return [text for _, text in items]


def _door_line(door: DoorDecl) -> str:
    parts = [f"door {quote(door.name)} at ({door.x},{door.y})"]
    if door.to_room is not None:
        parts.append(f"to {quote(door.to_room)}")
    if door.locked:
        parts.append("locked")
    if door.exit:
        parts.append("exit")
    return " ".join(parts)


def serialize(scenario: Scenario) -> str:
    lines: list[str] = []
    for floor in scenario.floors:
        lines.append(f"floor {quote(floor.name)} {{")
        for room in floor.rooms:
            lines.append(f"  room {quote(room.name)} {room.width} x {room.height} {{")
            lines.extend(f"    {item}" for item in _item_lines(room))
            lines.append("  }")
        lines.append("}")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
