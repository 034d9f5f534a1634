"""Semantic checks over a parsed scenario.

Rules are identified by stable codes so tools can filter on them. Findings
come back ordered by position (floor, room, then row/column within the room)
with scenario-level findings first, and severities are fixed per rule:
unreachable exits and empty scenarios are worth a warning, everything else
is an error.
"""

from __future__ import annotations

from .diagnostics import ERROR, WARNING, Diagnostic, SourceSpan
from .nav import (
    AMBIGUOUS,
    NO_COUNTERPART,
    SAME_ROOM,
    TARGET_MISSING,
    ScenarioIndex,
)
from .scenario import RoomDecl, Scenario

VALIDATION_RULES: dict[str, tuple[str, str]] = {
    "VAL_DUP_NAME": (ERROR, "name reused within its scope"),
    "VAL_OOB_COORD": (ERROR, "coordinate lies outside the room grid"),
    "VAL_ON_WALL": (ERROR, "person, sign or fire placed on a wall cell"),
    "VAL_OVERLAP_WALL_DOOR": (ERROR, "door placed on a wall cell"),
    "VAL_DOOR_SAME_ROOM": (ERROR, "door targets the room it is in"),
    "VAL_DOOR_UNPAIRED": (ERROR, "door has no usable counterpart"),
    "VAL_NO_EXIT": (WARNING, "person cannot reach any exit"),
    "VAL_EMPTY": (WARNING, "scenario has no rooms"),
}

_Key = tuple[int, int, int, int, str]


class _Collector:
    def __init__(self) -> None:
        self.found: list[tuple[_Key, int, Diagnostic]] = []

    def add(self, code: str, message: str, location: SourceSpan | str | None,
            floor: int = -1, room: int = -1, x: int = -1, y: int = -1) -> None:
        severity = VALIDATION_RULES[code][0]
        diag = Diagnostic(severity=severity, code=code, message=message, location=location)
        self.found.append(((floor, room, y, x, code), len(self.found), diag))

    def sorted(self) -> list[Diagnostic]:
        return [d for _, _, d in sorted(self.found, key=lambda t: (t[0], t[1]))]


def validate(scenario: Scenario) -> list[Diagnostic]:
    out = _Collector()
    index = ScenarioIndex(scenario)

    if not scenario.floors:
        out.add("VAL_EMPTY", "scenario declares no floors", None)
    elif not any(floor.rooms for floor in scenario.floors):
        out.add("VAL_EMPTY", "scenario declares no rooms", None)

    room_pos: dict[str, tuple[int, int]] = {}
    seen_floors: dict[str, int] = {}
    seen_rooms: dict[str, int] = {}
    seen_people: dict[str, str] = {}
    for fi, floor in enumerate(scenario.floors):
        if floor.name in seen_floors:
            out.add("VAL_DUP_NAME", f"floor \"{floor.name}\" already declared",
                    floor.span, floor=fi)
        else:
            seen_floors[floor.name] = fi
        for ri, room in enumerate(floor.rooms):
            if room.name in seen_rooms:
                out.add("VAL_DUP_NAME", f"room \"{room.name}\" already declared",
                        room.span, floor=fi, room=ri)
            else:
                seen_rooms[room.name] = fi
                room_pos[room.name] = (fi, ri)
            _check_room_items(out, room, fi, ri, seen_people)

    _check_doors(out, index, room_pos)
    _check_reachability(out, index, room_pos)
    return out.sorted()


def _check_room_items(out: _Collector, room: RoomDecl, fi: int, ri: int,
                      seen_people: dict[str, str]) -> None:
    walls = set(room.walls)

    def oob(x: int, y: int) -> bool:
        return not (0 <= x < room.width and 0 <= y < room.height)

    for x, y in room.walls:
        if oob(x, y):
            out.add("VAL_OOB_COORD", f"wall at ({x},{y}) is outside {room.width}x{room.height}",
                    room.span, floor=fi, room=ri, x=x, y=y)
    for x, y in room.fires:
        if oob(x, y):
            out.add("VAL_OOB_COORD", f"fire at ({x},{y}) is outside {room.width}x{room.height}",
                    room.span, floor=fi, room=ri, x=x, y=y)
        elif (x, y) in walls:
            out.add("VAL_ON_WALL", f"fire at ({x},{y}) sits on a wall",
                    room.span, floor=fi, room=ri, x=x, y=y)
    for person in room.people:
        if person.name in seen_people:
            out.add("VAL_DUP_NAME",
                    f"person \"{person.name}\" already declared in room \"{seen_people[person.name]}\"",
                    person.span, floor=fi, room=ri, x=person.x, y=person.y)
        else:
            seen_people[person.name] = room.name
        if oob(person.x, person.y):
            out.add("VAL_OOB_COORD",
                    f"person \"{person.name}\" at ({person.x},{person.y}) is outside {room.width}x{room.height}",
                    person.span, floor=fi, room=ri, x=person.x, y=person.y)
        elif (person.x, person.y) in walls:
            out.add("VAL_ON_WALL", f"person \"{person.name}\" at ({person.x},{person.y}) sits on a wall",
                    person.span, floor=fi, room=ri, x=person.x, y=person.y)
    for sign in room.signs:
        if oob(sign.x, sign.y):
            out.add("VAL_OOB_COORD", f"sign at ({sign.x},{sign.y}) is outside {room.width}x{room.height}",
                    sign.span, floor=fi, room=ri, x=sign.x, y=sign.y)
        elif (sign.x, sign.y) in walls:
            out.add("VAL_ON_WALL", f"sign at ({sign.x},{sign.y}) sits on a wall",
                    sign.span, floor=fi, room=ri, x=sign.x, y=sign.y)
    seen_doors: set[str] = set()
    for door in room.doors:
        if door.name in seen_doors:
            out.add("VAL_DUP_NAME", f"door \"{door.name}\" already declared in this room",
                    door.span, floor=fi, room=ri, x=door.x, y=door.y)
        seen_doors.add(door.name)
        if oob(door.x, door.y):
            out.add("VAL_OOB_COORD",
                    f"door \"{door.name}\" at ({door.x},{door.y}) is outside {room.width}x{room.height}",
                    door.span, floor=fi, room=ri, x=door.x, y=door.y)
        elif (door.x, door.y) in walls:
            out.add("VAL_OVERLAP_WALL_DOOR",
                    f"door \"{door.name}\" at ({door.x},{door.y}) sits on a wall",
                    door.span, floor=fi, room=ri, x=door.x, y=door.y)


def _check_doors(out: _Collector, index: ScenarioIndex,
                 room_pos: dict[str, tuple[int, int]]) -> None:
    for info in index.doors:
        door = info.decl
        fi, ri = room_pos.get(info.room, (-1, -1))
        if info.outcome == SAME_ROOM:
            out.add("VAL_DOOR_SAME_ROOM",
                    f"door \"{door.name}\" targets its own room \"{info.room}\"",
                    door.span, floor=fi, room=ri, x=door.x, y=door.y)
        elif info.outcome == TARGET_MISSING:
            out.add("VAL_DOOR_UNPAIRED",
                    f"door \"{door.name}\" targets unknown room \"{door.to_room}\"",
                    door.span, floor=fi, room=ri, x=door.x, y=door.y)
        elif info.outcome == NO_COUNTERPART:
            if door.to_room is None:
                message = (f"door \"{door.name}\" is not an exit and no other room "
                           f"declares a door of that name")
            else:
                message = (f"door \"{door.name}\" targets room \"{door.to_room}\" "
                           f"but that room has no door of the same name")
            out.add("VAL_DOOR_UNPAIRED", message, door.span,
                    floor=fi, room=ri, x=door.x, y=door.y)
        elif info.outcome == AMBIGUOUS:
            where = (f"room \"{door.to_room}\"" if door.to_room is not None
                     else "other rooms")
            out.add("VAL_DOOR_UNPAIRED",
                    f"door \"{door.name}\": several doors named \"{door.name}\" in {where}",
                    door.span, floor=fi, room=ri, x=door.x, y=door.y)


def _check_reachability(out: _Collector, index: ScenarioIndex,
                        room_pos: dict[str, tuple[int, int]]) -> None:
    field = index.distance_field(frozenset())
    for start in index.people:
        if not index.is_free(start.cell):
            continue  # placement already reported
        if start.cell not in field:
            fi, ri = room_pos.get(start.room, (-1, -1))
            out.add("VAL_NO_EXIT",
                    f"person \"{start.decl.name}\" at ({start.decl.x},{start.decl.y}) cannot reach any exit",
                    start.decl.span, floor=fi, room=ri, x=start.decl.x, y=start.decl.y)
