"""Declaration tree for evacuation scenarios.

This is what the parser produces and the serializer consumes: a plain
record of what the text said, before any validation. Source spans ride
along for diagnostics but are excluded from equality, so two parses of
differently formatted but equivalent text compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagnostics import SourceSpan

DIRECTIONS = ("north", "south", "east", "west")


@dataclass
class PersonDecl:
    name: str
    x: int
    y: int
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass
class SignDecl:
    x: int
    y: int
    direction: str  # one of DIRECTIONS
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass
class DoorDecl:
    name: str
    x: int
    y: int
    to_room: str | None = None
    locked: bool = False
    exit: bool = False
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass
class RoomDecl:
    name: str
    width: int
    height: int
    walls: list[tuple[int, int]] = field(default_factory=list)
    fires: list[tuple[int, int]] = field(default_factory=list)
    people: list[PersonDecl] = field(default_factory=list)
    signs: list[SignDecl] = field(default_factory=list)
    doors: list[DoorDecl] = field(default_factory=list)
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass
class FloorDecl:
    name: str
    rooms: list[RoomDecl] = field(default_factory=list)
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass
class Scenario:
    floors: list[FloorDecl] = field(default_factory=list)

    def rooms(self) -> list[tuple[FloorDecl, RoomDecl]]:
        return [(f, r) for f in self.floors for r in f.rooms]

    def people(self) -> list[tuple[FloorDecl, RoomDecl, PersonDecl]]:
        return [(f, r, p) for f, r in self.rooms() for p in r.people]

    def doors(self) -> list[tuple[FloorDecl, RoomDecl, DoorDecl]]:
        return [(f, r, d) for f, r in self.rooms() for d in r.doors]
