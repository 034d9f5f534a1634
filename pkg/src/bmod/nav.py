"""Spatial index over a scenario: grids, door pairing, distances.

Cells are ``(room_name, x, y)`` tuples with x growing east and y growing
south, so ``north`` is ``(0, -1)``. Movement between rooms happens only by
standing on a door cell whose door is unlocked and paired with exactly one
counterpart door leading back; crossing is directional, the counterpart's
lock only restricts travel the other way. The index is tolerant of invalid
scenarios (the validator reports those); duplicate room names resolve to the
first declaration.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .scenario import DoorDecl, PersonDecl, RoomDecl, Scenario

Cell = tuple[str, int, int]

# y grows downward: north decreases y
DIRECTION_DELTAS = {
    "north": (0, -1),
    "south": (0, 1),
    "east": (1, 0),
    "west": (-1, 0),
}

# fixed neighbor probe order, used for movement tie-breaking
GRID_STEPS = ((0, -1), (1, 0), (0, 1), (-1, 0))  # N, E, S, W

EXIT = "exit"
PAIRED = "paired"
NO_COUNTERPART = "no_counterpart"
AMBIGUOUS = "ambiguous"
TARGET_MISSING = "target_missing"
SAME_ROOM = "same_room"


class UnknownCellError(Exception):
    """A cell reference that is outside every indexed room grid."""


@dataclass
class DoorInfo:
    decl: DoorDecl
    room: str
    index: int  # position in global declaration order
    outcome: str = NO_COUNTERPART
    counterpart: int | None = None  # index of the paired door

    @property
    def cell(self) -> Cell:
        return (self.room, self.decl.x, self.decl.y)


@dataclass
class PersonStart:
    decl: PersonDecl
    room: str
    index: int

    @property
    def cell(self) -> Cell:
        return (self.room, self.decl.x, self.decl.y)


class ScenarioIndex:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.rooms: dict[str, RoomDecl] = {}
        for _, room in scenario.rooms():
            self.rooms.setdefault(room.name, room)

        self.walls: dict[str, set[tuple[int, int]]] = {
            name: set(room.walls) for name, room in self.rooms.items()
        }
        self.initial_fires: set[Cell] = set()
        self.signs_at: dict[Cell, str] = {}
        self.people: list[PersonStart] = []
        self.doors: list[DoorInfo] = []
        self.doors_at: dict[Cell, list[DoorInfo]] = {}

        for name, room in self.rooms.items():
            for x, y in room.fires:
                if self._dims_contain(room, x, y):
                    self.initial_fires.add((name, x, y))
            for sign in room.signs:
                self.signs_at.setdefault((name, sign.x, sign.y), sign.direction)

        for _, room, person in scenario.people():
            if room is not self.rooms.get(room.name):
                continue  # shadowed duplicate room
            self.people.append(PersonStart(decl=person, room=room.name, index=len(self.people)))
        for _, room, door in scenario.doors():
            if room is not self.rooms.get(room.name):
                continue
            info = DoorInfo(decl=door, room=room.name, index=len(self.doors))
            self.doors.append(info)
            self.doors_at.setdefault(info.cell, []).append(info)

        self._pair_doors()

        self.exit_cells: set[Cell] = {
            d.cell
            for d in self.doors
            if d.outcome == EXIT and not d.decl.locked and self.is_free(d.cell)
        }
        # reverse door edges: target cell -> source door cells, declaration order
        self._entries_into: dict[Cell, list[Cell]] = {}
        for door in self.doors:
            target = self.jump_target(door)
            if target is not None:
                self._entries_into.setdefault(target, []).append(door.cell)

    def _pair_doors(self) -> None:
        # the door NAME is the pair key: a non-exit door pairs with the
        # same-named door in its target room, or, with no target given,
        # with the unique same-named door anywhere else
        by_name: dict[str, list[DoorInfo]] = {}
        for info in self.doors:
            if not info.decl.exit:
                by_name.setdefault(info.decl.name, []).append(info)
        for info in self.doors:
            decl = info.decl
            if decl.exit:
                info.outcome = EXIT  # an exit leads outside even if a target is given
                continue
            if decl.to_room is not None:
                if decl.to_room == info.room:
                    info.outcome = SAME_ROOM
                    continue
                if decl.to_room not in self.rooms:
                    info.outcome = TARGET_MISSING
                    continue
                candidates = [
                    d for d in by_name.get(decl.name, []) if d.room == decl.to_room
                ]
            else:
                candidates = [
                    d for d in by_name.get(decl.name, []) if d.room != info.room
                ]
            if len(candidates) == 1:
                info.outcome = PAIRED
                info.counterpart = candidates[0].index
            elif not candidates:
                info.outcome = NO_COUNTERPART
            else:
                info.outcome = AMBIGUOUS

    def jump_target(self, door: DoorInfo) -> Cell | None:
        """Cell reached by crossing this door, if the crossing is usable."""
        if door.outcome != PAIRED or door.decl.locked:
            return None
        if not self.is_free(door.cell):
            return None
        target = self.doors[door.counterpart].cell
        return target if self.is_free(target) else None

    # --- geometry ---

    def _dims_contain(self, room: RoomDecl, x: int, y: int) -> bool:
        return 0 <= x < room.width and 0 <= y < room.height

    def in_bounds(self, cell: Cell) -> bool:
        room = self.rooms.get(cell[0])
        return room is not None and self._dims_contain(room, cell[1], cell[2])

    def is_wall(self, cell: Cell) -> bool:
        return (cell[1], cell[2]) in self.walls.get(cell[0], ())

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and not self.is_wall(cell)

    def room_cells(self, name: str):
        room = self.rooms[name]
        for y in range(room.height):
            for x in range(room.width):
                yield (name, x, y)

    # --- adjacency ---

    def grid_neighbors(self, cell: Cell) -> list[Cell]:
        room, x, y = cell
        out = []
        for dx, dy in GRID_STEPS:
            nxt = (room, x + dx, y + dy)
            if self.is_free(nxt):
                out.append(nxt)
        return out

    def neighbors(self, cell: Cell) -> list[Cell]:
        """Cells a person standing here could step to: the four grid moves in
        north, east, south, west order, then door crossings in declaration order.
        Walls have no neighbors.
        """
        if not self.in_bounds(cell):
            raise UnknownCellError(f"no cell {cell!r}")
        if self.is_wall(cell):
            return []
        out = self.grid_neighbors(cell)
        for door in self.doors_at.get(cell, ()):
            target = self.jump_target(door)
            if target is not None:
                out.append(target)
        return out

    def predecessors(self, cell: Cell) -> list[Cell]:
        """Cells that can step onto this one (grid moves are symmetric,
        door crossings are not)."""
        out = self.grid_neighbors(cell)
        out.extend(self._entries_into.get(cell, ()))
        return out

    # --- distances ---

    def distance_field(self, burning: frozenset[Cell] | set[Cell] = frozenset()) -> dict[Cell, int]:
        """Hop count from each passable cell to the nearest usable exit.

        Breadth-first search seeded at every non-burning unlocked exit cell,
        expanded over predecessor edges so locked doors block entry but not
        departure. Burning cells are impassable and get no distance; cells
        absent from the result cannot reach an exit.
        """
        dist: dict[Cell, int] = {}
        queue: deque[Cell] = deque()
        for cell in sorted(self.exit_cells):
            if cell not in burning:
                dist[cell] = 0
                queue.append(cell)
        while queue:
            cur = queue.popleft()
            for pred in self.predecessors(cur):
                if pred in burning or pred in dist:
                    continue
                dist[pred] = dist[cur] + 1
                queue.append(pred)
        return dist


def compute_distance_field(scenario, burning: frozenset[Cell] | set[Cell] = frozenset()) -> dict[Cell, int]:
    """One-shot field computation: index the scenario, then run the search."""
    return ScenarioIndex(scenario).distance_field(burning)
