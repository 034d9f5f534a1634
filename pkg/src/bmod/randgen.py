"""Seeded random scenarios that always pass validation.

Rooms are wired into a random spanning tree with one door pair per edge, so
pairing is never ambiguous; people, signs, and fires go on free cells, with
people kept off door cells so nobody starts already inside a doorway.
Blocked-off rooms can still occur (walls may cut a path), which downgrades
to the reachability warning, never an error. The same seed yields the same
scenario, and item lists come out canonically ordered.
"""

from __future__ import annotations

import random

from .scenario import (
    DIRECTIONS,
    DoorDecl,
    FloorDecl,
    PersonDecl,
    RoomDecl,
    Scenario,
    SignDecl,
)


def random_scenario(
    seed: int,
    *,
    max_floors: int = 2,
    rooms_per_floor: int = 2,
    max_width: int = 8,
    max_height: int = 8,
    wall_density: float = 0.15,
    max_people: int = 4,
    max_fires: int = 2,
    max_signs: int = 2,
    ensure_exit: bool = True,
) -> Scenario:
    rng = random.Random(seed)
    scenario = Scenario()
    rooms: list[RoomDecl] = []
    free_cells: dict[str, list[tuple[int, int]]] = {}
    door_counter = 0

    for fi in range(rng.randint(1, max_floors)):
        floor = FloorDecl(name=f"F{fi}")
        scenario.floors.append(floor)
        for _ in range(rng.randint(1, rooms_per_floor)):
            width = rng.randint(1, max_width)
            height = rng.randint(1, max_height)
            walls = {
                (x, y)
                for y in range(height)
                for x in range(width)
                if rng.random() < wall_density
            }
            walls.discard((0, 0))  # keep at least one free cell
            room = RoomDecl(
                name=f"R{len(rooms)}",
                width=width,
                height=height,
                walls=sorted(walls, key=lambda c: (c[1], c[0])),
            )
            floor.rooms.append(room)
            rooms.append(room)
            free = [
                (x, y)
                for y in range(height)
                for x in range(width)
                if (x, y) not in walls
            ]
            rng.shuffle(free)
            free_cells[room.name] = free

    def take_cell(room: RoomDecl) -> tuple[int, int]:
        pool = free_cells[room.name]
        if pool:
            return pool.pop()
        candidates = [
            (x, y)
            for y in range(room.height)
            for x in range(room.width)
            if (x, y) not in set(room.walls)
        ]
        return rng.choice(candidates)

    # spanning tree over rooms: one shared-name door pair per edge
    for i in range(1, len(rooms)):
        a, b = rooms[i], rooms[rng.randrange(i)]
        ax, ay = take_cell(a)
        bx, by = take_cell(b)
        name = f"d{door_counter}"
        a.doors.append(DoorDecl(name=name, x=ax, y=ay, to_room=b.name))
        b.doors.append(DoorDecl(name=name, x=bx, y=by, to_room=a.name))
        door_counter += 1

    if ensure_exit:
        exit_room = rng.choice(rooms)
        x, y = take_cell(exit_room)
        exit_room.doors.append(DoorDecl(name=f"d{door_counter}", x=x, y=y, exit=True))
        door_counter += 1
        if len(rooms) > 1 and rng.random() < 0.3:
            extra_room = rng.choice(rooms)
            x, y = take_cell(extra_room)
            locked = rng.random() < 0.25
            exit_room_door = DoorDecl(name=f"d{door_counter}", x=x, y=y,
                                      locked=locked, exit=True)
            extra_room.doors.append(exit_room_door)
            door_counter += 1

    door_cells = {
        room.name: {(d.x, d.y) for d in room.doors} for room in rooms
    }

    def place_off_doors(room: RoomDecl) -> tuple[int, int] | None:
        pool = [c for c in free_cells[room.name] if c not in door_cells[room.name]]
        if not pool:
            pool = [
                (x, y)
                for y in range(room.height)
                for x in range(room.width)
                if (x, y) not in set(room.walls) and (x, y) not in door_cells[room.name]
            ]
        if not pool:
            return None
        cell = rng.choice(pool)
        if cell in free_cells[room.name]:
            free_cells[room.name].remove(cell)
        return cell

    for pi in range(rng.randint(1, max_people) if max_people else 0):
        room = rng.choice(rooms)
        cell = place_off_doors(room)
        if cell is None:
            continue
        room.people.append(PersonDecl(name=f"p{pi}", x=cell[0], y=cell[1]))

    for _ in range(rng.randint(0, max_fires)):
        room = rng.choice(rooms)
        cell = take_cell(room)
        if (cell[0], cell[1]) not in room.fires:
            room.fires.append((cell[0], cell[1]))

    for _ in range(rng.randint(0, max_signs)):
        room = rng.choice(rooms)
        cell = place_off_doors(room)
        if cell is None:
            continue
        room.signs.append(SignDecl(x=cell[0], y=cell[1], direction=rng.choice(DIRECTIONS)))

    for room in rooms:
        room.fires.sort(key=lambda c: (c[1], c[0]))
        room.people.sort(key=lambda p: (p.y, p.x))
        room.signs.sort(key=lambda s: (s.y, s.x))
        room.doors.sort(key=lambda d: (d.y, d.x))
    return scenario
