"""Scenario declarations to reflective model instances.

Every room lowers to a full grid of Cell objects in row-major order (walls
become Wall instances), so the object graph mirrors what the simulator walks.
Out-of-bounds items are instantiated but left uncontained rather than dropped;
the validator reports them at the declaration level.
"""

from __future__ import annotations

from .meta import MetaModel, Model, build_bmod_metamodel
from .scenario import Scenario


def lower(scenario: Scenario, metamodel: MetaModel | None = None) -> Model:
    mm = metamodel or build_bmod_metamodel()
    model = Model(mm)
    room_ids: dict[str, str] = {}
    pending_targets: list[tuple[str, str]] = []

    for floor in scenario.floors:
        floor_obj = model.instantiate("Floor")
        model.set_feature(floor_obj.id, "name", floor.name)
        for room in floor.rooms:
            room_obj = model.instantiate("Room")
            model.set_feature(room_obj.id, "name", room.name)
            model.set_feature(room_obj.id, "width", room.width)
            model.set_feature(room_obj.id, "height", room.height)
            model.add_feature(floor_obj.id, "rooms", room_obj.id)
            room_ids.setdefault(room.name, room_obj.id)

            walls = set(room.walls)
            fires = set(room.fires)
            cell_ids: dict[tuple[int, int], str] = {}
            for y in range(room.height):
                for x in range(room.width):
                    cell = model.instantiate("Wall" if (x, y) in walls else "Cell")
                    model.set_feature(cell.id, "x", x)
                    model.set_feature(cell.id, "y", y)
                    if (x, y) in fires:
                        model.set_feature(cell.id, "onFire", True)
                    model.add_feature(room_obj.id, "cells", cell.id)
                    cell_ids[(x, y)] = cell.id

            for door in room.doors:
                door_obj = model.instantiate("Door")
                model.set_feature(door_obj.id, "name", door.name)
                model.set_feature(door_obj.id, "locked", door.locked)
                model.set_feature(door_obj.id, "exit", door.exit)
                if (door.x, door.y) in cell_ids:
                    model.set_feature(door_obj.id, "cell", cell_ids[(door.x, door.y)])
                model.add_feature(room_obj.id, "doors", door_obj.id)
                if door.to_room is not None:
                    pending_targets.append((door_obj.id, door.to_room))
            for person in room.people:
                person_obj = model.instantiate("Person")
                model.set_feature(person_obj.id, "name", person.name)
                if (person.x, person.y) in cell_ids:
                    model.add_feature(cell_ids[(person.x, person.y)], "people", person_obj.id)
            for sign in room.signs:
                sign_obj = model.instantiate("EMSign")
                model.set_feature(sign_obj.id, "direction", sign.direction)
                if (sign.x, sign.y) in cell_ids:
                    model.add_feature(cell_ids[(sign.x, sign.y)], "signs", sign_obj.id)

    # second pass: rooms may be targeted before they are declared
    for door_id, target in pending_targets:
        if target in room_ids:
            model.set_feature(door_id, "targetRoom", room_ids[target])
    return model
