"""Grid adjacency, door pairing, and the exit distance field."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bmod.nav import (
    AMBIGUOUS,
    EXIT,
    NO_COUNTERPART,
    PAIRED,
    SAME_ROOM,
    TARGET_MISSING,
    ScenarioIndex,
    UnknownCellError,
)
from bmod.parser import parse
from bmod.randgen import random_scenario
from conftest import CORRIDOR, TWO_ROOMS
from oracles import grid_distances


def index_of(text: str) -> ScenarioIndex:
    result = parse(text)
    assert result.scenario is not None, [d.render() for d in result.diagnostics]
    return ScenarioIndex(result.scenario)


def room(body: str, size: str = "3 x 3") -> ScenarioIndex:
    return index_of(f'floor "F" {{\n  room "R" {size} {{\n{body}  }}\n}}\n')


# --- neighbors -------------------------------------------------------------------

def test_center_cell_has_four_neighbors_in_compass_order():
    idx = room("")
    assert idx.neighbors(("R", 1, 1)) == [
        ("R", 1, 0), ("R", 2, 1), ("R", 1, 2), ("R", 0, 1),
    ]


def test_corner_cell_has_two_neighbors():
    idx = room("")
    assert idx.neighbors(("R", 0, 0)) == [("R", 1, 0), ("R", 0, 1)]


def test_wall_neighbors_are_omitted():
    idx = room("    wall at (1,0)\n")
    assert ("R", 1, 0) not in idx.neighbors(("R", 1, 1))
    assert len(idx.neighbors(("R", 1, 1))) == 3


def test_wall_cells_connect_to_nothing():
    idx = room("    wall at (1,1)\n")
    assert idx.neighbors(("R", 1, 1)) == []


def test_out_of_bounds_cell_raises():
    idx = room("")
    with pytest.raises(UnknownCellError):
        idx.neighbors(("R", 5, 5))
    with pytest.raises(UnknownCellError):
        idx.neighbors(("Elsewhere", 0, 0))


def test_paired_door_adds_a_jump_after_grid_neighbors():
    idx = index_of(TWO_ROOMS)
    nbrs = idx.neighbors(("A", 3, 1))
    assert nbrs[-1] == ("B", 0, 1)
    assert all(n[0] == "A" for n in nbrs[:-1])


def test_locked_door_offers_no_jump():
    text = (
        'floor "F" {\n'
        '  room "A" 2 x 1 {\n    door "d" at (1,0) to "B" locked\n  }\n'
        '  room "B" 2 x 1 {\n    door "d" at (0,0) to "A"\n  }\n'
        "}\n"
    )
    idx = index_of(text)
    assert all(n[0] == "A" for n in idx.neighbors(("A", 1, 0)))
    # the other side's door is unlocked, so the reverse jump exists
    assert ("A", 1, 0) in idx.neighbors(("B", 0, 0))


# --- pairing outcomes -----------------------------------------------------------------

def outcome_by_name(idx: ScenarioIndex) -> dict:
    return {(d.room, d.decl.name): d.outcome for d in idx.doors}


def test_pairing_outcome_catalogue():
    text = (
        'floor "F" {\n'
        '  room "A" 6 x 1 {\n'
        '    door "way" at (0,0) to "B"\n'
        '    door "gone" at (1,0) to "Atlantis"\n'
        '    door "self" at (2,0) to "A"\n'
        '    door "solo" at (3,0)\n'
        '    door "out" at (4,0) exit\n'
        '    door "fork" at (5,0)\n'
        "  }\n"
        '  room "B" 3 x 1 {\n'
        '    door "way" at (0,0) to "A"\n'
        '    door "fork" at (1,0) to "A"\n'
        "  }\n"
        '  room "C" 2 x 1 {\n'
        '    door "fork" at (0,0) to "A"\n'
        "  }\n"
        "}\n"
    )
    outcomes = outcome_by_name(index_of(text))
    assert outcomes[("A", "way")] == PAIRED
    assert outcomes[("A", "gone")] == TARGET_MISSING
    assert outcomes[("A", "self")] == SAME_ROOM
    assert outcomes[("A", "solo")] == NO_COUNTERPART
    assert outcomes[("A", "out")] == EXIT
    assert outcomes[("A", "fork")] == AMBIGUOUS


def test_exit_flag_wins_over_to():
    idx = room('    door "d" at (0,0) to "Atlantis" exit\n')
    assert idx.doors[0].outcome == EXIT


def test_jump_requires_both_cells_free():
    text = (
        'floor "F" {\n'
        '  room "A" 2 x 1 {\n    door "d" at (1,0) to "B"\n  }\n'
        '  room "B" 2 x 1 {\n    wall at (0,0)\n    door "d" at (0,0) to "A"\n  }\n'
        "}\n"
    )
    idx = index_of(text)
    door = next(d for d in idx.doors if d.room == "A")
    assert idx.jump_target(door) is None


# --- distance field ---------------------------------------------------------------------

def field_of(text: str, burning=frozenset()):
    return index_of(text).distance_field(frozenset(burning))


def test_corridor_distances_decrease_toward_the_exit():
    field = field_of(CORRIDOR)
    assert field[("A", 0, 0)] == 2
    assert field[("A", 1, 0)] == 1
    assert field[("A", 2, 0)] == 0


def test_walled_off_cells_are_absent():
    text = 'floor "F" {\n  room "R" 3 x 1 {\n    wall at (1,0)\n    door "out" at (2,0) exit\n  }\n}\n'
    field = field_of(text)
    assert ("R", 0, 0) not in field
    assert field[("R", 2, 0)] == 0


def test_burning_cells_are_not_sources_or_transit():
    text = 'floor "F" {\n  room "R" 3 x 1 {\n    door "out" at (2,0) exit\n  }\n}\n'
    blocked = field_of(text, {("R", 1, 0)})
    assert ("R", 1, 0) not in blocked
    assert ("R", 0, 0) not in blocked
    burnt_exit = field_of(text, {("R", 2, 0)})
    assert burnt_exit == {}


def test_locked_exit_is_not_a_source():
    idx = room('    door "out" at (0,0) locked exit\n')
    assert idx.distance_field() == {}


def test_multiple_exits_take_the_nearest():
    text = (
        'floor "F" {\n'
        '  room "R" 5 x 1 {\n'
        '    door "west" at (0,0) exit\n'
        '    door "east" at (4,0) exit\n'
        "  }\n"
        "}\n"
    )
    field = field_of(text)
    assert field[("R", 1, 0)] == 1
    assert field[("R", 2, 0)] == 2
    assert field[("R", 3, 0)] == 1


def test_field_spans_rooms_through_paired_doors():
    field = field_of(TWO_ROOMS)
    assert field[("B", 2, 1)] == 0
    assert field[("B", 0, 1)] == 2
    assert field[("A", 3, 1)] == 3
    assert field[("A", 0, 0)] == 7


def test_one_sided_lock_gives_asymmetric_distances():
    text = (
        'floor "F" {\n'
        '  room "A" 2 x 1 {\n    door "d" at (1,0) to "B" locked\n  }\n'
        '  room "B" 3 x 1 {\n    door "d" at (0,0) to "A"\n    door "out" at (2,0) exit\n  }\n'
        "}\n"
    )
    field = field_of(text)
    # B reaches the exit; A cannot leave through its locked door
    assert field[("B", 0, 0)] == 2
    assert ("A", 1, 0) not in field


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_field_never_increases_by_more_than_one_along_edges(seed):
    idx = ScenarioIndex(random_scenario(seed))
    field = idx.distance_field()
    for cell, dist in field.items():
        for nxt in idx.neighbors(cell):
            if nxt in field:
                assert dist <= field[nxt] + 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_single_room_field_matches_relaxation_oracle(seed):
    scn = random_scenario(seed, max_floors=1, rooms_per_floor=1,
                          max_width=8, max_height=8)
    idx = ScenarioIndex(scn)
    field = idx.distance_field()
    room_name = scn.floors[0].rooms[0].name
    oracle = grid_distances(scn)
    for (x, y), expected in oracle.items():
        actual = field.get((room_name, x, y))
        assert actual == expected, (seed, x, y, actual, expected)
