"""Shared fixtures: the hand-traced scenarios and corpus discovery."""

from __future__ import annotations

import os

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SCENARIO_DIR = os.path.join(ROOT, "scenarios")
GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")

# a 3 x 1 corridor: one person two steps from the only exit
CORRIDOR = (
    'floor "G" {\n'
    '  room "A" 3 x 1 {\n'
    '    person "p" at (0,0)\n'
    '    door "out" at (2,0) exit\n'
    "  }\n"
    "}\n"
)

# fire in the middle of an empty 3 x 3 room
CENTER_FIRE = (
    'floor "G" {\n'
    '  room "B" 3 x 3 {\n'
    "    fire at (1,1)\n"
    "  }\n"
    "}\n"
)

# no exits at all: the fire wins
SEALED = (
    'floor "G" {\n'
    '  room "C" 3 x 1 {\n'
    "    fire at (0,0)\n"
    '    person "trapped" at (2,0)\n'
    "  }\n"
    "}\n"
)

TWO_ROOMS = (
    'floor "G" {\n'
    '  room "A" 4 x 3 {\n'
    '    person "ana" at (0,0)\n'
    "    sign at (2,0) facing east\n"
    '    door "ab" at (3,1) to "B"\n'
    "    fire at (0,2)\n"
    "  }\n"
    '  room "B" 3 x 3 {\n'
    '    door "ab" at (0,1) to "A"\n'
    '    door "out" at (2,1) exit\n'
    "  }\n"
    "}\n"
)


@pytest.fixture(scope="session")
def scenario_dir() -> str:
    return SCENARIO_DIR


@pytest.fixture(scope="session")
def corpus_paths() -> list:
    names = sorted(n for n in os.listdir(SCENARIO_DIR) if n.endswith(".bmod"))
    assert names, "scenario corpus is empty"
    return [os.path.join(SCENARIO_DIR, n) for n in names]
