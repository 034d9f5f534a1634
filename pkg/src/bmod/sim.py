"""Deterministic discrete-time evacuation simulation.

Each step runs fixed phases in order: fire spread, distance-field refresh,
movement (people in declaration order), then outcomes, then the clock. Fire
spreads to orthogonal neighbors within a room only; doors do not carry it.
People either follow a sign on their cell or step to the first neighbor that
strictly lowers the distance to an exit, probing north, east, south, west,
then door crossings. Nothing draws randomness, so a scenario and a config
fully determine the trace. Events are recorded with the tick at which their
step completes; people caught by the initial fire die at tick 0.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .diagnostics import Diagnostic
from .nav import DIRECTION_DELTAS, GRID_STEPS, Cell, ScenarioIndex
from .scenario import Scenario
from .serializer import serialize
from .validator import validate

POLICIES = ("signs_first", "shortest_path")

SNAPSHOT_FORMAT = "bmod-sim-state"
SNAPSHOT_VERSION = 1


class SimPausedError(Exception):
    """step/run called while the simulation is paused."""


class SimTerminatedError(Exception):
    """step called after the tick budget was exhausted."""


class SnapshotError(Exception):
    """A snapshot document is malformed or inconsistent."""


class InvalidScenarioError(Exception):
    """The scenario has validation errors and cannot be simulated."""

    def __init__(self, diagnostics: list[Diagnostic]):
        super().__init__(f"scenario has {len(diagnostics)} validation error(s)")
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SimConfig:
    seed: int = 0
    max_ticks: int = 10_000
    fire_period: int = 1  # steps between spreads; 0 freezes the fire
    policy: str = "signs_first"

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ValueError(f"unknown policy {self.policy!r}, expected one of {POLICIES}")
        if self.max_ticks < 0:
            raise ValueError("max_ticks must be >= 0")
        if self.fire_period < 0:
            raise ValueError("fire_period must be >= 0")


@dataclass
class PersonState:
    name: str
    cell: Cell
    alive: bool = True
    evacuated: bool = False

    @property
    def active(self) -> bool:
        return self.alive and not self.evacuated

    @property
    def outcome(self) -> str:
        if self.evacuated:
            return "evacuated"
        if not self.alive:
            return "dead"
        return "trapped"


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    kind: str  # ignite | move | cross | death | evacuation | pause | resume
    data: dict = field(default_factory=dict, compare=True)

    def to_dict(self) -> dict:
        return {"tick": self.tick, "kind": self.kind, **self.data}


def _cell_json(cell: Cell) -> list:
    return [cell[0], cell[1], cell[2]]


def trace_to_jsonl(events: list[TraceEvent]) -> str:
    lines = [json.dumps(ev.to_dict(), sort_keys=True, separators=(",", ":")) for ev in events]
    return "".join(line + "\n" for line in lines)


@dataclass(frozen=True)
class SimulationResult:
    ticks: int
    evacuated: int
    dead: int
    trapped: int
    outcomes: dict[str, str]
    burning: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"


class Simulation:
    def __init__(self, scenario: Scenario, config: SimConfig | None = None):
        errors = [d for d in validate(scenario) if d.is_error]
        if errors:
            raise InvalidScenarioError(errors)
        self.scenario = scenario
        self.config = config or SimConfig()
        self.index = ScenarioIndex(scenario)
        self.tick = 0
        self.paused = False
        self.burning: set[Cell] = set(self.index.initial_fires)
        self.trace: list[TraceEvent] = []
        self.people: list[PersonState] = [
            PersonState(name=start.decl.name, cell=start.cell) for start in self.index.people
        ]
        self._field: dict[Cell, int] | None = None
        for person in self.people:
            if person.cell in self.burning:
                person.alive = False
                self._emit(0, "death", person=person.name, cell=_cell_json(person.cell))

    # --- events ---

    def _emit(self, tick: int, kind: str, **data) -> None:
        self.trace.append(TraceEvent(tick=tick, kind=kind, data=data))

    # --- control ---

    def pause(self) -> None:
        if not self.paused:
            self.paused = True
            self._emit(self.tick, "pause")

    def resume(self) -> None:
        if self.paused:
            self.paused = False
            self._emit(self.tick, "resume")

    @property
    def active_people(self) -> list[PersonState]:
        return [p for p in self.people if p.active]

    def field(self) -> dict[Cell, int]:
        if self._field is None:
            self._field = self.index.distance_field(self.burning)
        return self._field

    # --- stepping ---

    def step(self) -> None:
        if self.paused:
            raise SimPausedError("simulation is paused")
        if self.tick >= self.config.max_ticks:
            raise SimTerminatedError(f"tick budget of {self.config.max_ticks} exhausted")
        now = self.tick + 1

        if self.config.fire_period > 0 and now % self.config.fire_period == 0:
            self._spread_fire(now)

        for person in self.people:
            if person.active:
                self._move_person(person, now)

        for person in self.people:
            if not person.active:
                continue
            if person.cell in self.index.exit_cells:
                person.evacuated = True
                self._emit(now, "evacuation", person=person.name, cell=_cell_json(person.cell))
            elif person.cell in self.burning:
                person.alive = False
                self._emit(now, "death", person=person.name, cell=_cell_json(person.cell))

        self.tick = now

    def _spread_fire(self, now: int) -> None:
        fresh: set[Cell] = set()
        for room, x, y in self.burning:
            for dx, dy in GRID_STEPS:
                nxt = (room, x + dx, y + dy)
                if nxt not in self.burning and self.index.is_free(nxt):
                    fresh.add(nxt)
        for cell in sorted(fresh):
            self._emit(now, "ignite", cell=_cell_json(cell))
        if fresh:
            self.burning |= fresh
            self._field = None

    def _move_person(self, person: PersonState, now: int) -> None:
        cur = person.cell
        if self.config.policy == "signs_first":
            direction = self.index.signs_at.get(cur)
            if direction is not None:
                dx, dy = DIRECTION_DELTAS[direction]
                target = (cur[0], cur[1] + dx, cur[2] + dy)
                if self.index.is_free(target) and target not in self.burning:
                    person.cell = target
                    self._emit(now, "move", person=person.name,
                               src=_cell_json(cur), dst=_cell_json(target))
                    return
        field = self.field()
        here = field.get(cur)
        best: Cell | None = None
        best_dist = here if here is not None else float("inf")
        for nxt in self.index.neighbors(cur):
            d = field.get(nxt)
            if d is not None and d < best_dist:
                best, best_dist = nxt, d
        if best is None:
            return
        person.cell = best
        if best[0] != cur[0]:
            door = next(d for d in self.index.doors_at[cur] if self.index.jump_target(d) == best)
            self._emit(now, "cross", person=person.name, door=door.decl.name,
                       src=_cell_json(cur), dst=_cell_json(best))
        else:
            self._emit(now, "move", person=person.name,
                       src=_cell_json(cur), dst=_cell_json(best))

    def run(self) -> SimulationResult:
        """Step until everyone is evacuated or dead, or the tick budget runs out."""
        if self.paused:
            raise SimPausedError("simulation is paused")
        while self.active_people and self.tick < self.config.max_ticks:
            self.step()
        return self.result()

    def result(self) -> SimulationResult:
        outcomes = {p.name: p.outcome for p in self.people}
        counts = {"evacuated": 0, "dead": 0, "trapped": 0}
        for p in self.people:
            counts[p.outcome] += 1
        return SimulationResult(
            ticks=self.tick,
            evacuated=counts["evacuated"],
            dead=counts["dead"],
            trapped=counts["trapped"],
            outcomes=outcomes,
            burning=len(self.burning),
        )

    # --- snapshots ---

    def snapshot(self) -> str:
        doc = {
            "format": SNAPSHOT_FORMAT,
            "version": SNAPSHOT_VERSION,
            "scenario": serialize(self.scenario),
            "config": asdict(self.config),
            "tick": self.tick,
            "paused": self.paused,
            "burning": [_cell_json(c) for c in sorted(self.burning)],
            "people": [
                {
                    "name": p.name,
                    "cell": _cell_json(p.cell),
                    "alive": p.alive,
                    "evacuated": p.evacuated,
                }
                for p in self.people
            ],
            "trace": [ev.to_dict() for ev in self.trace],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def restore(cls, text: str) -> "Simulation":
        from .parser import parse

        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SnapshotError(f"not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("format") != SNAPSHOT_FORMAT:
            raise SnapshotError(f"not a {SNAPSHOT_FORMAT} document")
        if doc.get("version") != SNAPSHOT_VERSION:
            raise SnapshotError(f"unsupported snapshot version {doc.get('version')!r}")
        result = parse(doc.get("scenario", ""))
        if result.scenario is None:
            raise SnapshotError("snapshot scenario does not parse")
        try:
            config = SimConfig(**doc.get("config", {}))
            sim = cls(result.scenario, config)
            sim.tick = int(doc["tick"])
            sim.paused = bool(doc["paused"])
            sim.burning = {(str(r), int(x), int(y)) for r, x, y in doc["burning"]}
            states = {p["name"]: p for p in doc["people"]}
            if set(states) != {p.name for p in sim.people}:
                raise SnapshotError("snapshot people do not match the scenario")
            for person in sim.people:
                entry = states[person.name]
                room, x, y = entry["cell"]
                person.cell = (str(room), int(x), int(y))
                person.alive = bool(entry["alive"])
                person.evacuated = bool(entry["evacuated"])
            sim.trace = [
                TraceEvent(
                    tick=int(ev["tick"]),
                    kind=str(ev["kind"]),
                    data={k: v for k, v in ev.items() if k not in ("tick", "kind")},
                )
                for ev in doc["trace"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise SnapshotError(f"malformed snapshot: {exc}") from exc
        sim._field = None
        return sim


def simulate(scenario: Scenario, config: SimConfig | None = None) -> SimulationResult:
    return Simulation(scenario, config).run()
