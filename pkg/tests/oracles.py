"""Independent re-derivations used as oracles.

Everything here is computed from first principles with different algorithms
and different traversal code than the package uses, so agreement between the
two is evidence rather than tautology: distances come from iterative
relaxation instead of breadth-first search, and containment checking walks
explicit parent chains instead of coloring a graph.
"""

from __future__ import annotations

from bmod.meta import MetaModel, Model
from bmod.scenario import Scenario

Coord = tuple[int, int]


def grid_distances(scenario: Scenario, burning: frozenset[Coord] = frozenset()) -> dict:
    """Exit-hop distances for a single-room scenario, by relaxation to fixpoint.

    Returns (x, y) -> hop count, with None for cells no exit can be reached
    from. Burning cells are dropped from the grid entirely.
    """
    assert len(scenario.floors) == 1 and len(scenario.floors[0].rooms) == 1
    room = scenario.floors[0].rooms[0]
    walls = {
        (x, y) for x, y in room.walls
        if 0 <= x < room.width and 0 <= y < room.height
    }
    cells = {
        (x, y)
        for x in range(room.width)
        for y in range(room.height)
        if (x, y) not in walls and (x, y) not in burning
    }
    exits = {
        (d.x, d.y) for d in room.doors
        if d.exit and not d.locked and (d.x, d.y) in cells
    }
    dist: dict = {c: (0 if c in exits else None) for c in cells}
    changed = True
    while changed:
        changed = False
        for x, y in cells:
            best = dist[(x, y)]
            for nb in ((x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)):
                if nb in cells and dist[nb] is not None:
                    step = dist[nb] + 1
                    if best is None or step < best:
                        best = step
            if best != dist[(x, y)]:
                dist[(x, y)] = best
                changed = True
    return dist


def _containment_features(mm: MetaModel, class_name: str) -> list:
    feats = []
    seen = set()
    cur = class_name
    while cur is not None and cur not in seen:
        seen.add(cur)
        cls = next((c for c in mm.classes if c.name == cur), None)
        if cls is None:
            break
        feats.extend(r.name for r in cls.references if r.containment)
        cur = cls.supertype
    return feats


def containers_of(model: Model, mm: MetaModel) -> dict:
    """id -> list of container ids, by scanning every containment slot."""
    parents: dict = {oid: [] for oid in model.objects}
    for oid, obj in model.objects.items():
        for feat in _containment_features(mm, obj.class_name):
            for child in obj.refs.get(feat, ()):
                if child in parents:
                    parents[child].append(oid)
    return parents


def forest_report(model: Model, mm: MetaModel) -> tuple:
    """(multi-container ids, on-cycle ids) by explicit parent-chain walking.

    An object lies on a cycle iff walking its unique-parent chain for N steps
    (N = object count) never reaches a root; the landing object is then inside
    the cycle, which one more lap collects. Objects with several containers
    have no unique parent and are excluded from the walk, as in the kernel.
    """
    all_parents = containers_of(model, mm)
    multi = sorted(oid for oid, ps in all_parents.items() if len(ps) > 1)
    parent = {oid: ps[0] for oid, ps in all_parents.items() if len(ps) == 1}
    n = len(all_parents)
    on_cycle: set = set()
    for oid in parent:
        cur = oid
        for _ in range(n):
            if cur not in parent:
                break
            cur = parent[cur]
        else:
            cycle = {cur}
            walker = parent[cur]
            while walker != cur:
                cycle.add(walker)
                walker = parent[walker]
            on_cycle |= cycle
    return multi, sorted(on_cycle)
