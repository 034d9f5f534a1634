"""Metamodeling kernel: schemas, reflective instances, change log, conformance.

A :class:`MetaModel` is a small Ecore-style schema — classes with typed,
bounded attributes, containment/plain references, single inheritance, and
declared (body-less) operations. A :class:`Model` is a pool of reflective
:class:`ModelObject` instances of one metamodel; every mutation goes through
``set_feature``/``add_feature`` and appends a :class:`ChangeEvent` to the
model's log, so a snapshot plus the log replays to the final state.

The built-in building-evacuation metamodel is produced by
:func:`build_bmod_metamodel`.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field

from .diagnostics import ERROR, Diagnostic

BOOLEAN = "boolean"
INTEGER = "integer"
STRING = "string"
ENUM = "enum"

ATTRIBUTE_KINDS = (BOOLEAN, INTEGER, STRING, ENUM)

UNBOUNDED = None  # upper bound sentinel


class ModelError(Exception):
    """Base for kernel errors."""


class MetamodelError(ModelError):
    """A metamodel violates its own invariants."""


class UnknownClassError(ModelError):
    pass


class AbstractClassError(ModelError):
    pass


class UnknownObjectError(ModelError):
    pass


class UnknownFeatureError(ModelError):
    pass


class TypeMismatchError(ModelError):
    pass


class UpperBoundExceededError(ModelError):
    pass


class InterchangeError(ModelError):
    """A model interchange document is malformed or non-conformant."""

    def __init__(self, message: str, diagnostics: list[Diagnostic] | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


@dataclass(frozen=True)
class MetaAttribute:
    name: str
    kind: str  # one of ATTRIBUTE_KINDS
    lower: int = 1
    upper: int | None = 1
    default: object = None
    literals: tuple[str, ...] = ()  # enum value set, empty otherwise


@dataclass(frozen=True)
class MetaReference:
    name: str
    target: str
    containment: bool = False
    lower: int = 0
    upper: int | None = 1


@dataclass(frozen=True)
class MetaOperation:
    name: str
    params: tuple[str, ...] = ()


@dataclass(frozen=True)
class MetaClass:
    name: str
    abstract: bool = False
    supertype: str | None = None
    attributes: tuple[MetaAttribute, ...] = ()
    references: tuple[MetaReference, ...] = ()
    operations: tuple[MetaOperation, ...] = ()


Feature = MetaAttribute | MetaReference


class MetaModel:
    """An ordered collection of metaclasses, validated at construction.

    Construction raises :class:`MetamodelError` unless class names are
    unique, every supertype/reference target names a class in the model, the
    supertype graph is acyclic, and feature names are unique within each
    class including inherited features.
    """

    def __init__(self, name: str, classes: list[MetaClass] | tuple[MetaClass, ...]):
        self.name = name
        self.classes: tuple[MetaClass, ...] = tuple(classes)
        self._by_name = {c.name: c for c in self.classes}
        self._features: dict[str, dict[str, Feature]] = {}
        self._check()

    def _check(self) -> None:
        names = [c.name for c in self.classes]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise MetamodelError(f"duplicate class names: {', '.join(dup)}")
        for cls in self.classes:
            if cls.supertype is not None and cls.supertype not in self._by_name:
                raise MetamodelError(f"{cls.name}: unknown supertype {cls.supertype!r}")
            for ref in cls.references:
                if ref.target not in self._by_name:
                    raise MetamodelError(f"{cls.name}.{ref.name}: unknown target {ref.target!r}")
        # supertype chains must terminate
        for cls in self.classes:
            seen = {cls.name}
            cur = cls.supertype
            while cur is not None:
                if cur in seen:
                    raise MetamodelError(f"supertype cycle through {cls.name}")
                seen.add(cur)
                cur = self._by_name[cur].supertype
        for cls in self.classes:
            resolved: dict[str, Feature] = {}
            for c in self._lineage(cls):
                for feat in list(c.attributes) + list(c.references):
                    if feat.name in resolved:
                        raise MetamodelError(
                            f"{cls.name}: duplicate feature {feat.name!r} (including inherited)"
                        )
                    resolved[feat.name] = feat
            self._features[cls.name] = resolved
        for cls in self.classes:
            for attr in cls.attributes:
                self._check_attribute(cls, attr)
            for ref in cls.references:
                if ref.lower < 0 or (ref.upper is not None and ref.upper < max(ref.lower, 1)):
                    raise MetamodelError(f"{cls.name}.{ref.name}: bad bounds {ref.lower}..{ref.upper}")

    def _check_attribute(self, cls: MetaClass, attr: MetaAttribute) -> None:
        if attr.kind not in ATTRIBUTE_KINDS:
            raise MetamodelError(f"{cls.name}.{attr.name}: unknown kind {attr.kind!r}")
        if attr.kind == ENUM and not attr.literals:
            raise MetamodelError(f"{cls.name}.{attr.name}: enum without literals")
        if attr.lower < 0 or (attr.upper is not None and attr.upper < max(attr.lower, 1)):
            raise MetamodelError(f"{cls.name}.{attr.name}: bad bounds {attr.lower}..{attr.upper}")
        if attr.default is not None and not value_matches(attr, attr.default):
            raise MetamodelError(f"{cls.name}.{attr.name}: default {attr.default!r} does not match {attr.kind}")

    def _lineage(self, cls: MetaClass):
        """Supertype-first chain ending at cls."""
        chain = []
        cur: MetaClass | None = cls
        while cur is not None:
            chain.append(cur)
            cur = self._by_name[cur.supertype] if cur.supertype else None
        return reversed(chain)

    def cls(self, name: str) -> MetaClass:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownClassError(f"unknown class {name!r}") from None

    def has_class(self, name: str) -> bool:
        return name in self._by_name

    def features_of(self, class_name: str) -> dict[str, Feature]:
        """All features of a class, inherited included, keyed by name."""
        if class_name not in self._features:
            raise UnknownClassError(f"unknown class {class_name!r}")
        return self._features[class_name]

    def is_kind_of(self, class_name: str, ancestor: str) -> bool:
        cur: str | None = class_name
        while cur is not None:
            if cur == ancestor:
                return True
            cur = self._by_name[cur].supertype
        return False


def value_matches(attr: MetaAttribute, value: object) -> bool:
    if attr.kind == BOOLEAN:
        return isinstance(value, bool)
    if attr.kind == INTEGER:
        return isinstance(value, int) and not isinstance(value, bool)
    if attr.kind == STRING:
        return isinstance(value, str)
    if attr.kind == ENUM:
        return isinstance(value, str) and value in attr.literals
    return False


@dataclass
class ModelObject:
    id: str
    class_name: str
    attrs: dict[str, list] = field(default_factory=dict)
    refs: dict[str, list[str]] = field(default_factory=dict)

    def slot(self, feature: str) -> list:
        if feature in self.attrs:
            return self.attrs[feature]
        return self.refs[feature]


@dataclass(frozen=True)
class ChangeEvent:
    seq: int
    object_id: str
    feature: str
    old: tuple
    new: tuple


class Model:
    """A pool of reflective objects conforming (by intent) to one metamodel.

    Single-writer: all mutations happen from one logical thread; the change
    log is per-model.
    """

    def __init__(self, metamodel: MetaModel):
        self.metamodel = metamodel
        self.objects: dict[str, ModelObject] = {}
        self.log: list[ChangeEvent] = []
        self._next_id = 1

    def instantiate(self, class_name: str) -> ModelObject:
        """Create a fresh object with defaulted attribute slots and empty references."""
        cls = self.metamodel.cls(class_name)
        if cls.abstract:
            raise AbstractClassError(f"class {class_name!r} is abstract")
        oid = f"o{self._next_id}"
        self._next_id += 1
        obj = ModelObject(id=oid, class_name=class_name)
        for feat in self.metamodel.features_of(class_name).values():
            if isinstance(feat, MetaAttribute):
                obj.attrs[feat.name] = [feat.default] if feat.default is not None else []
            else:
                obj.refs[feat.name] = []
        self.objects[oid] = obj
        return obj

    def object(self, object_id: str) -> ModelObject:
        try:
            return self.objects[object_id]
        except KeyError:
            raise UnknownObjectError(f"unknown object {object_id!r}") from None

    def _feature(self, obj: ModelObject, feature: str) -> Feature:
        feats = self.metamodel.features_of(obj.class_name)
        if feature not in feats:
            raise UnknownFeatureError(f"{obj.class_name} has no feature {feature!r}")
        return feats[feature]

    def _check_value(self, feat: Feature, value: object) -> None:
        if isinstance(feat, MetaAttribute):
            if not value_matches(feat, value):
                raise TypeMismatchError(
                    f"feature {feat.name!r} expects {feat.kind}, got {value!r}"
                )
        else:
            if not isinstance(value, str):
                raise TypeMismatchError(
                    f"reference {feat.name!r} expects an object id, got {value!r}"
                )

    def _record(self, obj: ModelObject, feature: str, old: list, new: list) -> ChangeEvent:
        event = ChangeEvent(
            seq=len(self.log) + 1,
            object_id=obj.id,
            feature=feature,
            old=tuple(old),
            new=tuple(new),
        )
        self.log.append(event)
        return event

    def set_feature(self, object_id: str, feature: str, value) -> ChangeEvent:
        """Replace a slot's contents. ``value`` may be a single literal/id or a list."""
        obj = self.object(object_id)
        feat = self._feature(obj, feature)
        new = list(value) if isinstance(value, (list, tuple)) else [value]
        for v in new:
            self._check_value(feat, v)
        if feat.upper is not None and len(new) > feat.upper:
            raise UpperBoundExceededError(
                f"{obj.class_name}.{feature}: {len(new)} values exceed upper bound {feat.upper}"
            )
        slot = obj.slot(feature)
        event = self._record(obj, feature, slot, new)
        slot[:] = new
        return event

    def add_feature(self, object_id: str, feature: str, value) -> ChangeEvent:
        """Append one value to a slot."""
        obj = self.object(object_id)
        feat = self._feature(obj, feature)
        self._check_value(feat, value)
        slot = obj.slot(feature)
        if feat.upper is not None and len(slot) + 1 > feat.upper:
            raise UpperBoundExceededError(
                f"{obj.class_name}.{feature}: appending past upper bound {feat.upper}"
            )
        event = self._record(obj, feature, slot, slot + [value])
        slot.append(value)
        return event

    def get_feature(self, object_id: str, feature: str) -> list:
        """Current slot contents (a copy); emits no change event."""
        obj = self.object(object_id)
        self._feature(obj, feature)
        return list(obj.slot(feature))

    def clone(self) -> "Model":
        """Deep snapshot sharing nothing with the original."""
        other = Model(self.metamodel)
        other.objects = {oid: copy.deepcopy(obj) for oid, obj in self.objects.items()}
        other.log = list(self.log)
        other._next_id = self._next_id
        return other


def apply_events(model: Model, events) -> None:
    """Replay change events onto a model by writing each event's new value.

    Used to reconstruct a final state from a snapshot plus the change log;
    values are written raw (they were validated when first recorded).
    """
    for ev in events:
        obj = model.object(ev.object_id)
        obj.slot(ev.feature)[:] = list(ev.new)


# --- conformance -------------------------------------------------------------

CONFORMANCE_RULES = {
    "CONF_UNKNOWN_CLASS": "object's class is not declared by the metamodel",
    "CONF_ABSTRACT_CLASS": "object instantiates an abstract class",
    "CONF_UNKNOWN_FEATURE": "slot names no declared or inherited feature",
    "CONF_TYPE_MISMATCH": "slot value does not match the feature's type",
    "CONF_LOWER_BOUND": "slot holds fewer values than the feature's lower bound",
    "CONF_UPPER_BOUND": "slot holds more values than the feature's upper bound",
    "CONF_DANGLING_REF": "reference names an object id that does not exist",
    "CONF_MULTIPLE_CONTAINERS": "object is held by more than one containment slot",
    "CONF_CONTAINMENT_CYCLE": "object lies on a containment cycle",
}


def _conf(code: str, message: str, location: str) -> Diagnostic:
    return Diagnostic(severity=ERROR, code=code, message=message, location=location)


def check_conformance(model: Model, metamodel: MetaModel | None = None) -> list[Diagnostic]:
    """Check typing, multiplicities, reference integrity, and the containment forest.

    Returns an empty list iff the model conforms. Findings are returned, not
    raised, and ordered by object insertion order (forest findings last).
    """
    mm = metamodel or model.metamodel
    out: list[Diagnostic] = []
    containment_edges: list[tuple[str, str]] = []  # (parent id, child id)

    for obj in model.objects.values():
        if not mm.has_class(obj.class_name):
            out.append(_conf("CONF_UNKNOWN_CLASS", f"unknown class {obj.class_name!r}", obj.id))
            continue
        if mm.cls(obj.class_name).abstract:
            out.append(_conf("CONF_ABSTRACT_CLASS", f"class {obj.class_name!r} is abstract", obj.id))
        feats = mm.features_of(obj.class_name)
        for name, values in list(obj.attrs.items()) + list(obj.refs.items()):
            feat = feats.get(name)
            if feat is None:
                out.append(_conf("CONF_UNKNOWN_FEATURE", f"{obj.class_name} has no feature {name!r}", obj.id))
                continue
            if isinstance(feat, MetaAttribute):
                for v in values:
                    if not value_matches(feat, v):
                        out.append(_conf(
                            "CONF_TYPE_MISMATCH",
                            f"{obj.class_name}.{name}: {v!r} is not {feat.kind}",
                            obj.id,
                        ))
            else:
                for v in values:
                    if not isinstance(v, str):
                        out.append(_conf(
                            "CONF_TYPE_MISMATCH",
                            f"{obj.class_name}.{name}: {v!r} is not an object id",
                            obj.id,
                        ))
                    elif v not in model.objects:
                        out.append(_conf(
                            "CONF_DANGLING_REF",
                            f"{obj.class_name}.{name}: no object {v!r}",
                            obj.id,
                        ))
                    else:
                        target = model.objects[v]
                        if mm.has_class(target.class_name) and not mm.is_kind_of(target.class_name, feat.target):
                            out.append(_conf(
                                "CONF_TYPE_MISMATCH",
                                f"{obj.class_name}.{name}: {v!r} is a {target.class_name}, not a {feat.target}",
                                obj.id,
                            ))
                        if feat.containment:
                            containment_edges.append((obj.id, v))
            if len(values) < feat.lower:
                out.append(_conf(
                    "CONF_LOWER_BOUND",
                    f"{obj.class_name}.{name}: {len(values)} value(s), lower bound {feat.lower}",
                    obj.id,
                ))
            if feat.upper is not None and len(values) > feat.upper:
                out.append(_conf(
                    "CONF_UPPER_BOUND",
                    f"{obj.class_name}.{name}: {len(values)} value(s), upper bound {feat.upper}",
                    obj.id,
                ))

    out.extend(_check_forest(model, containment_edges))
    return out


def _check_forest(model: Model, edges: list[tuple[str, str]]) -> list[Diagnostic]:
    """Containment edges must give each object at most one container and no cycles."""
    out = []
    container_count: dict[str, int] = {}
    parent: dict[str, str] = {}
    for parent_id, child_id in edges:
        if child_id not in model.objects:
            continue  # dangling, already reported
        container_count[child_id] = container_count.get(child_id, 0) + 1
        parent[child_id] = parent_id
    multi = [c for c, n in container_count.items() if n > 1]
    for child_id in sorted(multi, key=lambda i: list(model.objects).index(i)):
        out.append(_conf(
            "CONF_MULTIPLE_CONTAINERS",
            f"object held by {container_count[child_id]} containment slots",
            child_id,
        ))
    # cycle detection over the single-container parent function
    single_parent = {c: p for c, p in parent.items() if container_count[c] == 1}
    color: dict[str, int] = {}  # 1 = on stack, 2 = done
    on_cycle: set[str] = set()
    for start in model.objects:
        if color.get(start):
            continue
        path = []
        node = start
        while node in single_parent and not color.get(node):
            color[node] = 1
            path.append(node)
            node = single_parent[node]
        if color.get(node) == 1:  # rejoined the current stack: a cycle
            cycle = path[path.index(node):]
            on_cycle.update(cycle)
        for n in path:
            color[n] = 2
    for oid in (o for o in model.objects if o in on_cycle):
        out.append(_conf("CONF_CONTAINMENT_CYCLE", "containment cycle", oid))
    return out


# --- the built-in building-evacuation metamodel ------------------------------

DIRECTIONS = ("north", "south", "east", "west")


def build_bmod_metamodel() -> MetaModel:
    """The built-in metamodel: floors contain rooms contain a cell grid; cells
    host people, signs, and fire; rooms hold doors; walls are a cell subclass.
    """
    classes = [
        MetaClass(
            "Floor",
            attributes=(MetaAttribute("name", STRING),),
            references=(MetaReference("rooms", "Room", containment=True, lower=0, upper=UNBOUNDED),),
        ),
        MetaClass(
            "Room",
            attributes=(
                MetaAttribute("name", STRING),
                MetaAttribute("width", INTEGER),
                MetaAttribute("height", INTEGER),
            ),
            references=(
                MetaReference("cells", "Cell", containment=True, lower=0, upper=UNBOUNDED),
                MetaReference("doors", "Door", containment=True, lower=0, upper=UNBOUNDED),
            ),
        ),
        MetaClass(
            "Cell",
            attributes=(
                MetaAttribute("x", INTEGER),
                MetaAttribute("y", INTEGER),
                MetaAttribute("onFire", BOOLEAN, default=False),
            ),
            references=(
                MetaReference("people", "Person", containment=True, lower=0, upper=UNBOUNDED),
                MetaReference("signs", "EMSign", containment=True, lower=0, upper=UNBOUNDED),
            ),
        ),
        MetaClass("Wall", supertype="Cell"),
        MetaClass(
            "Person",
            attributes=(
                MetaAttribute("name", STRING),
                MetaAttribute("alive", BOOLEAN, default=True),
                MetaAttribute("evacuated", BOOLEAN, default=False),
            ),
        ),
        MetaClass(
            "Door",
            attributes=(
                MetaAttribute("name", STRING),
                MetaAttribute("locked", BOOLEAN, default=False),
                MetaAttribute("exit", BOOLEAN, default=False),
            ),
            references=(
                MetaReference("cell", "Cell", lower=1, upper=1),
                MetaReference("targetRoom", "Room", lower=0, upper=1),
            ),
        ),
        MetaClass(
            "EMSign",
            attributes=(MetaAttribute("direction", ENUM, literals=DIRECTIONS),),
        ),
        MetaClass(
            "CellNavigationManager",
            operations=(
                MetaOperation("neighbors", ("cell",)),
                MetaOperation("distanceField", ()),
            ),
        ),
        MetaClass(
            "SimulationManager",
            attributes=(
                MetaAttribute("time", INTEGER, default=0),
                MetaAttribute("paused", BOOLEAN, default=False),
            ),
            operations=(
                MetaOperation("pause", ()),
                MetaOperation("resume", ()),
                MetaOperation("step", ()),
                MetaOperation("run", ()),
            ),
        ),
    ]
    return MetaModel("bmod", classes)


# --- JSON interchange ---------------------------------------------------------

def model_to_json(model: Model) -> str:
    """Serialize a model to the interchange document (ids are strings, slots are lists)."""
    doc = {
        "metamodel": model.metamodel.name,
        "objects": [
            {
                "id": obj.id,
                "class": obj.class_name,
                "attrs": {k: list(v) for k, v in obj.attrs.items()},
                "refs": {k: list(v) for k, v in obj.refs.items()},
            }
            for obj in model.objects.values()
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def model_from_json(text: str, metamodel: MetaModel) -> Model:
    """Load an interchange document; rejects on any error-severity conformance finding."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "objects" not in doc:
        raise InterchangeError("missing 'objects'")
    if doc.get("metamodel") != metamodel.name:
        raise InterchangeError(
            f"document is for metamodel {doc.get('metamodel')!r}, expected {metamodel.name!r}"
        )
    model = Model(metamodel)
    max_num = 0
    for entry in doc["objects"]:
        if not isinstance(entry, dict) or not isinstance(entry.get("id"), str):
            raise InterchangeError("each object needs a string 'id'")
        oid = entry["id"]
        if oid in model.objects:
            raise InterchangeError(f"duplicate object id {oid!r}")
        obj = ModelObject(
            id=oid,
            class_name=str(entry.get("class", "")),
            attrs={str(k): list(v) for k, v in (entry.get("attrs") or {}).items()},
            refs={str(k): [str(i) for i in v] for k, v in (entry.get("refs") or {}).items()},
        )
        model.objects[oid] = obj
        if oid.startswith("o") and oid[1:].isdigit():
            max_num = max(max_num, int(oid[1:]))
    model._next_id = max_num + 1
    findings = check_conformance(model, metamodel)
    if findings:
        raise InterchangeError(
            f"document is not conformant ({len(findings)} finding(s))", findings
        )
    return model


# --- metamodel serialization (drives code generation from a file) -------------

def metamodel_to_json(mm: MetaModel) -> str:
    doc = {
        "name": mm.name,
        "classes": [
            {
                "name": c.name,
                "abstract": c.abstract,
                "supertype": c.supertype,
                "attributes": [
                    {
                        "name": a.name,
                        "kind": a.kind,
                        "lower": a.lower,
                        "upper": a.upper,
                        "default": a.default,
                        "literals": list(a.literals),
                    }
                    for a in c.attributes
                ],
                "references": [
                    {
                        "name": r.name,
                        "target": r.target,
                        "containment": r.containment,
                        "lower": r.lower,
                        "upper": r.upper,
                    }
                    for r in c.references
                ],
                "operations": [
                    {"name": o.name, "params": list(o.params)} for o in c.operations
                ],
            }
            for c in mm.classes
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def metamodel_from_json(text: str) -> MetaModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InterchangeError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("classes"), list):
        raise InterchangeError("metamodel document needs a 'classes' list")
    classes = []
    try:
        for c in doc["classes"]:
            classes.append(MetaClass(
                name=c["name"],
                abstract=bool(c.get("abstract", False)),
                supertype=c.get("supertype"),
                attributes=tuple(
                    MetaAttribute(
                        name=a["name"],
                        kind=a["kind"],
                        lower=int(a.get("lower", 1)),
                        upper=a.get("upper", 1) if a.get("upper", 1) is None else int(a.get("upper", 1)),
                        default=a.get("default"),
                        literals=tuple(a.get("literals") or ()),
                    )
                    for a in c.get("attributes", ())
                ),
                references=tuple(
                    MetaReference(
                        name=r["name"],
                        target=r["target"],
                        containment=bool(r.get("containment", False)),
                        lower=int(r.get("lower", 0)),
                        upper=r.get("upper", 1) if r.get("upper", 1) is None else int(r.get("upper", 1)),
                    )
                    for r in c.get("references", ())
                ),
                operations=tuple(
                    MetaOperation(name=o["name"], params=tuple(o.get("params", ())))
                    for o in c.get("operations", ())
                ),
            ))
    except (KeyError, TypeError, ValueError) as exc:
        raise InterchangeError(f"malformed metamodel document: {exc}") from exc
    try:
        return MetaModel(str(doc.get("name", "metamodel")), classes)
    except MetamodelError as exc:
        raise InterchangeError(f"invalid metamodel: {exc}") from exc
