"""Language workbench and deterministic simulator for building-evacuation scenarios."""

from .diagnostics import ERROR, WARNING, Diagnostic, SourceSpan
from .lowering import lower
from .meta import (
    MetaAttribute,
    MetaClass,
    MetaModel,
    MetaOperation,
    MetaReference,
    Model,
    build_bmod_metamodel,
    check_conformance,
    metamodel_from_json,
    metamodel_to_json,
    model_from_json,
    model_to_json,
)
from .nav import ScenarioIndex, compute_distance_field
from .parser import ParseResult, parse, parse_bytes
from .randgen import random_scenario
from .scenario import DoorDecl, FloorDecl, PersonDecl, RoomDecl, Scenario, SignDecl
from .serializer import serialize
from .sim import SimConfig, Simulation, SimulationResult, simulate, trace_to_jsonl
from .validator import VALIDATION_RULES, validate
from .views import ViewStyle, export_class_diagram, export_spreadsheet, render_scenario

__version__ = "0.1.0"

__all__ = [
    "ERROR",
    "WARNING",
    "Diagnostic",
    "SourceSpan",
    "MetaAttribute",
    "MetaClass",
    "MetaModel",
    "MetaOperation",
    "MetaReference",
    "Model",
    "build_bmod_metamodel",
    "check_conformance",
    "metamodel_from_json",
    "metamodel_to_json",
    "model_from_json",
    "model_to_json",
    "ScenarioIndex",
    "compute_distance_field",
    "ParseResult",
    "parse",
    "parse_bytes",
    "random_scenario",
    "DoorDecl",
    "FloorDecl",
    "PersonDecl",
    "RoomDecl",
    "Scenario",
    "SignDecl",
    "serialize",
    "lower",
    "SimConfig",
    "Simulation",
    "SimulationResult",
    "simulate",
    "trace_to_jsonl",
    "VALIDATION_RULES",
    "validate",
    "ViewStyle",
    "export_class_diagram",
    "export_spreadsheet",
    "render_scenario",
    "__version__",
]
