"""Synthesize hierarchical statecharts from Petri nets.

The pipeline builds a flat statechart over the input net, then derives
hierarchy by collapsing the net with two reduction rules while the
transformation trace links every net element to its chart counterpart.
"""

from .bench import BenchReport, BenchRow, PhaseSample, bench
from .chart import (
    AndState,
    Basic,
    HyperEdge,
    Node,
    NodeList,
    OrState,
    StateChart,
    validate_chart,
)
from .engine import (
    Rule,
    TraceEntry,
    TransformationContext,
    input_id,
    input_key,
)
from .errors import (
    DuplicateIdError,
    MembershipError,
    ModelError,
    NetchartError,
    ParseError,
    PreconditionError,
    TraceError,
    TransformationError,
    TreeError,
    ValidationError,
)
from .formats import (
    detect_format,
    parse_chart,
    parse_net,
    parse_trace,
    write_chart,
    write_net,
    write_trace,
)
from .generator import SpSpec, generate_sp
from .net import IdSet, PetriNet, Place, Transition, check_net, find_self_loops
from .pipeline import (
    ReductionReport,
    RuleSet,
    TransformResult,
    initialize,
    reduce,
    transform,
    try_and_rule,
    try_or_rule,
)

__all__ = [
    "AndState",
    "Basic",
    "BenchReport",
    "BenchRow",
    "DuplicateIdError",
    "HyperEdge",
    "IdSet",
    "MembershipError",
    "ModelError",
    "NetchartError",
    "Node",
    "NodeList",
    "OrState",
    "ParseError",
    "PetriNet",
    "PhaseSample",
    "Place",
    "PreconditionError",
    "ReductionReport",
    "Rule",
    "RuleSet",
    "SpSpec",
    "StateChart",
    "TraceEntry",
    "TraceError",
    "Transition",
    "TransformResult",
    "TransformationContext",
    "TransformationError",
    "TreeError",
    "ValidationError",
    "bench",
    "check_net",
    "detect_format",
    "find_self_loops",
    "generate_sp",
    "initialize",
    "input_id",
    "input_key",
    "parse_chart",
    "parse_net",
    "parse_trace",
    "reduce",
    "transform",
    "try_and_rule",
    "try_or_rule",
    "validate_chart",
    "write_chart",
    "write_net",
    "write_trace",
]
