"""Deterministic document IO for nets, charts and traces.

Two self-contained formats per model: XML and a JSON mirror.  Writers
emit UTF-8 bytes with LF line endings, two-space indentation and a
fixed attribute order, so equal models produce identical bytes.
Parsers are strict: unknown elements, attributes or keys are syntax
errors; semantic problems (duplicate ids, dangling references, empty
transition sides) raise model errors naming the offending id.

Ids must be nonempty and free of whitespace because the XML documents
carry space-separated id lists; parsers and writers both enforce this.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from typing import Iterable
from xml.sax.saxutils import quoteattr

from .chart import AndState, Basic, HyperEdge, Node, OrState, StateChart, validate_chart
from .engine import TraceEntry
from .errors import (
    MembershipError,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .net import PetriNet, check_net

FORMATS = ("xml", "json")

_NODE_SUFFIX = re.compile(r"^s(\d+)$")
_EDGE_SUFFIX = re.compile(r"^h(\d+)$")


def detect_format(data: bytes | str) -> str:
    """Guess the document format from the first non-whitespace character."""
    if isinstance(data, bytes):
        head = data.lstrip()[:1].decode("utf-8", "replace")
    else:
        head = data.lstrip()[:1]
    if head == "<":
        return "xml"
    if head in ("{", "["):
        return "json"
    raise ParseError("cannot detect document format (expected XML or JSON)")


def _pick_format(data: bytes | str, format: str | None) -> str:
    if format is None:
        return detect_format(data)
    if format not in FORMATS:
        raise PreconditionError(f"unknown format {format!r}, expected one of {FORMATS}")
    return format


def _check_id(kind: str, value: str) -> str:
    if not isinstance(value, str) or not value or any(ch.isspace() for ch in value):
        raise PreconditionError(
            f"{kind} id {value!r} must be a nonempty string without whitespace"
        )
    return value


def _xml_root(data: bytes | str, expected_tag: str) -> ET.Element:
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(
            f"xml syntax error at line {line}, column {column}: {exc.msg}"
        ) from exc
    except ValueError as exc:
        # e.g. a str carrying an encoding declaration
        raise ParseError(f"xml error: {exc}") from exc
    if root.tag != expected_tag:
        raise ParseError(f"expected root element <{expected_tag}>, found <{root.tag}>")
    return root


def _attrs(elem: ET.Element, required: tuple[str, ...]) -> list[str]:
    got = set(elem.attrib)
    need = set(required)
    if got != need:
        missing = ", ".join(sorted(need - got))
        extra = ", ".join(sorted(got - need))
        detail = "; ".join(
            part
            for part in (
                f"missing: {missing}" if missing else "",
                f"unexpected: {extra}" if extra else "",
            )
            if part
        )
        raise ParseError(f"element <{elem.tag}>: bad attributes ({detail})")
    return [elem.attrib[name] for name in required]


def _reject_text(elem: ET.Element) -> None:
    if elem.text and elem.text.strip():
        raise ParseError(f"unexpected text inside <{elem.tag}>")
    for child in elem:
        if child.tail and child.tail.strip():
            raise ParseError(f"unexpected text after <{child.tag}>")


def _json_document(data: bytes | str):
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"json syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc


def _json_object(obj, what: str, keys: tuple[str, ...]) -> list:
    if not isinstance(obj, dict):
        raise ParseError(f"{what} must be an object, got {type(obj).__name__}")
    got = set(obj)
    need = set(keys)
    if got != need:
        missing = ", ".join(sorted(need - got))
        extra = ", ".join(sorted(got - need))
        detail = "; ".join(
            part
            for part in (
                f"missing: {missing}" if missing else "",
                f"unexpected: {extra}" if extra else "",
            )
            if part
        )
        raise ParseError(f"{what}: bad keys ({detail})")
    return [obj[key] for key in keys]


def _string(value, what: str) -> str:
    if not isinstance(value, str):
        raise ParseError(f"{what} must be a string, got {type(value).__name__}")
    return value


def _string_list(value, what: str) -> list[str]:
    if not isinstance(value, list):
        raise ParseError(f"{what} must be a list, got {type(value).__name__}")
    return [_string(item, f"{what} entry") for item in value]


def _dump_json(obj) -> bytes:
    return (json.dumps(obj, indent=2) + "\n").encode("utf-8")


# -- Petri nets ------------------------------------------------------------


def parse_net(data: bytes | str, format: str | None = None) -> PetriNet:
    """Read a net document; the format is sniffed when not given."""
    format = _pick_format(data, format)
    if format == "xml":
        return _net_from_xml(data)
    return _net_from_json(data)


def _net_from_xml(data: bytes | str) -> PetriNet:
    root = _xml_root(data, "petrinet")
    (name,) = _attrs(root, ("name",))
    _reject_text(root)
    net = PetriNet(name)
    for elem in root:
        if elem.tag == "place":
            (pid,) = _attrs(elem, ("id",))
            if len(elem):
                raise ParseError("element <place> cannot contain child elements")
            net.add_place(_check_id("place", pid))
        elif elem.tag == "transition":
            tid, src, tgt = _attrs(elem, ("id", "src", "tgt"))
            if len(elem):
                raise ParseError("element <transition> cannot contain child elements")
            net.add_transition(_check_id("transition", tid), src.split(), tgt.split())
        else:
            raise ParseError(f"unexpected element <{elem.tag}> inside <petrinet>")
    return net


def _net_from_json(data: bytes | str) -> PetriNet:
    obj = _json_document(data)
    name, places, transitions = _json_object(
        obj, "net document", ("name", "places", "transitions")
    )
    net = PetriNet(_string(name, "net name"))
    if not isinstance(places, list):
        raise ParseError("'places' must be a list")
    for entry in places:
        (pid,) = _json_object(entry, "place", ("id",))
        net.add_place(_check_id("place", _string(pid, "place id")))
    if not isinstance(transitions, list):
        raise ParseError("'transitions' must be a list")
    for entry in transitions:
        tid, src, tgt = _json_object(entry, "transition", ("id", "src", "tgt"))
        net.add_transition(
            _check_id("transition", _string(tid, "transition id")),
            _string_list(src, "'src'"),
            _string_list(tgt, "'tgt'"),
        )
    return net


def write_net(net: PetriNet, format: str = "xml") -> bytes:
    """Serialize a net; refuses nets with structural violations."""
    if format not in FORMATS:
        raise PreconditionError(f"unknown format {format!r}, expected one of {FORMATS}")
    violations = check_net(net)
    if violations:
        raise ValidationError(f"net {net.name!r} is not well formed", violations)
    for place in net.places.values():
        _check_id("place", place.id)
    for transition in net.transitions.values():
        _check_id("transition", transition.id)
    if format == "xml":
        lines = [f"<petrinet name={quoteattr(net.name)}>"]
        for place in net.places.values():
            lines.append(f"  <place id={quoteattr(place.id)}/>")
        for t in net.transitions.values():
            src = " ".join(p.id for p in t.preset)
            tgt = " ".join(p.id for p in t.postset)
            lines.append(
                f"  <transition id={quoteattr(t.id)} src={quoteattr(src)}"
                f" tgt={quoteattr(tgt)}/>"
            )
        lines.append("</petrinet>")
        return ("\n".join(lines) + "\n").encode("utf-8")
    return _dump_json(
        {
            "name": net.name,
            "places": [{"id": p.id} for p in net.places.values()],
            "transitions": [
                {
                    "id": t.id,
                    "src": [p.id for p in t.preset],
                    "tgt": [p.id for p in t.postset],
                }
                for t in net.transitions.values()
            ],
        }
    )


# -- statecharts -----------------------------------------------------------


def parse_chart(data: bytes | str, format: str | None = None) -> StateChart:
    """Read a chart document; raises on any well-formedness violation."""
    format = _pick_format(data, format)
    if format == "xml":
        chart, nodes, preorder = _chart_tree_from_xml(data)
    else:
        chart, nodes, preorder = _chart_tree_from_json(data)
    violations = validate_chart(chart)
    if violations:
        raise ValidationError(f"chart {chart.name!r} is not well formed", violations)
    _advance_counters(chart, preorder)
    return chart


def _resolve_endpoints(edge_id: str, ids: list[str], nodes: dict[str, Node]) -> list[Basic]:
    endpoints = []
    for node_id in ids:
        node = nodes.get(node_id)
        if node is None:
            raise MembershipError(
                f"hyperedge {edge_id!r}: unknown state {node_id!r}"
            )
        if not isinstance(node, Basic):
            raise PreconditionError(
                f"hyperedge {edge_id!r}: endpoint {node_id!r} is not a basic state"
            )
        endpoints.append(node)
    return endpoints


def _advance_counters(chart: StateChart, preorder: int) -> None:
    # keep future generated ids collision-free after parsing
    top = preorder
    for node in chart.states():
        match = _NODE_SUFFIX.match(node.id)
        if match:
            top = max(top, int(match.group(1)) + 1)
    chart._next_node = top
    edges = len(chart.hyperedges)
    for edge in chart.hyperedges:
        match = _EDGE_SUFFIX.match(edge.id)
        if match:
            edges = max(edges, int(match.group(1)) + 1)
    chart._next_edge = edges


def _state_node_from_xml(elem: ET.Element) -> Node:
    if elem.tag == "basic":
        node_id, place = _attrs(elem, ("id", "place"))
        if len(elem):
            raise ParseError("element <basic> cannot contain child elements")
        return Basic(_check_id("state", node_id), _check_id("place", place))
    if elem.tag == "or":
        (node_id,) = _attrs(elem, ("id",))
        return OrState(_check_id("state", node_id))
    if elem.tag == "and":
        (node_id,) = _attrs(elem, ("id",))
        return AndState(_check_id("state", node_id))
    raise ParseError(f"unexpected element <{elem.tag}> in a state tree")


def _chart_tree_from_xml(data: bytes | str):
    root = _xml_root(data, "statechart")
    (name,) = _attrs(root, ("name",))
    _reject_text(root)
    children = list(root)
    if not children or children[0].tag not in ("and", "or", "basic"):
        raise ParseError("<statechart> must start with its topstate element")
    top_elem = children[0]
    edge_elems = children[1:]
    for elem in edge_elems:
        if elem.tag != "hyperedge":
            raise ParseError(
                f"unexpected element <{elem.tag}> after the topstate (want <hyperedge>)"
            )

    chart = StateChart(name)
    nodes: dict[str, Node] = {}
    serial = 0
    root_node: Node | None = None
    stack: list[tuple[ET.Element, Node | None]] = [(top_elem, None)]
    while stack:
        elem, parent = stack.pop()
        _reject_text(elem)
        node = _state_node_from_xml(elem)
        node.serial = serial
        serial += 1
        nodes[node.id] = node
        if parent is None:
            root_node = node
        else:
            parent.attach(node)  # alternation breaches raise TreeError
        if not isinstance(node, Basic):
            for child in reversed(list(elem)):
                stack.append((child, node))
    chart.topstate = root_node  # type: ignore[assignment]

    for elem in edge_elems:
        edge_id, transition, src, tgt = _attrs(
            elem, ("id", "transition", "src", "tgt")
        )
        if len(elem):
            raise ParseError("element <hyperedge> cannot contain child elements")
        _reject_text(elem)
        edge = HyperEdge(_check_id("hyperedge", edge_id), _check_id("transition", transition))
        edge.sources = _resolve_endpoints(edge.id, src.split(), nodes)
        edge.targets = _resolve_endpoints(edge.id, tgt.split(), nodes)
        chart.hyperedges.append(edge)
    return chart, nodes, serial


def _state_node_from_json(obj) -> tuple[Node, list]:
    if not isinstance(obj, dict):
        raise ParseError(f"state must be an object, got {type(obj).__name__}")
    kind = obj.get("kind")
    if kind == "basic":
        _, node_id, place = _json_object(obj, "basic state", ("kind", "id", "place"))
        node = Basic(
            _check_id("state", _string(node_id, "state id")),
            _check_id("place", _string(place, "'place'")),
        )
        return node, []
    if kind in ("or", "and"):
        _, node_id, children = _json_object(
            obj, f"{kind} state", ("kind", "id", "children")
        )
        if not isinstance(children, list):
            raise ParseError("'children' must be a list")
        cls = OrState if kind == "or" else AndState
        return cls(_check_id("state", _string(node_id, "state id"))), children
    raise ParseError(f"state 'kind' must be 'basic', 'or' or 'and', got {kind!r}")


def _chart_tree_from_json(data: bytes | str):
    obj = _json_document(data)
    name, topstate, hyperedges = _json_object(
        obj, "chart document", ("name", "topstate", "hyperedges")
    )
    chart = StateChart(_string(name, "chart name"))
    nodes: dict[str, Node] = {}
    serial = 0
    root_node: Node | None = None
    stack: list[tuple[object, Node | None]] = [(topstate, None)]
    while stack:
        entry, parent = stack.pop()
        node, children = _state_node_from_json(entry)
        node.serial = serial
        serial += 1
        nodes[node.id] = node
        if parent is None:
            root_node = node
        else:
            parent.attach(node)
        for child in reversed(children):
            stack.append((child, node))
    chart.topstate = root_node  # type: ignore[assignment]

    if not isinstance(hyperedges, list):
        raise ParseError("'hyperedges' must be a list")
    for entry in hyperedges:
        edge_id, transition, src, tgt = _json_object(
            entry, "hyperedge", ("id", "transition", "src", "tgt")
        )
        edge = HyperEdge(
            _check_id("hyperedge", _string(edge_id, "hyperedge id")),
            _check_id("transition", _string(transition, "'transition'")),
        )
        edge.sources = _resolve_endpoints(edge.id, _string_list(src, "'src'"), nodes)
        edge.targets = _resolve_endpoints(edge.id, _string_list(tgt, "'tgt'"), nodes)
        chart.hyperedges.append(edge)
    return chart, nodes, serial


def _by_creation(endpoints: list[Basic]) -> list[Basic]:
    return sorted(endpoints, key=lambda basic: basic.serial)


def write_chart(chart: StateChart, format: str = "xml") -> bytes:
    """Serialize a chart; refuses charts that fail validation."""
    if format not in FORMATS:
        raise PreconditionError(f"unknown format {format!r}, expected one of {FORMATS}")
    violations = validate_chart(chart)
    if violations:
        raise ValidationError(f"chart {chart.name!r} is not well formed", violations)
    for node in chart.states():
        _check_id("state", node.id)
    for edge in chart.hyperedges:
        _check_id("hyperedge", edge.id)
    if format == "xml":
        return _chart_to_xml(chart)
    return _chart_to_json(chart)


def _chart_to_xml(chart: StateChart) -> bytes:
    lines = [f"<statechart name={quoteattr(chart.name)}>"]
    # explicit stack: containment can nest deeper than Python's recursion cap
    stack: list[tuple[Node, int, bool]] = [(chart.topstate, 1, False)]
    while stack:
        node, depth, closing = stack.pop()
        pad = "  " * depth
        if closing:
            lines.append(f"{pad}</{'and' if isinstance(node, AndState) else 'or'}>")
            continue
        if isinstance(node, Basic):
            lines.append(
                f"{pad}<basic id={quoteattr(node.id)}"
                f" place={quoteattr(node.origin_place)}/>"
            )
            continue
        tag = "and" if isinstance(node, AndState) else "or"
        lines.append(f"{pad}<{tag} id={quoteattr(node.id)}>")
        stack.append((node, depth, True))
        for child in reversed(node.children):
            stack.append((child, depth + 1, False))
    for edge in chart.hyperedges:
        src = " ".join(b.id for b in _by_creation(edge.sources))
        tgt = " ".join(b.id for b in _by_creation(edge.targets))
        lines.append(
            f"  <hyperedge id={quoteattr(edge.id)}"
            f" transition={quoteattr(edge.origin_transition)}"
            f" src={quoteattr(src)} tgt={quoteattr(tgt)}/>"
        )
    lines.append("</statechart>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _chart_to_json(chart: StateChart) -> bytes:
    def shell(node: Node) -> dict:
        if isinstance(node, Basic):
            return {"kind": "basic", "id": node.id, "place": node.origin_place}
        kind = "and" if isinstance(node, AndState) else "or"
        return {"kind": kind, "id": node.id, "children": []}

    top_obj = shell(chart.topstate)
    stack: list[tuple[Node, dict]] = [(chart.topstate, top_obj)]
    while stack:
        node, obj = stack.pop()
        if isinstance(node, Basic):
            continue
        for child in node.children:
            child_obj = shell(child)
            obj["children"].append(child_obj)
            stack.append((child, child_obj))
    return _dump_json(
        {
            "name": chart.name,
            "topstate": top_obj,
            "hyperedges": [
                {
                    "id": edge.id,
                    "transition": edge.origin_transition,
                    "src": [b.id for b in _by_creation(edge.sources)],
                    "tgt": [b.id for b in _by_creation(edge.targets)],
                }
                for edge in chart.hyperedges
            ],
        }
    )


# -- traces ----------------------------------------------------------------


def parse_trace(data: bytes | str) -> list[TraceEntry]:
    """Read a trace document (JSON array of rule/input/output records)."""
    obj = _json_document(data)
    if not isinstance(obj, list):
        raise ParseError("trace document must be a JSON array")
    entries = []
    for record in obj:
        rule, input_id, output_id = _json_object(
            record, "trace entry", ("rule", "input", "output")
        )
        entries.append(
            TraceEntry(
                rule=_string(rule, "'rule'"),
                input=_string(input_id, "'input'"),
                output=_string(output_id, "'output'"),
            )
        )
    return entries


def write_trace(entries: Iterable[TraceEntry]) -> bytes:
    """Serialize trace entries as a JSON array sorted by (rule, input)."""
    records = [
        {"rule": entry.rule, "input": entry.input, "output": entry.output}
        for entry in entries
    ]
    records.sort(key=lambda record: (record["rule"], record["input"]))
    return _dump_json(records)
