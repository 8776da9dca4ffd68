"""Shared builders and comparison helpers for the test suite."""

from __future__ import annotations

from netchart import AndState, Basic, Node, PetriNet, StateChart


def diamond() -> PetriNet:
    """Fork/join over two parallel places: q -> t1 -> {a, b} -> t2 -> r."""
    net = PetriNet("D1")
    for pid in ("q", "a", "b", "r"):
        net.add_place(pid)
    net.add_transition("t1", ["q"], ["a", "b"])
    net.add_transition("t2", ["a", "b"], ["r"])
    return net


def three_cycle() -> PetriNet:
    """Directed cycle q -> p -> s -> q; cannot collapse to one place."""
    net = PetriNet("cycle3")
    for pid in ("q", "p", "s"):
        net.add_place(pid)
    net.add_transition("t1", ["q"], ["p"])
    net.add_transition("t2", ["p"], ["s"])
    net.add_transition("t3", ["s"], ["q"])
    return net


def two_chain() -> PetriNet:
    net = PetriNet("chain2")
    net.add_place("p")
    net.add_place("p2")
    net.add_transition("t", ["p"], ["p2"])
    return net


def single_place() -> PetriNet:
    net = PetriNet("solo")
    net.add_place("p0")
    return net


def node_signature(node: Node) -> str:
    """Canonical description of a subtree: ids dropped, child order ignored.

    Basics keep their origin place, so two charts compare equal exactly
    when they group the same original places the same way.
    """
    if isinstance(node, Basic):
        return f"b[{node.origin_place}]"
    tag = "and" if isinstance(node, AndState) else "or"
    return f"{tag}(" + ",".join(sorted(node_signature(c) for c in node.children)) + ")"


def chart_signature(chart: StateChart) -> str:
    return node_signature(chart.topstate)


def edges_signature(chart: StateChart) -> frozenset:
    """Hyperedges as (origin transition, source places, target places)."""
    return frozenset(
        (
            edge.origin_transition,
            frozenset(b.origin_place for b in edge.sources),
            frozenset(b.origin_place for b in edge.targets),
        )
        for edge in chart.hyperedges
    )


def net_edges_signature(net: PetriNet) -> frozenset:
    """The edge signature a chart over `net` must carry (conservation)."""
    return frozenset(
        (
            t.id,
            frozenset(p.id for p in t.preset),
            frozenset(p.id for p in t.postset),
        )
        for t in net.transitions.values()
    )


def and_arities(chart: StateChart) -> list[int]:
    """Child counts of every AND state below the topstate, sorted."""
    return sorted(
        len(node.children)
        for node in chart.states()
        if isinstance(node, AndState) and node is not chart.topstate
    )


def net_to_plain(net: PetriNet) -> tuple[set[str], dict[str, tuple[frozenset, frozenset]]]:
    """Strip a net down to the id-level structure the oracle consumes."""
    places = set(net.places)
    transitions = {
        t.id: (
            frozenset(p.id for p in t.preset),
            frozenset(p.id for p in t.postset),
        )
        for t in net.transitions.values()
    }
    return places, transitions


def chart_identical(a: StateChart, b: StateChart) -> bool:
    """Structural equality: trees match with ids and child order; hyperedge
    endpoints compare as id sets because serialization may reorder them."""
    if a.name != b.name or len(a.hyperedges) != len(b.hyperedges):
        return False
    if (a.topstate is None) != (b.topstate is None):
        return False
    if a.topstate is not None:
        pairs = [(a.topstate, b.topstate)]
        while pairs:
            x, y = pairs.pop()
            if type(x) is not type(y) or x.id != y.id:
                return False
            if isinstance(x, Basic):
                if x.origin_place != y.origin_place:
                    return False
                continue
            if len(x.children) != len(y.children):
                return False
            pairs.extend(zip(x.children, y.children))
    for ex, ey in zip(a.hyperedges, b.hyperedges):
        if ex.id != ey.id or ex.origin_transition != ey.origin_transition:
            return False
        if {s.id for s in ex.sources} != {s.id for s in ey.sources}:
            return False
        if {t.id for t in ex.targets} != {t.id for t in ey.targets}:
            return False
    return True
