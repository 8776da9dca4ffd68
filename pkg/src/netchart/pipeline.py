"""Net-to-statechart transformation pipeline.

Wires the rule set that builds the initial flat chart, then collapses the
working net with the AND/OR reduction rules until nothing more applies.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

from .chart import AndState, OrState, StateChart, validate_chart
from .engine import Rule, TraceEntry, TransformationContext
from .errors import PreconditionError, TraceError, ValidationError
from .net import PetriNet, Place, Transition, check_net


class RuleSet:
    """The six transformation rules of one net-to-chart pass, pre-wired.

    A rule set carries per-pass state (the chart under construction and the
    fresh-id counter for merged places), so use one instance per pass and
    pair it with a fresh :class:`TransformationContext`.

    Attributes
    ----------
    chart : StateChart or None
        Set by the root rule once it has fired.
    net_to_chart, net_to_topstate, place_to_or, place_to_basic, \
    transition_to_edge, merged_place_to_or : Rule
        The individual rules, exposed for direct execution and for trace
        queries by name.
    """

    def __init__(self) -> None:
        self.chart: StateChart | None = None
        self._next_merge = 0

        self.net_to_chart = Rule("PetriNet2StateChart", create=self._make_chart)
        self.net_to_topstate = Rule("PetriNet2TopState", create=self._make_topstate)
        self.place_to_or = Rule("Place2Or", create=self._make_or)
        self.place_to_basic = Rule("Place2Basic", create=self._make_basic)
        self.transition_to_edge = Rule(
            "Transition2HyperEdge", create=self._make_edge
        )
        self.merged_place_to_or = Rule("AndRulePlace2Or", create=self._make_or)

        self.net_to_chart.require(
            self.net_to_topstate,
            selector=lambda net, chart: net,
            persistor=lambda chart, top: chart.set_topstate(top),
        )
        self.net_to_chart.require_many(
            self.transition_to_edge,
            selector=lambda net, chart: list(net.transitions.values()),
            persistor=lambda chart, edge: chart.add_hyperedge(edge),
        )
        self.net_to_topstate.require_many(
            self.place_to_or,
            selector=lambda net, top: list(net.places.values()),
            persistor=lambda top, or_state: top.attach(or_state),
        )
        self.place_to_or.require(
            self.place_to_basic,
            selector=lambda place, or_state: place,
            persistor=lambda or_state, basic: or_state.attach(basic),
        )
        self.transition_to_edge.require_many(
            self.place_to_basic,
            selector=lambda t, edge: list(t.preset),
            persistor=lambda edge, basic: edge.sources.append(basic),
        )
        self.transition_to_edge.require_many(
            self.place_to_basic,
            selector=lambda t, edge: list(t.postset),
            persistor=lambda edge, basic: edge.targets.append(basic),
        )

    def _make_chart(self, net: PetriNet) -> StateChart:
        chart = StateChart(net.name)
        self.chart = chart
        return chart

    def _require_chart(self) -> StateChart:
        if self.chart is None:
            raise PreconditionError(
                "no chart yet; PetriNet2StateChart must fire first"
            )
        return self.chart

    def _make_topstate(self, net: PetriNet) -> AndState:
        # born empty, filled by the Place2Or persistor
        return self._require_chart()._new_and_shell()

    def _make_or(self, place: Place) -> OrState:
        return self._require_chart()._new_or_shell()

    def _make_basic(self, place: Place):
        return self._require_chart().new_basic(place.id)

    def _make_edge(self, transition: Transition):
        return self._require_chart().new_hyperedge(transition.id)

    def fresh_place_id(self, net: PetriNet) -> str:
        """Pick a merged-place id never used by *net*, not even by removed
        elements, so trace inputs stay unambiguous."""
        while True:
            candidate = f"m{self._next_merge}"
            self._next_merge += 1
            if candidate not in net.used_ids:
                return candidate


@dataclass
class ReductionReport:
    """Counters describing one reduction run."""

    and_applications: int = 0
    or_applications: int = 0
    remaining_places: int = 0
    remaining_transitions: int = 0

    @property
    def fully_reduced(self) -> bool:
        return self.remaining_places == 1 and self.remaining_transitions == 0


class TransformResult(NamedTuple):
    """What `transform` returns; unpacks as (chart, report, trace)."""

    chart: StateChart
    report: ReductionReport
    trace: list[TraceEntry]


def initialize(
    net: PetriNet, rules: RuleSet, ctx: TransformationContext
) -> StateChart:
    """Build the flat chart for *net*: one OR-wrapped basic per place under a
    fresh AND topstate, one hyperedge per transition.

    Raises
    ------
    ValidationError
        If the net has structural violations.
    PreconditionError
        If *rules* already produced a chart; rule sets are single-use.
    """
    violations = check_net(net)
    if violations:
        raise ValidationError(f"net {net.name!r} is not well formed", violations)
    if rules.chart is not None:
        raise PreconditionError(
            "rule set already produced a chart; use a fresh RuleSet per pass"
        )
    return ctx.execute(rules.net_to_chart, net)


def _traced_or(ctx: TransformationContext, place: Place) -> OrState:
    ors = ctx.resolve_by_kind(place, OrState)
    if len(ors) != 1:
        raise TraceError(
            f"expected exactly one OR state traced to place {place.id!r}, "
            f"found {len(ors)}"
        )
    return ors[0]


def try_or_rule(
    net: PetriNet,
    chart: StateChart,
    rules: RuleSet,
    ctx: TransformationContext,
    transition: Transition,
) -> Place | None:
    """Collapse a sequential step q -> t -> p into q, absorbing or(p) into
    or(q). Returns the surviving place, or None when t does not qualify.
    """
    if net.transitions.get(transition.id) is not transition:
        return None
    if len(transition.preset) != 1 or len(transition.postset) != 1:
        return None
    q = next(iter(transition.preset))
    p = next(iter(transition.postset))
    if q is p:
        return None
    # a second q->p transition would become a self-loop on the fused place
    for other in q.post_transitions.intersection(p.pre_transitions):
        if other is not transition:
            return None
    if p.post_transitions.intersection(q.pre_transitions):
        return None

    or_q = _traced_or(ctx, q)
    or_p = _traced_or(ctx, p)
    net.remove_transition(transition)
    net.fuse_places(q, p)
    chart.detach(or_p)
    or_q.absorb(or_p)
    return q


def try_and_rule(
    net: PetriNet,
    chart: StateChart,
    rules: RuleSet,
    ctx: TransformationContext,
    transition: Transition,
) -> Place | None:
    """Collapse a group of interchangeable parallel places around
    *transition* into one fresh place, nesting their OR states under a new
    AND. Returns the fresh place, or None when no group qualifies.

    The group is the whole preset when it has two or more places, else the
    whole postset. Every member must share both adjacency sets exactly and
    stay off self-loops.
    """
    if net.transitions.get(transition.id) is not transition:
        return None
    if len(transition.preset) >= 2:
        group = list(transition.preset)
    elif len(transition.postset) >= 2:
        group = list(transition.postset)
    else:
        return None
    first = group[0]
    for place in group[1:]:
        if (
            place.pre_transitions != first.pre_transitions
            or place.post_transitions != first.post_transitions
        ):
            return None
    for place in group:
        if place.on_self_loop():
            return None

    group.sort(key=lambda place: place.serial)
    ors = [_traced_or(ctx, place) for place in group]
    fresh = net.replace_places(group, rules.fresh_place_id(net))
    for or_state in ors:
        chart.detach(or_state)
    and_state = chart.new_and(ors)
    wrapper = ctx.execute(rules.merged_place_to_or, fresh)
    wrapper.attach(and_state)
    chart.topstate.attach(wrapper)
    return fresh


def reduce(
    net: PetriNet,
    chart: StateChart,
    rules: RuleSet,
    ctx: TransformationContext,
    rng: random.Random | None = None,
) -> ReductionReport:
    """Apply the OR and AND rules from a transition worklist until it drains.

    The worklist starts with every transition in insertion order and is
    consumed first-in first-out; passing *rng* switches to random picks,
    which exercises confluence without changing the result's shape. After a
    successful application the transitions around the surviving place go
    back on the list.
    """
    queue: deque[Transition] = deque(net.transitions.values())
    queued = set(net.transitions)
    report = ReductionReport()
    while queue:
        if rng is None:
            transition = queue.popleft()
        else:
            index = rng.randrange(len(queue))
            transition = queue[index]
            del queue[index]
        queued.discard(transition.id)

        survivor = try_or_rule(net, chart, rules, ctx, transition)
        if survivor is not None:
            report.or_applications += 1
        else:
            survivor = try_and_rule(net, chart, rules, ctx, transition)
            if survivor is not None:
                report.and_applications += 1
        if survivor is None:
            continue
        for adjacent in list(survivor.pre_transitions) + list(
            survivor.post_transitions
        ):
            if adjacent.id not in queued:
                queue.append(adjacent)
                queued.add(adjacent.id)

    report.remaining_places = len(net.places)
    report.remaining_transitions = len(net.transitions)
    return report


def transform(
    input_net: PetriNet, rng: random.Random | None = None
) -> TransformResult:
    """Run the full pipeline on *input_net* without mutating it.

    The flat chart is built against the original net; reduction then runs on
    a deep copy, so trace queries keep answering for original element ids
    while the copy shrinks. Returns the chart, the reduction counters and
    the exported trace.
    """
    rules = RuleSet()
    ctx = TransformationContext()
    chart = initialize(input_net, rules, ctx)
    working = input_net.copy()
    report = reduce(working, chart, rules, ctx, rng=rng)
    trace = ctx.trace_export()
    return TransformResult(chart=chart, report=report, trace=trace)
