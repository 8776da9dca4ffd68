"""Rule engine: memoization, dependency order, trace queries."""

from __future__ import annotations

import pytest

from netchart import (
    Rule,
    TraceEntry,
    TraceError,
    TransformationContext,
    TransformationError,
    input_id,
    input_key,
)


class Item:
    def __init__(self, id: str):
        self.id = id

    def __repr__(self) -> str:
        return f"Item({self.id!r})"


class Model:
    def __init__(self, name: str, items: list[Item]):
        self.name = name
        self.items = items


class Box:
    def __init__(self, id: str):
        self.id = id
        self.content: list = []


def test_input_key_uses_id_or_name():
    assert input_key(Item("x")) == ("Item", "x")
    assert input_key(Model("m", [])) == ("Model", "m")
    pair = (Item("a"), Item("b"))
    assert input_key(pair) == (("Item", "a"), ("Item", "b"))
    assert input_id(pair) == "(a, b)"
    with pytest.raises(TypeError):
        input_key(object())


def test_execute_memoizes_per_input_id():
    calls = []
    rule = Rule("Wrap", create=lambda item: calls.append(item.id) or Box(item.id))
    ctx = TransformationContext()
    first = ctx.execute(rule, Item("x"))
    # a structurally equal but distinct object resolves to the same output
    second = ctx.execute(rule, Item("x"))
    assert first is second
    assert calls == ["x"]
    assert ctx.create_runs[("Wrap", ("Item", "x"))] == 1
    assert ctx.transform_runs[("Wrap", ("Item", "x"))] == 1
    ctx.execute(rule, Item("y"))
    assert set(ctx.create_runs.values()) == {1}


def test_create_must_return_an_output():
    rule = Rule("Broken", create=lambda item: None)
    with pytest.raises(TransformationError, match="Broken"):
        TransformationContext().execute(rule, Item("x"))


def test_dependencies_run_in_declaration_order():
    order = []

    def tracking(name):
        return Rule(name, create=lambda item: order.append(name) or Box(f"{name}:{item.id}"))

    first, second = tracking("First"), tracking("Second")
    parent = Rule(
        "Parent",
        create=lambda m: Box(m.name),
        transform=lambda m, out, ctx: order.append("transform"),
    )
    parent.require(second, selector=lambda m, out: m.items[0],
                   persistor=lambda out, dep: out.content.append(dep))
    parent.require_many(first, selector=lambda m, out: m.items,
                        persistor=lambda out, dep: out.content.append(dep))

    ctx = TransformationContext()
    model = Model("m", [Item("a"), Item("b")])
    box = ctx.execute(parent, model)
    assert order == ["Second", "First", "First", "transform"]
    assert [b.id for b in box.content] == ["Second:a", "First:a", "First:b"]


def test_trace_entry_is_recorded_before_dependencies_run():
    seen = []
    holder: list[TransformationContext] = []
    parent = Rule("Parent", create=lambda m: Box(m.name))

    def probing_create(item):
        # the parent fired first, so its half-built output must be resolvable
        seen.append(holder[0].resolve(parent, Model("m", [])))
        return Box(item.id)

    child = Rule("Child", create=probing_create)
    parent.require(child, selector=lambda m, out: m.items[0])

    ctx = TransformationContext()
    holder.append(ctx)
    box = ctx.execute(parent, Model("m", [Item("a")]))
    assert seen == [box]


def test_shared_dependency_fires_once():
    creates = []
    shared = Rule("Shared", create=lambda item: creates.append(item.id) or Box(item.id))
    left = Rule("Left", create=lambda m: Box("left"))
    right = Rule("Right", create=lambda m: Box("right"))
    left.require_many(shared, selector=lambda m, out: m.items,
                      persistor=lambda out, dep: out.content.append(dep))
    right.require_many(shared, selector=lambda m, out: m.items,
                       persistor=lambda out, dep: out.content.append(dep))
    top = Rule("Top", create=lambda m: Box("top"))
    top.require(left, selector=lambda m, out: m)
    top.require(right, selector=lambda m, out: m)

    ctx = TransformationContext()
    ctx.execute(top, Model("m", [Item("a"), Item("b")]))
    assert creates == ["a", "b"]
    # both persistors still ran, against the memoized outputs
    assert [b.id for b in ctx.resolve(left, Model("m", [])).content] == ["a", "b"]
    assert [b.id for b in ctx.resolve(right, Model("m", [])).content] == ["a", "b"]


def test_dependency_failures_are_wrapped():
    def failing(item):
        raise ValueError("no output for this one")

    child = Rule("Child", create=failing)
    parent = Rule("Parent", create=lambda m: Box(m.name))
    parent.require(child, selector=lambda m, out: m.items[0])
    with pytest.raises(TransformationError) as info:
        TransformationContext().execute(parent, Model("m", [Item("a")]))
    assert "'Child'" in str(info.value) and "'Parent'" in str(info.value)
    assert isinstance(info.value.__cause__, ValueError)


def test_transformation_errors_pass_through_unwrapped():
    def failing(item):
        raise TransformationError("already diagnosed")

    child = Rule("Child", create=failing)
    parent = Rule("Parent", create=lambda m: Box(m.name))
    parent.require(child, selector=lambda m, out: m.items[0])
    with pytest.raises(TransformationError, match="^already diagnosed$"):
        TransformationContext().execute(parent, Model("m", [Item("a")]))


def test_resolve_never_executes():
    rule = Rule("Wrap", create=lambda item: Box(item.id))
    ctx = TransformationContext()
    assert ctx.resolve(rule, Item("x")) is None
    assert ctx.create_runs == {}


def test_resolve_many_requires_every_entry():
    rule = Rule("Wrap", create=lambda item: Box(item.id))
    ctx = TransformationContext()
    ctx.execute(rule, Item("a"))
    ctx.execute(rule, Item("b"))
    outputs = ctx.resolve_many(rule, [Item("b"), Item("a")])
    assert [b.id for b in outputs] == ["b", "a"]
    with pytest.raises(TraceError, match="'c'"):
        ctx.resolve_many(rule, [Item("a"), Item("c")])


def test_resolve_by_kind_filters_outputs_across_rules():
    class Tag:
        def __init__(self, id):
            self.id = id

    boxer = Rule("Boxer", create=lambda item: Box(item.id))
    tagger = Rule("Tagger", create=lambda item: Tag(item.id))
    ctx = TransformationContext()
    box = ctx.execute(boxer, Item("x"))
    tag = ctx.execute(tagger, Item("x"))
    assert ctx.resolve_by_kind(Item("x"), Box) == [box]
    assert ctx.resolve_by_kind(Item("x"), Tag) == [tag]
    assert ctx.resolve_by_kind(Item("y"), Box) == []


def test_rule_subclassing():
    class Double(Rule):
        def create(self, item):
            return Box(item.id)

        def transform(self, item, output, ctx):
            output.content.append(item.id * 2)

    rule = Double()
    assert rule.name == "Double"
    ctx = TransformationContext()
    box = ctx.execute(rule, Item("ab"))
    assert box.content == ["abab"]


def test_trace_export_is_sorted_and_stringly_typed():
    wrap = Rule("Wrap", create=lambda item: Box(f"out-{item.id}"))
    name_only = Rule("AdoptModel", create=lambda m: Model(f"copy-{m.name}", []))
    ctx = TransformationContext()
    ctx.execute(wrap, Item("b"))
    ctx.execute(wrap, Item("a"))
    ctx.execute(name_only, Model("m", []))
    entries = ctx.trace_export()
    assert entries == [
        TraceEntry(rule="AdoptModel", input="m", output="copy-m"),
        TraceEntry(rule="Wrap", input="a", output="out-a"),
        TraceEntry(rule="Wrap", input="b", output="out-b"),
    ]
