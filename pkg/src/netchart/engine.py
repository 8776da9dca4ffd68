"""Rule-based transformation engine with a queryable trace.

A `Rule` has two phases: `create` allocates the output object for an
input, `transform` fills it in.  Rules declare dependencies on other
rules; a dependency's selector picks the dependent inputs and its
persistor writes each dependent output back into the own output.

Within one `TransformationContext` a rule fires at most once per input:
the (rule, input, output) triple is recorded in the trace immediately
after `create`, before dependencies and `transform` run, so mutually
dependent rules can resolve each other's half-built outputs.  Inputs are
identified by their id (model elements) or name (whole models), never by
object identity, so elements of a copied model resolve to the entries
recorded for the original.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any, Callable, Iterable

from .errors import TraceError, TransformationError


def input_key(item) -> tuple:
    """Stable identity of a rule input: (type name, id), tuples componentwise."""
    if isinstance(item, tuple):
        return tuple(input_key(part) for part in item)
    ident = getattr(item, "id", None)
    if ident is None:
        ident = getattr(item, "name", None)
    if ident is None:
        raise TypeError(f"rule input {item!r} has neither id nor name")
    return (type(item).__name__, ident)


def input_id(item) -> str:
    """The id half of `input_key`, as printed in trace documents."""
    if isinstance(item, tuple):
        return "(" + ", ".join(input_id(part) for part in item) + ")"
    return input_key(item)[1]


@dataclass
class Dependency:
    """Link from a rule to a rule it needs, with selector and persistor."""

    kind: str  # "single" | "many"
    target: "Rule"
    selector: Callable[[Any, Any], Any]
    persistor: Callable[[Any, Any], None] | None = None


class Rule:
    """A named transformation rule with create/transform phases.

    `create` and `transform` can be passed as callables or overridden in a
    subclass.  `create(input)` must return the (non-None) output object;
    `transform(input, output, ctx)` may run arbitrary logic and defaults
    to doing nothing.
    """

    def __init__(
        self,
        name: str | None = None,
        create: Callable[[Any], Any] | None = None,
        transform: Callable[[Any, Any, "TransformationContext"], None] | None = None,
    ):
        self.name = name or type(self).__name__
        self.dependencies: list[Dependency] = []
        if create is not None:
            self.create = create  # type: ignore[assignment]
        if transform is not None:
            self.transform = transform  # type: ignore[assignment]

    def create(self, item):
        raise NotImplementedError(f"rule {self.name!r} has no create function")

    def transform(self, item, output, ctx: "TransformationContext") -> None:
        pass

    def require(self, target: "Rule", selector, persistor=None) -> "Rule":
        """Declare a single-input dependency; returns self for chaining."""
        self.dependencies.append(Dependency("single", target, selector, persistor))
        return self

    def require_many(self, target: "Rule", selector, persistor=None) -> "Rule":
        """Declare a dependency whose selector yields a collection of inputs."""
        self.dependencies.append(Dependency("many", target, selector, persistor))
        return self

    def __repr__(self) -> str:
        return f"Rule({self.name!r})"


@dataclass
class TraceEntry:
    """One recorded correspondence: rule name, input id, output id."""

    rule: str
    input: str
    output: str


class TransformationContext:
    """Memoization table and trace for one transformation pass.

    `create_runs` / `transform_runs` count phase invocations per
    (rule name, input key); both stay at 1 for every pair ever executed.
    """

    def __init__(self):
        self._memo: dict[tuple, Any] = {}
        self._by_input: dict[tuple, list] = {}
        self._entries: list[tuple[str, str, Any]] = []
        self.create_runs: Counter = Counter()
        self.transform_runs: Counter = Counter()

    # -- execution ---------------------------------------------------------

    def execute(self, rule: Rule, item):
        """Run `rule` on `item`, or return the recorded output if it already ran.

        Order on a fresh input: create, record trace entry, dependencies in
        declaration order (selector, recursive execute, persistor per
        dependent output), then transform.
        """
        memo_key = (rule.name, input_key(item))
        if memo_key in self._memo:
            return self._memo[memo_key]

        output = rule.create(item)
        self.create_runs[memo_key] += 1
        if output is None:
            raise TransformationError(f"rule {rule.name!r} created no output for {item!r}")
        self._memo[memo_key] = output
        self._by_input.setdefault(memo_key[1], []).append(output)
        self._entries.append((rule.name, input_id(item), output))

        for dep in rule.dependencies:
            selected = dep.selector(item, output)
            if dep.kind == "single":
                selected = (selected,)
            for dep_item in selected:
                try:
                    dep_output = self.execute(dep.target, dep_item)
                except TransformationError:
                    raise
                except Exception as exc:
                    raise TransformationError(
                        f"rule {dep.target.name!r} rejected input {dep_item!r}"
                        f" selected by rule {rule.name!r}: {exc}"
                    ) from exc
                if dep.persistor is not None:
                    dep.persistor(output, dep_output)

        rule.transform(item, output, self)
        self.transform_runs[memo_key] += 1
        return output

    # -- trace queries -----------------------------------------------------

    def resolve(self, rule: Rule, item):
        """The recorded output for (rule, item), or None if the pair never fired.

        Never triggers execution.  `create` may not return None, so None is
        unambiguous here.
        """
        return self._memo.get((rule.name, input_key(item)))

    def resolve_many(self, rule: Rule, items: Iterable) -> list:
        """Recorded outputs for several inputs, in input order; all must exist."""
        outputs = []
        for item in items:
            output = self.resolve(rule, item)
            if output is None:
                raise TraceError(f"rule {rule.name!r} never fired on {input_id(item)!r}")
            outputs.append(output)
        return outputs

    def resolve_by_kind(self, item, kind: type) -> list:
        """All traced outputs of the given kind recorded for `item`, across rules."""
        return [out for out in self._by_input.get(input_key(item), []) if isinstance(out, kind)]

    # -- export ------------------------------------------------------------

    def trace_export(self) -> list[TraceEntry]:
        """The whole trace as entries sorted by (rule name, input id)."""
        entries = [
            TraceEntry(rule=rule_name, input=ident, output=_output_id(output))
            for rule_name, ident, output in self._entries
        ]
        entries.sort(key=lambda e: (e.rule, e.input))
        return entries


def _output_id(output) -> str:
    ident = getattr(output, "id", None)
    if ident is None:
        ident = getattr(output, "name", None)
    return str(ident) if ident is not None else repr(output)
