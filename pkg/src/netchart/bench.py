"""Per-phase timing harness over generated series-parallel nets.

Each case is generated once and written to a temp file; every
repetition then measures three disjoint intervals with a monotonic
clock: reading (load + parse), transformation (the full pipeline run)
and writing (serialize + store the chart).  A repetition builds its
rule set and context from scratch inside `transform`, so no state
carries over.  Automatic garbage collection is paused inside the timed
region, as `timeit` does, so collector scheduling does not leak into
the phase times.
"""

from __future__ import annotations

import gc
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .errors import NetchartError, PreconditionError
from .formats import parse_net, write_chart, write_net
from .generator import SpSpec, generate_sp
from .pipeline import transform


@dataclass
class PhaseSample:
    """Milliseconds spent in each phase of one repetition."""

    reading_ms: float
    transformation_ms: float
    writing_ms: float
    wall_ms: float


@dataclass
class BenchRow:
    """All measurements for one case; averages skip discarded warmups."""

    case: str
    samples: list[PhaseSample] = field(default_factory=list)
    discarded: int = 0
    error: str | None = None

    def measured(self) -> list[PhaseSample]:
        return self.samples[self.discarded :]

    @property
    def reading_ms(self) -> float:
        return _mean([s.reading_ms for s in self.measured()])

    @property
    def transformation_ms(self) -> float:
        return _mean([s.transformation_ms for s in self.measured()])

    @property
    def writing_ms(self) -> float:
        return _mean([s.writing_ms for s in self.measured()])


def _mean(values: list[float]) -> float:
    return sum(values) / len(values) if values else 0.0


_COLUMNS = ("Reading input", "Transformation", "Writing output")


@dataclass
class BenchReport:
    rows: list[BenchRow]

    def render_table(self) -> str:
        case_width = max([4] + [len(row.case) for row in self.rows])
        cells = []
        for row in self.rows:
            if row.error is not None:
                cells.append(None)
            else:
                cells.append(
                    [
                        f"{row.reading_ms:.2f} ms",
                        f"{row.transformation_ms:.2f} ms",
                        f"{row.writing_ms:.2f} ms",
                    ]
                )
        widths = [
            max([len(title)] + [len(c[i]) for c in cells if c is not None])
            for i, title in enumerate(_COLUMNS)
        ]
        lines = [
            "case".ljust(case_width)
            + "".join("  " + title.rjust(widths[i]) for i, title in enumerate(_COLUMNS))
        ]
        for row, values in zip(self.rows, cells):
            if values is None:
                lines.append(f"{row.case.ljust(case_width)}  ERROR: {row.error}")
            else:
                lines.append(
                    row.case.ljust(case_width)
                    + "".join("  " + values[i].rjust(widths[i]) for i in range(3))
                )
        return "\n".join(lines)

    def render_csv(self) -> str:
        lines = ["case,reading_ms,transformation_ms,writing_ms"]
        for row in self.rows:
            if row.error is not None:
                continue
            lines.append(
                f"{row.case},{row.reading_ms:.2f}"
                f",{row.transformation_ms:.2f},{row.writing_ms:.2f}"
            )
        return "\n".join(lines)


def _run_case(
    size: int, reps: int, seed: int, max_branch: int, discard_first: bool
) -> BenchRow:
    row = BenchRow(case=f"sp{size}")
    try:
        net = generate_sp(SpSpec(places=size, seed=seed, max_branch=max_branch))
        document = write_net(net, "xml")
        with tempfile.TemporaryDirectory(prefix="netchart-bench-") as tmp:
            in_path = Path(tmp) / "net.xml"
            out_path = Path(tmp) / "chart.xml"
            in_path.write_bytes(document)
            for _ in range(reps):
                # collector sweeps are runtime noise, not phase cost: start
                # each repetition clean, then keep automatic collection out
                # of the timed region the way timeit does
                gc.collect()
                was_enabled = gc.isenabled()
                gc.disable()
                try:
                    t0 = time.perf_counter()
                    parsed = parse_net(in_path.read_bytes(), "xml")
                    t1 = time.perf_counter()
                    result = transform(parsed)
                    t2 = time.perf_counter()
                    out_path.write_bytes(write_chart(result.chart, "xml"))
                    t3 = time.perf_counter()
                finally:
                    if was_enabled:
                        gc.enable()
                row.samples.append(
                    PhaseSample(
                        reading_ms=(t1 - t0) * 1e3,
                        transformation_ms=(t2 - t1) * 1e3,
                        writing_ms=(t3 - t2) * 1e3,
                        wall_ms=(t3 - t0) * 1e3,
                    )
                )
        if discard_first and len(row.samples) > 1:
            row.discarded = 1
    except (NetchartError, OSError) as exc:
        row.error = str(exc)
    return row


def bench(
    sizes: list[int],
    reps: int,
    seed: int,
    max_branch: int = 4,
    discard_first: bool = False,
    parallel_cases: bool = False,
) -> BenchReport:
    """Measure every size in `sizes`; per-case failures land in the row.

    With `parallel_cases` the cases run on a thread pool; repetitions
    within a case always run sequentially for timing fidelity.
    """
    if not sizes:
        raise PreconditionError("sizes must be nonempty")
    if reps < 1:
        raise PreconditionError(f"reps must be >= 1, got {reps}")
    if parallel_cases and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=len(sizes)) as pool:
            rows = list(
                pool.map(
                    lambda size: _run_case(size, reps, seed, max_branch, discard_first),
                    sizes,
                )
            )
    else:
        rows = [
            _run_case(size, reps, seed, max_branch, discard_first) for size in sizes
        ]
    return BenchReport(rows=rows)
