import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion, after the test run."""
    rows = {}
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if match:
                rows[int(match.group(1))] = (match.group(2), label)
    if rows:
        terminalreporter.section("acceptance criteria")
        for number in sorted(rows):
            slug, label = rows[number]
            terminalreporter.write_line(
                f"criterion {number} ({slug.replace('_', ' ')}): {label}"
            )
