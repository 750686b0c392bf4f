"""Per-criterion pass/fail summary for the acceptance suite.

Tests carry ``@pytest.mark.criterion(n, "title")``; after the run one line
per criterion is printed (and written to acceptance_summary.txt at the
repository root). A criterion passes when all of its tests pass; an
expected failure (xfail) is reported as FAIL with its reason.
"""
from pathlib import Path

import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


def _entry(item):
    m = item.get_closest_marker("criterion")
    if m is None:
        return None
    n, title = m.args[0], m.args[1] if len(m.args) > 1 else ""
    return _RESULTS.setdefault(n, {"title": title, "outcomes": [], "notes": [], "time": 0.0})


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    entry = _entry(item)
    if entry is None:
        return
    entry["time"] += rep.duration
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            status = "xpass" if rep.passed else "xfail"
            entry["notes"].append(f"{item.name}: expected failure ({rep.wasxfail})")
        else:
            status = rep.outcome
        entry["outcomes"].append((item.name, status, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    lines = []
    for n in sorted(_RESULTS):
        e = _RESULTS[n]
        statuses = [s for _, s, _ in e["outcomes"]]
        ok = bool(statuses) and all(s == "passed" for s in statuses)
        secs = e["time"]
        passed = sum(s == "passed" for s in statuses)
        lines.append(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {e['title']}  "
                     f"[{passed}/{len(statuses)} tests, {secs:.1f}s]")
        lines += [f"               {note}" for note in e["notes"]]
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
    root = Path(__file__).resolve().parent.parent
    (root / "acceptance_summary.txt").write_text("\n".join(lines) + "\n")
