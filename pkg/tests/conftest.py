"""Prints a one-line verdict per acceptance criterion at the end of the run."""

import re

_ACCEPTANCE = "test_acceptance.py::"
_verdicts: dict[str, tuple[bool, str]] = {}


def pytest_runtest_logreport(report):
    if _ACCEPTANCE not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::", 1)[1]
        detail = "; ".join(v for k, v in report.user_properties if k == "measured")
        _verdicts[name] = (report.outcome == "passed", detail)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for name, (ok, detail) in sorted(_verdicts.items()):
        m = re.match(r"test_criterion_(\d+)_(\w+)", name)
        label = f"criterion {int(m.group(1)):2d} {m.group(2)}" if m else name
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
