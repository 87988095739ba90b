import os
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    summary = getattr(mod, "SUMMARY", None)
    if not summary:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(summary):
        ok, detail = summary[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
