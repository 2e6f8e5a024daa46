import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# (criterion, part, passed, detail) appended by test_acceptance.py
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    by_crit = {}
    for crit, part, ok, detail in ACCEPTANCE:
        by_crit.setdefault(crit, []).append((part, ok, detail))
    for crit in sorted(by_crit):
        parts = by_crit[crit]
        ok = all(p[1] for p in parts)
        shown = parts if ok else [p for p in parts if not p[1]]
        text = "; ".join(f"{part}: {detail}" for part, _, detail in shown)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {crit}: {text}")
