"""Echo the acceptance checklist after the run.

The acceptance tests each record one PASS/FAIL line; default output
capture would hide them, so this hook prints the collected lines in a
terminal section once the run finishes.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    for name in ("tests.test_acceptance", "test_acceptance"):
        mod = sys.modules.get(name)
        if mod is not None and getattr(mod, "VERDICT_LINES", None):
            terminalreporter.section("acceptance checklist")
            for line in mod.VERDICT_LINES:
                terminalreporter.write_line(line)
            break
