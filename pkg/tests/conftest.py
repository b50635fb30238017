"""Shared pytest plumbing.

The acceptance suite records one verdict line per criterion here; the
terminal-summary hook prints them after the run, outside output capture.
"""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
