"""Shared pytest plumbing.

The acceptance module records one PASS/FAIL line per criterion; the
terminal-summary hook prints them after the run, outside capture, so
they show in any pytest invocation.
"""

acceptance_lines: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_lines:
            terminalreporter.write_line(line)
