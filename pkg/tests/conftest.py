import sys


def pytest_terminal_summary(terminalreporter):
    # one PASS/FAIL line per acceptance criterion, shown even when output is captured
    for name in ("test_acceptance", "tests.test_acceptance"):
        results = getattr(sys.modules.get(name), "RESULTS", None)
        if results:
            terminalreporter.section("acceptance criteria")
            for n in sorted(results):
                terminalreporter.write_line(results[n])
            return
