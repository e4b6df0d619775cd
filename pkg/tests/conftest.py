import time
from contextlib import contextmanager

REPORT: list[str] = []


@contextmanager
def criterion(name, budget_s):
    """Record one PASS/FAIL line; a criterion also fails when it overruns its time budget."""
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        took = time.perf_counter() - start
        within = took < budget_s
        status = "PASS" if ok and within else "FAIL"
        note = "" if within else f" (over {budget_s:g}s budget)"
        line = f"{status}  {name}  [{took:.2f}s]{note}"
        REPORT.append(line)
        print(line)
    assert within, f"{name} took {took:.2f}s, budget {budget_s:g}s"


def pytest_terminal_summary(terminalreporter):
    if REPORT:
        terminalreporter.section("acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
