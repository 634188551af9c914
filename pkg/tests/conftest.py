import re

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(n, ("PASS", ""))
        if report.failed:
            crash = getattr(report.longrepr, "reprcrash", None)
            msg = crash.message.splitlines()[0] if crash else str(report.longrepr).strip().splitlines()[-1]
            _CRITERIA[n] = ("FAIL", msg)
        elif prev[0] != "FAIL":
            _CRITERIA[n] = ("PASS", "")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, msg = _CRITERIA[n]
        line = f"criterion {n}: {status}"
        if msg:
            line += f"  ({msg[:160]})"
        terminalreporter.write_line(line)
