import pytest

_results = {}


@pytest.fixture
def record(request):
    """Store a one-line measurement summary for the acceptance report."""
    def _record(text):
        _results.setdefault(request.node.nodeid, {})["detail"] = text
    return _record


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    entry = _results.setdefault(report.nodeid, {})
    if report.when == "call" or (report.when == "setup" and report.failed):
        entry["passed"] = report.passed


def pytest_terminal_summary(terminalreporter):
    rows = [(k, v) for k, v in _results.items() if "passed" in v]
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, v in rows:
        name = nodeid.split("::")[-1]
        status = "PASS" if v["passed"] else "FAIL"
        detail = v.get("detail", "")
        terminalreporter.write_line(f"{status}  {name}  {detail}".rstrip())
