import pytest

_criteria = {}


def pytest_runtest_logreport(report):
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    n = props["criterion"]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _criteria[n] = (status, props.get("summary", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, summary = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {summary}")


@pytest.fixture
def criterion(record_property):
    """Tag a test with its criterion number; the summary line is printed at the end of the run."""

    def tag(n, summary):
        record_property("criterion", n)
        record_property("summary", summary)

    return tag
