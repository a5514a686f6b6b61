import pytest

_ACCEPTANCE: dict[str, tuple[str, bool]] = {}


@pytest.fixture
def criterion(request):
    """Record a numbered acceptance criterion's outcome for the summary."""

    def record(label: str, ok: bool):
        _ACCEPTANCE[request.node.nodeid] = (label, ok)
        return ok

    return record


def pytest_runtest_logreport(report):
    # a criterion whose test errored before recording still shows up as FAIL
    if report.when == "call" and report.failed and report.nodeid in _ACCEPTANCE:
        label, _ = _ACCEPTANCE[report.nodeid]
        _ACCEPTANCE[report.nodeid] = (label, False)


def _order(label: str):
    head = label.split(".")[0]
    digits = "".join(ch for ch in head if ch.isdigit())
    return int(digits), head


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in sorted(_ACCEPTANCE.values(), key=lambda item: _order(item[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}")
