import pytest

from hdresist.graph import complete_graph

K3_PAPER_ORDER = [(1, 2), (2, 3), (1, 3)]


@pytest.fixture
def k3():
    return complete_graph(3, order=K3_PAPER_ORDER)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def single_edge():
    return complete_graph(2)


_acceptance = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        reason = ""
        if report.failed and call.excinfo is not None:
            reason = str(call.excinfo.value).strip().splitlines()[0] if str(call.excinfo.value).strip() else ""
        _acceptance.append((report.outcome.upper(), doc, reason))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, doc, reason in _acceptance:
        line = f"[{'PASS' if outcome == 'PASSED' else 'FAIL'}] {doc}"
        terminalreporter.write_line(line + (f" -- {reason}" if reason else ""))
