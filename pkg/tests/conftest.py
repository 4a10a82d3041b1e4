import pytest

_RESULTS: list = []


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(label): include this test in the acceptance summary"
    )


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    rep = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        # setup-phase skips and errors still get a summary line
        if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
            _RESULTS.append((mark.args[0], rep.outcome))
    return rep


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for label, outcome in _RESULTS:
        word = {"passed": "PASS", "failed": "FAIL"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"{word}  {label}")
