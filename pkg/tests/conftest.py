import pytest

_OUTCOMES = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    prev = _OUTCOMES.get(n, (title, True))
    if rep.when == "call" or rep.failed:
        _OUTCOMES[n] = (title, prev[1] and rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_OUTCOMES):
        title, ok = _OUTCOMES[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {title}")
