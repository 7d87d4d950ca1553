import pytest

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    marker = _criteria.get(report.nodeid)
    if marker is not None:
        _criteria[report.nodeid] = (*marker[:2], report.passed)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            _criteria[item.nodeid] = (m.args[0], m.args[1], None)


def pytest_terminal_summary(terminalreporter):
    ran = [v for v in _criteria.values() if v[2] is not None]
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, passed in sorted(ran):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {title}")
