import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_verdicts = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    detail = dict(item.user_properties).get("detail", "")
    if call.when == "setup" and call.excinfo is not None and call.excinfo.errisinstance(_skip_type()):
        _verdicts[n] = ("SKIPPED", str(call.excinfo.value))
    elif call.when == "call":
        if call.excinfo is None:
            _verdicts[n] = ("PASS", detail)
        elif call.excinfo.errisinstance(_skip_type()):
            _verdicts[n] = ("SKIPPED", str(call.excinfo.value))
        else:
            _verdicts[n] = ("FAIL", detail)


def _skip_type():
    import _pytest.outcomes

    return _pytest.outcomes.Skipped


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_verdicts):
        status, detail = _verdicts[n]
        terminalreporter.write_line(f"criterion {n}: {status}" + (f"  {detail}" if detail else ""))
