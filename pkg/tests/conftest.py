import pytest

_RESULTS = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of an acceptance criterion under its label."""
    label = request.node.get_closest_marker("criterion").args[0]
    _RESULTS[label] = ("FAIL", "")

    def done(detail=""):
        _RESULTS[label] = ("PASS", detail)
    return done


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_RESULTS, key=lambda s: int(s.split()[0])):
        status, detail = _RESULTS[label]
        line = f"criterion {label}: {status}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
