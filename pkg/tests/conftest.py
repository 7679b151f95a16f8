import hypothesis
import numpy as np
import pytest

np.seterr(all="warn", under="ignore")

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile("default")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    entry = _criteria.setdefault(name, {"passed": 0, "failed": []})
    if rep.when == "call" and rep.passed:
        entry["passed"] += 1
    elif rep.failed:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, entry in _criteria.items():
        status = "FAIL" if entry["failed"] else "PASS"
        detail = f"{entry['passed']} checks passed"
        if entry["failed"]:
            detail += f", failed: {', '.join(entry['failed'])}"
        terminalreporter.write_line(f"{status}  {name}  ({detail})")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
