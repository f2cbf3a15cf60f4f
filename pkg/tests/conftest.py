import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    idx = int(m.group(1))
    name = m.group(2).replace("_", " ")
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _criteria.get(idx, (name, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _criteria[idx] = (name, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for idx in sorted(_criteria):
        name, status = _criteria[idx]
        terminalreporter.write_line(f"criterion {idx}: {status}  {name}")


@pytest.fixture
def tmp_trn(tmp_path):
    from invlab.formats import emit

    def write(d, name="d.trn"):
        path = tmp_path / name
        path.write_text(emit(d))
        return str(path)

    return write
