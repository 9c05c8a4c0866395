import time

import pytest

from lightsout_grover.synthesis import (
    GRID_INITIAL,
    MOBIUS_INITIAL,
    grover_circuit,
    oracle_grid2x2,
    oracle_mobius6,
    sanity_oracle,
    sat_oracle,
)

_CRITERIA: dict[int, tuple[str, str, float]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


def pytest_runtest_logreport(report):
    marker = dict(report.user_properties).get("criterion")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, title = marker
    elapsed = dict(report.user_properties).get("elapsed", 0.0)
    _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL", elapsed)


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.user_properties.append(("criterion", tuple(mark.args)))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict, elapsed = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {title}  ({elapsed:.1f} s)")


@pytest.fixture(scope="session")
def grid_spec():
    return oracle_grid2x2(GRID_INITIAL)


@pytest.fixture(scope="session")
def mobius_spec():
    return oracle_mobius6(MOBIUS_INITIAL)


@pytest.fixture(scope="session")
def grid_circuit(grid_spec):
    return grover_circuit(grid_spec)


@pytest.fixture(scope="session")
def mobius_circuit(mobius_spec):
    return grover_circuit(mobius_spec)


@pytest.fixture(scope="session")
def sat_circuit():
    return grover_circuit(sat_oracle(), 1)


@pytest.fixture(scope="session")
def sanity_circuit():
    return grover_circuit(sanity_oracle(), 1)
