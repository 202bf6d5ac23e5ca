from pathlib import Path

import pytest

from almostsplit.quiver import Quiver

ARQ = Path(__file__).resolve().parent.parent / "examples_arq"
P = 32003


def a2() -> Quiver:
    return Quiver.build("A2", ["1", "2"], [("a", "1", "2")])


def a3() -> Quiver:
    return Quiver.build("A3", ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])


def d4() -> Quiver:
    return Quiver.build("D4", ["0", "1", "2", "3"], [("a", "1", "0"), ("b", "2", "0"), ("c", "3", "0")])


def kronecker() -> Quiver:
    return Quiver.build("K2", ["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


@pytest.fixture
def arq() -> Path:
    return ARQ


ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[ACCEPTANCE] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    results = item.config.stash[ACCEPTANCE]
    if rep.when == "call" or rep.failed:
        results[mark.args[0]] = (mark.args[1], rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash[ACCEPTANCE]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        title, ok, secs = results[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f} s)")
