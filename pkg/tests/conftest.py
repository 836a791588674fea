import pytest

from invsemi import corpus
from invsemi.groups import build_abelian
from invsemi.inverse import try_inverse
from invsemi.semilattice import chain, diamond_semilattice

ACCEPTANCE_LINES = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            number, title = mark.args
            item.user_properties.extend([("criterion", number), ("title", title)])


def pytest_runtest_logreport(report):
    """Turn the ``criterion`` property of an acceptance test into a pass/fail line."""
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    if report.when == "call" or report.failed:
        verdict = "PASS" if report.passed else "FAIL"
        detail = props.get("detail", "")
        line = f"criterion {props['criterion']:>2}: {verdict}  {props['title']}"
        if detail:
            line += f" [{detail}]"
        ACCEPTANCE_LINES[props["criterion"]] = line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture(scope="session")
def named():
    return corpus.named_tables()


@pytest.fixture(scope="session")
def fixtures():
    return corpus.clifford_fixtures()


@pytest.fixture(scope="session")
def b2():
    return try_inverse(corpus.brandt_b2())


@pytest.fixture(scope="session")
def k4():
    return build_abelian([2, 2])


@pytest.fixture(scope="session")
def chain2():
    return chain(2)


@pytest.fixture(scope="session")
def diamond():
    return diamond_semilattice()
