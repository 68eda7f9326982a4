import pytest

from lirasr.phonetics import build_table


@pytest.fixture(scope="session")
def zh_table():
    return build_table("zh")


@pytest.fixture(scope="session")
def en_table():
    return build_table("en")


GATE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if GATE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in GATE_LINES:
            terminalreporter.write_line(line)
