import pytest

from monogenic.quadrature import make_ball_rule, norm_table


@pytest.fixture(scope="session")
def rule():
    return make_ball_rule()


@pytest.fixture(scope="session")
def nt6():
    return norm_table(6)


@pytest.fixture(scope="session")
def nt8():
    return norm_table(8)


@pytest.fixture(scope="session")
def nt20():
    return norm_table(20)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
