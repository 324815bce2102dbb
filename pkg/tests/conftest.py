import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from defring.freegroup import FreeWord

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GENS = ("s1", "s2", "s3", "s4")

ACCEPTANCE_LINES: list[str] = []


def words(gens=GENS, max_len=12, max_exp=3):
    syll = st.tuples(st.sampled_from(gens), st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(syll, max_size=max_len).map(FreeWord)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
