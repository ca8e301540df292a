import numpy as np
import pytest

from pinchmm.scenario import ScenarioGenSpec, build_config, generate_scenario
from pinchmm.model import UserPosition

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def default_cfg():
    return generate_scenario(ScenarioGenSpec(num_users=5, seed=11))


@pytest.fixture
def one_user_cfg():
    return build_config([UserPosition(2.0, 1.0)], num_pinch=1, alpha=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
