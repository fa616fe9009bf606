import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dcpareto import CompositeParams, Lognormal, Weibull  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def random_grid(n_sets: int = 200, seed: int = 20240101):
    """Valid parameter sets for both families, theta log-uniform on (0.1, 1000)."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n_sets):
        theta = float(10 ** rng.uniform(-1, 3))
        alpha = float(rng.uniform(0.3, 5.0))
        if i % 2 == 0:
            head = Lognormal(float(np.log(theta) + rng.uniform(-3.0, 1.5)), float(rng.uniform(0.3, 2.5)))
        else:
            head = Weibull(float(rng.uniform(0.4, 3.0)), float(theta * 10 ** rng.uniform(-0.7, 0.7)))
        out.append(CompositeParams(head, alpha, theta))
    return out


def head_dict(params: CompositeParams) -> tuple[str, dict]:
    return params.head.kind, params.head.as_dict()


@pytest.fixture(scope="session")
def grid():
    return random_grid()


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
