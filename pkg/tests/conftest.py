import numpy as np
import pytest

from centralmeasure import ErgodicParams, new_sample

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, passed: bool, detail: str = "") -> bool:
    ACCEPTANCE_LINES.append(f"{criterion:<4} {'PASS' if passed else 'FAIL'}  {detail}")
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def two_points():
    return ErgodicParams(0.0, 0.0, (2.0, -1.0))


@pytest.fixture
def sample_two_points(two_points):
    return new_sample(two_points, 11)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


ACCEPTANCE_SEED = 20261016
SCENARIO_INTERVALS = ("[1.5, 2.5]", "(-1.5, -0.5)", "(0.5, 1.5)")
SCENARIO_PAIRS = ((1, 1), (1, 2))


@pytest.fixture(scope="session")
def scenario_report():
    """100-replica convergence run for alpha = (0, 0, [2, -1]); also returns its wall time."""
    import time

    from centralmeasure import convergence_run

    t0 = time.perf_counter()
    rep = convergence_run(ErgodicParams(0.0, 0.0, (2.0, -1.0)), ACCEPTANCE_SEED,
                          intervals=SCENARIO_INTERVALS, pairs=SCENARIO_PAIRS, replicas=100)
    return rep, time.perf_counter() - t0
