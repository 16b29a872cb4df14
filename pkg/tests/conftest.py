import numpy as np
import pytest

from geoment.tensors import StateTensor

# acceptance-criterion pass/fail lines, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_state(n: int, rng: np.random.Generator) -> StateTensor:
    z = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return StateTensor(z / np.linalg.norm(z))


def random_unit_vector(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    return z / np.linalg.norm(z)


def bloch_geodesic(a: np.ndarray, b: np.ndarray) -> float:
    """Great-circle distance on the Bloch sphere between two pure states."""
    overlap = min(1.0, abs(np.vdot(a, b)))
    return 2.0 * float(np.arccos(overlap))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
