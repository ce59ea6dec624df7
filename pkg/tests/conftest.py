import numpy as np
import pytest
from hypothesis import strategies as st

from memwalk.walk import CoinParams, InitialState

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_inits(seed, n):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        out.append(InitialState.from_vector(z, normalize=True))
    return out


def coin_from_angles(theta, phi, psi, chi):
    """General U(2) block [[a, c], [b, d]] from four angles."""
    g = np.exp(1j * phi)
    a = g * np.exp(1j * psi) * np.cos(theta)
    c = g * np.exp(1j * chi) * np.sin(theta)
    b = -g * np.exp(-1j * chi) * np.sin(theta)
    d = g * np.exp(-1j * psi) * np.cos(theta)
    return CoinParams(a, b, c, d)


angles = st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False)
coins = st.builds(coin_from_angles, angles, angles, angles, angles)

_comp = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@st.composite
def inits(draw):
    v = np.array([complex(draw(_comp), draw(_comp)) for _ in range(4)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v = np.array([1, 0, 0, 0], dtype=complex)
        n = 1.0
    return InitialState.from_vector(v / n)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
