import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from walkscatter.coin_algebra import TransferMatrix, UnitaryCoin
from walkscatter.walk import CoinSequence

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

angles = st.floats(min_value=-np.pi, max_value=np.pi, allow_nan=False)


@st.composite
def transfers(draw, qmax=10.0):
    """Elements of T: [[p, conj q], [q, conj p]] with |p|^2 - |q|^2 = 1."""
    r = draw(st.floats(min_value=0.0, max_value=qmax))
    phi, psi = draw(angles), draw(angles)
    q = r * np.exp(1j * phi)
    p = np.sqrt(1 + r * r) * np.exp(1j * psi)
    return TransferMatrix.from_pq(p, q)


@st.composite
def coins(draw, amin=0.05):
    """Elements of S: e^{i phi} [[alpha, beta], [-conj beta, alpha]] with alpha > 0."""
    a = draw(st.floats(min_value=amin, max_value=1.0))
    phi, theta = draw(angles), draw(angles)
    beta = np.sqrt(max(1 - a * a, 0.0)) * np.exp(1j * theta)
    return UnitaryCoin(np.exp(1j * phi) * np.array([[a, beta], [-np.conj(beta), a]]))


@st.composite
def coin_sequences(draw, max_n0=4, amin=0.05):
    n0 = draw(st.integers(min_value=1, max_value=max_n0))
    return CoinSequence([draw(coins(amin)) for _ in range(n0)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance PASS/FAIL lines at the end of the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
