import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from fdtradeoff.single_pair import GainTriple

hypothesis.settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow],
)
hypothesis.settings.register_profile("fast", max_examples=15, deadline=None)
hypothesis.settings.load_profile("default")


def log_uniform_cnr():
    """CNRs spread over [0.1, 1000], the population used throughout."""
    return st.floats(min_value=-1.0, max_value=3.0).map(lambda e: 10.0**e)


@st.composite
def gain_triples(draw, valid=True):
    """Random pair gains; ``valid`` controls the full-duplex advantage check.

    Valid triples place the inflated cross gain strictly below both direct
    links; invalid ones strictly above the weaker link.
    """
    h_up = draw(log_uniform_cnr())
    h_down = draw(log_uniform_cnr())
    rsi = draw(st.floats(min_value=0.0, max_value=1.0))
    cap = min(h_up, h_down) / (1.0 + rsi)
    if valid:
        frac = draw(st.floats(min_value=0.0, max_value=0.995))
    else:
        frac = draw(st.floats(min_value=1.005, max_value=10.0))
    return GainTriple(h_up, h_down, cap * frac, rsi)


def random_valid_gains(rng: np.random.Generator) -> GainTriple:
    """Seeded counterpart of ``gain_triples(valid=True)`` for bulk sweeps."""
    h_up, h_down = 10.0 ** rng.uniform(-1.0, 3.0, size=2)
    rsi = rng.uniform(0.0, 1.0)
    cap = min(h_up, h_down) / (1.0 + rsi)
    return GainTriple(h_up, h_down, cap * rng.uniform(0.0, 0.995), rsi)


def random_invalid_gains(rng: np.random.Generator) -> GainTriple:
    h_up, h_down = 10.0 ** rng.uniform(-1.0, 3.0, size=2)
    rsi = rng.uniform(0.0, 1.0)
    cap = min(h_up, h_down) / (1.0 + rsi)
    return GainTriple(h_up, h_down, cap * rng.uniform(1.005, 10.0), rsi)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
