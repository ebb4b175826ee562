import numpy as np
import pytest
from hypothesis import assume
from hypothesis import strategies as st

from quantum_bos.bos_analysis import BosParams, bos_bimatrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def bos531():
    return BosParams(5, 3, 1)


@pytest.fixture
def game531(bos531):
    return bos_bimatrix(bos531)


payoffs = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)
unit = st.floats(min_value=0, max_value=1, allow_nan=False)


@st.composite
def bos_params(draw):
    g, b, a = sorted(draw(st.lists(payoffs, min_size=3, max_size=3, unique=True)))
    assume(a - b > 1e-6 and b - g > 1e-6)
    return BosParams(a, b, g)
