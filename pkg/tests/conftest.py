"""
tests/conftest.py

Shared parameter sets.
"""

import pytest
import structlog

from src.core.config import set_default_config
from src.core.params import ProtocolParams

BITCOIN_LAMBDA = 1.0 / 600.0
ETC_LAMBDA = 1.0 / 13.0


@pytest.fixture(autouse=True)
def _defaults():
    structlog.reset_defaults()
    set_default_config(None)
    yield
    set_default_config(None)


@pytest.fixture
def bitcoin():
    """lambda = 1/600, delta = 10 s, beta = 0.25"""
    return ProtocolParams.from_rates(BITCOIN_LAMBDA, 0.25, delta=10.0, k=3)


@pytest.fixture
def etc():
    return ProtocolParams.from_rates(ETC_LAMBDA, 0.25, delta=2.0, k=3)


@pytest.fixture
def zero_delay():
    return ProtocolParams.from_rates(1.0, 0.25, delta=0.0, k=3)


@pytest.fixture
def honest_only():
    return ProtocolParams(a=0.0, h=1.0, delta=0.0, k=2)
