"""Shared fixtures: the small ring zoo and the loggers."""
import numpy as np
import pytest
from core.managers.logger_manager import logger_manager
from core.ring_core import RingSpec, RingTable, build_ring, ideal_generate
from core.spec_parser import parse_ring_spec


# ============================================================================
# Rings
# ============================================================================


def ring_of(text: str) -> RingTable:
    return build_ring(parse_ring_spec(text))


@pytest.fixture(scope='session')
def z2() -> RingTable:
    return build_ring(RingSpec.modular(2))


@pytest.fixture(scope='session')
def z4() -> RingTable:
    return build_ring(RingSpec.modular(4))


@pytest.fixture(scope='session')
def z8() -> RingTable:
    return build_ring(RingSpec.modular(8))


@pytest.fixture(scope='session')
def z16() -> RingTable:
    return build_ring(RingSpec.modular(16))


@pytest.fixture(scope='session')
def dual() -> RingTable:
    """Z/2[x]/(x^2)."""
    return ring_of('Z/2[x]/(x^2)')


@pytest.fixture(scope='session')
def ut2() -> RingTable:
    """Upper triangular 2 x 2 matrices over Z/2, the smallest noncommutative ring in the zoo."""
    return ring_of('UT2(Z/2)')


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


def principal(ring: RingTable, name: str):
    return ideal_generate(ring, [ring.index_of(name)])


# ============================================================================
# Loggers
# ============================================================================


@pytest.fixture
async def loggers(tmp_path):
    await logger_manager.setup_logger_verification(str(tmp_path))
    await logger_manager.setup_logger_lemmas(str(tmp_path))
    yield tmp_path
    await logger_manager.shutdown()
