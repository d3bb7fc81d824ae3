from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from disco.clock import LogicalClock
from disco.testing import FakeRegistry, drms_store

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def golden():
    return lambda name: (GOLDEN / name).read_bytes()


@pytest.fixture
def drms():
    return drms_store()


@pytest.fixture
def drms_registry(drms):
    return FakeRegistry(drms, endpoint="fake://drms")


@pytest.fixture
def clock():
    return LogicalClock(1000.0)
