import os

import pytest
from hypothesis import HealthCheck, settings

from mumford_trop.faithful import tropicalize
from mumford_trop.moebius import log_q
from mumford_trop.reference import ce1, cp1, se1
from mumford_trop.skeleton import build_skeleton

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def S_se1():
    return se1()


@pytest.fixture(scope="session")
def S_ce1():
    return ce1()


@pytest.fixture(scope="session")
def S_cp1():
    return cp1()


@pytest.fixture(scope="session")
def skel_se1(S_se1):
    return build_skeleton(S_se1, log_q(S_se1))


@pytest.fixture(scope="session")
def skel_ce1(S_ce1):
    return build_skeleton(S_ce1, log_q(S_ce1))


@pytest.fixture(scope="session")
def trop_se1(S_se1):
    return tropicalize(S_se1)


@pytest.fixture(scope="session")
def trop_ce1(S_ce1):
    return tropicalize(S_ce1)
