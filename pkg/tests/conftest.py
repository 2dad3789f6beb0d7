import pytest

from crsnoma import ChannelVariances, PowerAllocation, SnrPoint


@pytest.fixture(scope="session")
def setup1():
    return ChannelVariances(alpha_sd=1.0, alpha_sr=10.0, alpha_rd=2.0)


@pytest.fixture(scope="session")
def setup2():
    return ChannelVariances(alpha_sd=1.0, alpha_sr=2.0, alpha_rd=10.0)


@pytest.fixture(scope="session")
def alloc_95_05():
    return PowerAllocation.split(0.95, 0.05)


@pytest.fixture(scope="session")
def snr_40db():
    return SnrPoint.from_db(40.0)
