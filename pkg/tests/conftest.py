import pytest
from hypothesis import settings

from frobcensus.census import run_census
from frobcensus.curves import LMFDB_3680_A

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _no_thread_env(monkeypatch):
    monkeypatch.delenv("FROBCENSUS_THREADS", raising=False)


@pytest.fixture(scope="session")
def census_2000():
    return run_census(LMFDB_3680_A, 2000)


@pytest.fixture(scope="session")
def census_5000():
    return run_census(LMFDB_3680_A, 5000)


@pytest.fixture(scope="session")
def census_10k():
    return run_census(LMFDB_3680_A, 10**4)
