import pytest

from shiftmean.arith import build_spf_sieve


@pytest.fixture(scope="session")
def sieve_10k():
    return build_spf_sieve(10**4)


@pytest.fixture(scope="session")
def sieve_1m():
    return build_spf_sieve(10**6)
