import pytest

from superabundant.sa import brute_force_sa_upto, enumerate_sa


@pytest.fixture(scope="session")
def sa_records_1000():
    return list(enumerate_sa(1000))


@pytest.fixture(scope="session")
def sa_records_2000(sa_records_1000):
    out = list(sa_records_1000)
    gen = enumerate_sa(2000)
    for rec in gen:
        if rec.index > 1000:
            out.append(rec)
    return out


@pytest.fixture(scope="session")
def brute_sa_1e6():
    return brute_force_sa_upto(10 ** 6)
