import pytest

from etsim import get_preset, run_batch


@pytest.fixture(scope="session")
def batch_simple_fpa():
    return run_batch(get_preset("simple-fpa"))


@pytest.fixture(scope="session")
def batch_simple_fpa_secondary():
    return run_batch(get_preset("simple-fpa").with_overrides(secondary_market=True))


@pytest.fixture(scope="session")
def batch_jit_spa():
    return run_batch(get_preset("jit-spa"))


@pytest.fixture(scope="session")
def batch_flexible_1559():
    return run_batch(get_preset("flexible-1559"))


@pytest.fixture(scope="session")
def batch_fixed_spa():
    return run_batch(get_preset("fixed-spa"))


@pytest.fixture(scope="session")
def batch_flexible_amm():
    return run_batch(get_preset("flexible-amm"))


@pytest.fixture(scope="session")
def batch_fixed_fpa_resale():
    return run_batch(get_preset("fixed-fpa-resale"))
