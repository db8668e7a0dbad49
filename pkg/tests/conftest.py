import numpy as np
import pytest

from hardedge import DropletFamily, ginibre, power
from hardedge.orthopoly import cached_kernel_table


@pytest.fixture(scope="session")
def gin_family():
    return DropletFamily(ginibre())


@pytest.fixture(scope="session")
def quartic_family():
    return DropletFamily(power(2))


@pytest.fixture(scope="session")
def kernel_cache_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("kernel-cache")


@pytest.fixture(scope="session")
def table_store(kernel_cache_dir):
    """Memoized kernel tables shared by the whole session.

    Keyed by (potential name, n); backed by one on-disk cache directory so
    the acceptance sweeps and module tests build each table exactly once.
    """
    store = {}

    def get(fam, n, threads=1):
        key = (fam.potential.name, n)
        if key not in store:
            store[key] = cached_kernel_table(fam, n, cache_dir=kernel_cache_dir,
                                             threads=threads)
        return store[key]

    return get


@pytest.fixture(scope="session")
def rescaled_grid():
    return np.arange(-3.0, -0.5 + 0.025, 0.05)
