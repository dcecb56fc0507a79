import time

import pytest

from abelmoments.profiles import registry
from abelmoments.sieve import geometric_checkpoints, summatory


@pytest.fixture(scope="session")
def default_checkpoints():
    return geometric_checkpoints(10**4, 10**8, 40)


@pytest.fixture(scope="session")
def abelian_sums(default_checkpoints):
    """Exact S_a(x) and S_{a^2}(x) at the 40 default checkpoints up to 1e8.

    Wall time of each run is kept in series.meta["elapsed_s"].
    """
    out = {}
    for r in (1, 2):
        t0 = time.perf_counter()
        out[r] = summatory(registry("abelian", r), default_checkpoints)
        out[r].meta["elapsed_s"] = time.perf_counter() - t0
    return out
