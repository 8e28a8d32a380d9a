import numpy as np
import pytest

from fdbounds.generators import DiscreteDistribution
from fdbounds.measures import DiscretePair

# five-cell categorical pair: two cells moved by 1/(m n) with n=5, m=100
CATEGORICAL_P = [0.202, 0.198, 0.2, 0.2, 0.2]


@pytest.fixture
def categorical_pair():
    return DiscretePair(DiscreteDistribution(np.array(CATEGORICAL_P)), DiscreteDistribution.uniform(5))


def random_pair(rng, k_lo=2, k_hi=50):
    k = int(rng.integers(k_lo, k_hi + 1))
    q = rng.dirichlet(np.ones(k))
    p = rng.dirichlet(np.ones(k))
    return p, q


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
