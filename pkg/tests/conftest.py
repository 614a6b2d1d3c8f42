import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import connected_graphs  # noqa: E402

from neartree.oracle import exact_opt  # noqa: E402


@pytest.fixture(scope="session")
def atlas():
    """n -> all connected graphs on n vertices up to isomorphism."""

    def get(n: int):
        return connected_graphs(n)

    return get


class OracleCache:
    """Memoized optimum sizes: (graph, ell) -> size of the best solution found
    with budget min(6, |E|), or None."""

    def __init__(self):
        self._memo = {}

    def opt(self, g, ell, k_max=3):
        key = (g, ell, k_max)
        if key not in self._memo:
            res = exact_opt(g, ell, min(k_max, g.m))
            self._memo[key] = None if res is None else res[1]
        return self._memo[key]

    def decide(self, g, k, ell):
        if k < 0:
            return False
        cap = 3 if k <= 3 else min(6, k)  # sweep budgets share one scan
        best = self.opt(g, ell, k_max=cap)
        return best is not None and best <= k


@pytest.fixture(scope="session")
def oracle_cache():
    return OracleCache()
