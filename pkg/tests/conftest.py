import numpy as np
import pytest

from sparsecut import WeightedGraphPair

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def four_cycle_complete() -> WeightedGraphPair:
    """Unit 4-cycle cost graph, complete unit demand; optimum sparsity 1/2."""
    cost = [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)]
    demand = [(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)]
    return WeightedGraphPair.from_edges(4, cost, demand)


def random_pair(n: int, rng: np.random.Generator, demand_p: float = 0.7) -> WeightedGraphPair:
    """Random weighted pair; demand kept non-empty."""
    cost = [(i, j, float(rng.uniform(0, 1))) for i in range(n) for j in range(i + 1, n)
            if rng.random() < 0.8]
    demand = [(i, j, float(rng.uniform(0.2, 1))) for i in range(n) for j in range(i + 1, n)
              if rng.random() < demand_p]
    if not demand:
        demand = [(0, 1, 1.0)]
    return WeightedGraphPair.from_edges(n, cost, demand)


def brute_force_phi_star(g: WeightedGraphPair) -> float:
    """Independent minimum-sparsity search over all proper subsets."""
    best = np.inf
    for mask in range(1, 2 ** g.n - 1):
        members = [(mask >> i) & 1 for i in range(g.n)]
        cost = sum(w for (i, j), w in g.cost.items() if members[i] != members[j])
        dem = sum(w for (i, j), w in g.demand.items() if members[i] != members[j])
        if dem > 0:
            best = min(best, cost / dem)
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
