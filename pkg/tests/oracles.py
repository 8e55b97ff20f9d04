"""Independent brute-force evaluators the library is checked against.

Everything here is written as plain loops or boolean matrix powers,
deliberately avoiding the library's own vectorized code paths, so an
agreement between the two is meaningful.
"""

import numpy as np


def aggregate_by_loops(countries, goods, flows):
    """Sum pairwise flows into per-country export/import columns."""
    l, n = len(countries), len(goods)
    exports = np.zeros((n, l))
    imports = np.zeros((n, l))
    for i in range(l):
        for s in range(l):
            if i == s:
                continue
            vec = flows.get((i, s))
            if vec is None:
                continue
            for k in range(n):
                exports[k][i] += vec[k]
                imports[k][s] += vec[k]
    return imports, exports


def mixing_by_loops(imports, tau):
    """Convex recombination weights: country k's allocation times import shares."""
    imports = np.asarray(imports, dtype=float)
    tau = np.asarray(tau, dtype=float)
    n, l = imports.shape
    world = [sum(imports[g][s] for s in range(l)) for g in range(n)]
    mixing = np.zeros((l, l))
    for k in range(l):
        for s in range(l):
            for g in range(n):
                mixing[k][s] += tau[k][g] * imports[g][s] / world[g]
    return mixing


def clearing_defect_loops(imports, exports, prices):
    """Per-good clearing defect evaluated with explicit sums."""
    imports = np.asarray(imports, dtype=float)
    exports = np.asarray(exports, dtype=float)
    prices = np.asarray(prices, dtype=float)
    n, l = imports.shape
    defect = np.zeros(n)
    for k in range(n):
        lhs = 0.0
        for i in range(l):
            earn = sum(exports[g][i] * prices[g] for g in range(n))
            spend = sum(imports[g][i] * prices[g] for g in range(n))
            lhs += imports[k][i] * earn / spend
        rhs = sum(exports[k][s] for s in range(l))
        defect[k] = lhs - rhs
    return defect


def restricted_defect_loops(imports, exports, factors, prices):
    """Clearing defect of the row-scaled system, explicit sums."""
    imports = np.asarray(imports, dtype=float)
    exports = np.asarray(exports, dtype=float)
    factors = np.asarray(factors, dtype=float)
    return clearing_defect_loops(
        factors[:, None] * imports, factors[:, None] * exports, prices
    )


def reachable_irreducible(matrix):
    """Strong connectivity via boolean squaring of identity + positivity pattern."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    reach = (matrix > 0) | np.eye(n, dtype=bool)
    steps = 0
    while (1 << steps) < n:
        reach = (reach.astype(int) @ reach.astype(int)) > 0
        steps += 1
    return bool(np.all(reach & reach.T))


def value_space_prices(imports, tau, iterations=200000, tol=1e-14):
    """Solve in country-value space, then map back to good prices.

    Iterates the transposed mixing matrix to its fixed point, then
    reconstructs prices from the values through the allocation shares.
    """
    imports = np.asarray(imports, dtype=float)
    tau = np.asarray(tau, dtype=float)
    n, l = imports.shape
    mixing = mixing_by_loops(imports, tau)
    values = np.full(l, 1.0 / l)
    for _ in range(iterations):
        updated = values + mixing.T @ values
        updated /= updated.sum()
        if np.max(np.abs(updated - values)) <= tol:
            values = updated
            break
        values = updated
    world = imports.sum(axis=1)
    prices = np.zeros(n)
    for g in range(n):
        prices[g] = sum(values[k] * tau[k][g] for k in range(l)) / world[g]
    return prices / prices.sum(), values
