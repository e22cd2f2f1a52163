"""Independent reference implementations used as test oracles.

Everything here is deliberately written from the raw optimality conditions
with plain numpy solves, sharing no code with the package's solvers.
"""

import numpy as np


def qp_gmvp(sigma):
    """Minimum-variance unit-sum weights via a direct KKT solve."""
    k = sigma.shape[0]
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = 2.0 * sigma
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    return np.linalg.solve(kkt, rhs)[:k]


def qp_individual(mu, sigma, alpha):
    """Maximize w'mu - alpha/2 w'sigma w subject to w'1 = 1, via KKT."""
    k = sigma.shape[0]
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = alpha * sigma
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.concatenate([mu, [1.0]])
    return np.linalg.solve(kkt, rhs)[:k]


def classical_stacked(mu, sigma, alpha, beta):
    """Maximize the wealth-weighted sum of plain mean-variance objectives.

    One stationarity block and one unit-sum constraint per investor; returns
    the k x n matrix of individual optima.
    """
    k = sigma.shape[0]
    n = len(alpha)
    size = n * (k + 1)
    kkt = np.zeros((size, size))
    rhs = np.zeros(size)
    for i in range(n):
        row = i * k
        con = n * k + i
        kkt[row : row + k, row : row + k] = beta[i] * alpha[i] * sigma
        kkt[row : row + k, con] = 1.0
        kkt[con, row : row + k] = 1.0
        rhs[row : row + k] = beta[i] * mu
        rhs[con] = 1.0
    solution = np.linalg.solve(kkt, rhs)
    return solution[: n * k].reshape(n, k).T


def penalized_direct(mu, sigma, alpha, beta, phi, w):
    """Wealth-weighted sum of the individual penalized objectives.

    Evaluates, term by term,
    sum_i beta_i [w_i'mu - alpha_i/2 w_i'sigma w_i
                  - phi_i/2 (w_i - W beta)' sigma (w_i - W beta)].
    """
    fund = w @ beta
    total = 0.0
    for i in range(len(alpha)):
        wi = w[:, i]
        diff = wi - fund
        total += beta[i] * (
            wi @ mu
            - 0.5 * alpha[i] * (wi @ sigma @ wi)
            - 0.5 * phi[i] * (diff @ sigma @ diff)
        )
    return total


def rel_entry_err(a, b):
    """Max entrywise deviation relative to entry magnitude, floored at 1."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)))))


def unit_sum_columns(rng, k, n):
    """Random k x n matrix whose columns sum to one, entries O(1)."""
    w = rng.standard_normal((k, n))
    w -= (w.sum(axis=0) - 1.0) / k
    return w
