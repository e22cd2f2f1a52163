"""Independent verification path for the closed-form solver.

Treats the penalized group problem as a generic equality-constrained
quadratic program in the stacked unknowns ``(vec(W'), lambda)`` and solves
the dense KKT system assembled with Kronecker products:

    [ sigma (x) a_phi   1_k (x) I_n ] [ vec(W') ]   [ (mu (x) I_n) beta ]
    [ 1_k' (x) I_n      0           ] [ lambda  ] = [ 1_n               ]

``sigma (x) a_phi`` is positive definite, so the maximizer is unique and any
disagreement with the closed form indicates a bug on one of the two paths.
This module deliberately shares no solver code with :mod:`mimicfund.mimicking`
or :mod:`mimicfund.markowitz`; even the mimicking matrix is rebuilt here from
its entrywise definition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from . import errors
from .model import InvestorGroup, MarketModel, PortfolioMatrix

if TYPE_CHECKING:  # type-only; keeps the runtime dependency direction clean
    from .markowitz import MarkowitzContext

# Cap on kn + n unknowns of the dense KKT system (O(N^3) factorization).
DEFAULT_MAX_UNKNOWNS = 5000

# Accepted scaled residual of a returned KKT solution.
RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class OracleSolution:
    """KKT solution with its Lagrange multipliers and reported residual.

    Multipliers follow the convention in which the Lagrangian reads
    ``objective + lambda' (W' 1_k - 1_n)``; the symmetric system below solves
    for their negation and :func:`solve_kkt_system` flips the sign on return.
    """

    weights: PortfolioMatrix
    multipliers: np.ndarray
    residual: float


def entrywise_mimicking_matrix(alpha, beta, phi) -> np.ndarray:
    """Mimicking matrix built entry by entry, independent of the matrix form.

    Diagonal: ``beta_i^2 (alpha_i/beta_i + (1/beta_i - 2) phi_i + phi_bar)``.
    Off-diagonal: ``beta_i beta_j (phi_bar - 2 phi_i)``.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = alpha.shape[0]
    phi_bar = float(beta @ phi)
    a = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if i == j:
                a[i, i] = beta[i] ** 2 * (
                    alpha[i] / beta[i] + (1.0 / beta[i] - 2.0) * phi[i] + phi_bar
                )
            else:
                a[i, j] = beta[i] * beta[j] * (phi_bar - 2.0 * phi[i])
    return a


def solve_kkt_system(
    mu, sigma, a_phi, beta, max_unknowns: int = DEFAULT_MAX_UNKNOWNS
) -> tuple[np.ndarray, np.ndarray, float]:
    """Assemble and solve the dense KKT system; returns ``(W, lambda, residual)``.

    Accepts raw arrays so degenerate shapes (e.g. a single investor) can be
    exercised directly in tests.  The residual is the max norm of
    ``KKT @ x - rhs`` and is checked against ``RESIDUAL_TOL`` scaled by the
    right-hand side; a violation raises :class:`errors.SingularKkt`.
    """
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    a_phi = np.asarray(a_phi, dtype=float)
    beta = np.asarray(beta, dtype=float)
    k = mu.shape[0]
    n = beta.shape[0]
    size = k * n + n
    if size > max_unknowns:
        raise errors.SizeCapExceeded(
            f"KKT system has {size} unknowns, exceeding the cap of {max_unknowns}"
        )
    kkt = np.zeros((size, size))
    kkt[: k * n, : k * n] = np.kron(sigma, a_phi)
    constraint = np.kron(np.ones((k, 1)), np.eye(n))
    kkt[: k * n, k * n :] = constraint
    kkt[k * n :, : k * n] = constraint.T
    rhs = np.concatenate([np.kron(mu, beta), np.ones(n)])
    try:
        factor = scipy.linalg.lu_factor(kkt)
        x = scipy.linalg.lu_solve(factor, rhs)
        x += scipy.linalg.lu_solve(factor, rhs - kkt @ x)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise errors.SingularKkt(f"KKT factorization failed: {exc}") from exc
    residual = float(np.max(np.abs(kkt @ x - rhs)))
    bound = RESIDUAL_TOL * (1.0 + float(np.max(np.abs(rhs))))
    if not residual <= bound:  # also catches NaN
        raise errors.SingularKkt(
            f"KKT residual {residual!r} exceeds {bound!r}; system is numerically singular"
        )
    # x[: k*n] is vec(W') = row-major flattening of W; the trailing block is
    # the negated multiplier under the plus-sign Lagrangian convention
    w = x[: k * n].reshape(k, n)
    return w, -x[k * n :], residual


def kkt_solve(
    market: MarketModel, group: InvestorGroup, max_unknowns: int = DEFAULT_MAX_UNKNOWNS
) -> OracleSolution:
    """Solve the penalized group problem through the KKT system alone."""
    a = entrywise_mimicking_matrix(group.alpha, group.beta, group.phi)
    a_phi = (a + a.T) / 2.0
    w, lam, residual = solve_kkt_system(market.mu, market.sigma, a_phi, group.beta, max_unknowns)
    lam.setflags(write=False)
    return OracleSolution(weights=PortfolioMatrix(w), multipliers=lam, residual=residual)


def lambda_closed_form(ctx: "MarkowitzContext", group: InvestorGroup) -> np.ndarray:
    """Closed-form Lagrange multipliers of the stacked problem.

    ``lambda = v_gmv * a_phi 1_n - mu_gmv * beta``; matches the multipliers
    returned by :func:`kkt_solve`.
    """
    a = entrywise_mimicking_matrix(group.alpha, group.beta, group.phi)
    a_phi = (a + a.T) / 2.0
    return ctx.v_gmv * (a_phi @ np.ones(group.n)) - ctx.mu_gmv * group.beta
