"""Optimal portfolios for investors who penalize deviating from the group.

Each investor maximizes mean-variance utility minus a penalty
``(phi_i/2) (w_i - W beta)' sigma (w_i - W beta)`` on the covariance-weighted
distance between their own weights and the wealth-weighted fund aggregate.
The wealth-weighted sum of these objectives collapses into a single
trace-form mean-variance problem through an ``n x n`` mimicking matrix, and
the optimum is available in closed form.  Only the aggregate risk-aversion
scalar changes relative to the classical solution: every optimal column
still lies on the line through the GMVP spanned by the frontier tilt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
import scipy.linalg

from . import errors
from .markowitz import FrontierPoint, MarkowitzContext
from .model import InvestorGroup, MarketModel, PortfolioMatrix

# Uniform-wealth detection tolerance for equal_wealth_matrix.
UNIFORM_WEALTH_TOL = 1e-12


@dataclass(frozen=True)
class MimickingMatrix:
    """The group's mimicking matrix and its symmetrized form.

    ``a`` combines risk aversions, wealth shares and mimicking coefficients:
    ``a = (A0 + Phi) B + (phi_bar I - 2 Phi) beta beta'`` with diagonal
    ``A0 = diag(alpha)``, ``B = diag(beta)``, ``Phi = diag(phi)`` and
    ``phi_bar = beta' phi``.  Entrywise:

        a[i, i] = beta_i (alpha_i + phi_i) + beta_i^2 (phi_bar - 2 phi_i)
        a[i, j] = beta_i beta_j (phi_bar - 2 phi_i)          (i != j)

    ``a_phi = (a + a') / 2`` is symmetric positive definite for every valid
    group (``alpha > 0``, ``beta > 0``, ``phi >= 0``); it is the only matrix
    entering the closed-form solution.
    """

    a: np.ndarray
    a_phi: np.ndarray
    phi_bar: float


@dataclass(frozen=True)
class MimickingSolution:
    """Closed-form optimum of the penalized group problem.

    ``w_star``        per-investor optimal weights, one column each
    ``fund_weights``  wealth-weighted aggregate ``w_star @ beta``
    ``alpha_star_f``  aggregate risk aversion ``1 / (beta' a_phi^-1 beta)``
    ``point``         mean and variance of the fund portfolio return
    ``eu_star``       penalized aggregate utility achieved at the optimum
    """

    w_star: PortfolioMatrix
    fund_weights: np.ndarray
    alpha_star_f: float
    point: FrontierPoint
    eu_star: float


class AsymptoticAlpha(NamedTuple):
    """Large-group risk-aversion diagnostics; see :func:`asymptotic_alpha`."""

    limit_inverse: float
    upper: float
    classical: float


def mimicking_matrix(group: InvestorGroup) -> MimickingMatrix:
    """Build the mimicking matrix and eagerly check positive definiteness.

    The check cannot fail for a valid group; it is kept as a guard against
    tolerance pathologies and raises :class:`errors.NotPositiveDefinite`.
    """
    alpha, beta, phi = group.alpha, group.beta, group.phi
    phi_bar = float(beta @ phi)
    a = np.diag((alpha + phi) * beta) + np.outer((phi_bar - 2.0 * phi) * beta, beta)
    a_phi = (a + a.T) / 2.0
    try:
        np.linalg.cholesky(a_phi)
    except np.linalg.LinAlgError:
        raise errors.NotPositiveDefinite(
            "symmetrized mimicking matrix failed its positive-definiteness guard"
        ) from None
    a.setflags(write=False)
    a_phi.setflags(write=False)
    return MimickingMatrix(a=a, a_phi=a_phi, phi_bar=phi_bar)


def _solve_spd(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # Cholesky solve with one refinement step; wealth shares spanning several
    # orders of magnitude make the matrix ill-conditioned enough to need it.
    factor = scipy.linalg.cho_factor(matrix, lower=True)
    x = scipy.linalg.cho_solve(factor, rhs)
    x += scipy.linalg.cho_solve(factor, rhs - matrix @ x)
    return x


def solve(ctx: MarkowitzContext, group: InvestorGroup) -> MimickingSolution:
    """Closed-form solution of the penalized group problem.

    Column ``i`` of the optimum is ``gmvp + c_i * (q @ mu)`` where
    ``c = a_phi^-1 beta``; the fund aggregate uses the scalar
    ``beta' c`` as its inverse risk aversion.  The achieved utility is
    evaluated with :func:`penalized_utility` rather than re-derived.
    """
    mm = mimicking_matrix(group)
    c = _solve_spd(mm.a_phi, group.beta)
    tau = float(group.beta @ c)
    tilt = ctx.q @ ctx.market.mu
    w = ctx.gmvp[:, None] + np.outer(tilt, c)
    w_star = PortfolioMatrix(w)
    fund_weights = w @ group.beta
    fund_weights.setflags(write=False)
    point = FrontierPoint(
        mean=ctx.mu_gmv + tau * ctx.slope, variance=ctx.v_gmv + tau * tau * ctx.slope
    )
    eu_star = penalized_utility(ctx.market, group, w_star)
    return MimickingSolution(
        w_star=w_star,
        fund_weights=fund_weights,
        alpha_star_f=1.0 / tau,
        point=point,
        eu_star=eu_star,
    )


def penalized_utility(
    market: MarketModel, group: InvestorGroup, weights: Union[PortfolioMatrix, np.ndarray]
) -> float:
    """Penalized aggregate utility ``beta' W' mu - tr(a_phi W' sigma W) / 2``.

    Equals the wealth-weighted sum of the individual penalized objectives for
    any unit-column-sum ``W``; the trace may use either the raw or the
    symmetrized mimicking matrix since ``W' sigma W`` is symmetric.
    """
    if not isinstance(weights, PortfolioMatrix):
        weights = PortfolioMatrix(weights)
    if weights.k != market.k or weights.n != group.n:
        raise errors.DimensionMismatch(
            f"weights are {weights.k}x{weights.n}, expected {market.k}x{group.n}"
        )
    w = weights.weights
    mm = mimicking_matrix(group)
    gram = w.T @ market.sigma @ w
    return float(group.beta @ (w.T @ market.mu) - 0.5 * np.sum(mm.a_phi * gram))


def equal_wealth_matrix(group: InvestorGroup) -> np.ndarray:
    """Mimicking matrix in the rescaled form available under uniform wealth.

    For ``beta_i = 1/n`` the matrix ``n (A0 + Phi) + (phi_bar I - 2 Phi) 11'``
    equals ``n^2`` times the general mimicking matrix, and
    ``1' a_phi_scaled^-1 1`` reproduces ``beta' a_phi^-1 beta``, so both
    routes yield identical fund weights.
    """
    beta = group.beta
    n = group.n
    if np.max(np.abs(beta - 1.0 / n)) > UNIFORM_WEALTH_TOL:
        raise errors.NotUniformWealth("wealth shares are not uniform")
    phi_bar = float(beta @ group.phi)
    a = n * np.diag(group.alpha + group.phi) + np.outer(
        phi_bar - 2.0 * group.phi, np.ones(n)
    )
    a.setflags(write=False)
    return a


def asymptotic_alpha(group: InvestorGroup) -> AsymptoticAlpha:
    """Aggregate risk-aversion diagnostics for large groups.

    ``limit_inverse``  the harmonic-style aggregate ``sum beta_i/(alpha_i+phi_i)``
    ``upper``          ``beta'alpha + beta'phi``; always >= ``1/limit_inverse``
                       (weighted harmonic vs arithmetic mean)
    ``classical``      the penalty-free fund risk aversion
    """
    limit_inverse = float(np.sum(group.beta / (group.alpha + group.phi)))
    upper = float(group.beta @ group.alpha + group.beta @ group.phi)
    classical = 1.0 / float(np.sum(group.beta / group.alpha))
    return AsymptoticAlpha(limit_inverse=limit_inverse, upper=upper, classical=classical)
