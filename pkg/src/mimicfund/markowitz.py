"""Classical mean-variance solutions without any mimicking penalty.

Provides the global minimum-variance portfolio, the frontier constants, the
closed-form individual optimum for a given risk aversion, the fund-level
aggregation across a group, and plain mean-variance utility evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import errors
from .model import COLUMN_SUM_TOL, InvestorGroup, MarketModel


@dataclass(frozen=True)
class FrontierPoint:
    """Mean and variance of a portfolio on the efficient frontier."""

    mean: float
    variance: float


@dataclass(frozen=True)
class MarkowitzContext:
    """Derived quantities of a market, shared by all closed-form solvers.

    ``gmvp``                global minimum-variance weights, sums to 1
    ``q``                   symmetric PSD matrix with ``q @ 1 == 0``; scaled
                            by an inverse risk aversion it gives the optimal
                            tilt away from ``gmvp``
    ``mu_gmv``, ``v_gmv``   mean and variance of the GMVP (``v_gmv > 0``)
    ``slope``               curvature constant ``mu' q mu >= 0`` of the
                            frontier parametrization
    ``market``              the generating :class:`MarketModel`
    """

    gmvp: np.ndarray
    q: np.ndarray
    mu_gmv: float
    v_gmv: float
    slope: float
    market: MarketModel


def context(market: MarketModel) -> MarkowitzContext:
    """Compute the GMVP, the tilt matrix and the frontier constants.

    Linear systems are solved against the Cholesky factor of the covariance
    rather than through an explicit inverse.
    """
    sigma = market.sigma
    k = market.k
    ones = np.ones(k)
    try:
        factor = scipy.linalg.cho_factor(sigma, lower=True)
        si_one = scipy.linalg.cho_solve(factor, ones)
        sigma_inv = scipy.linalg.cho_solve(factor, np.eye(k))
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise errors.NumericalBreakdown(f"covariance solve failed: {exc}") from exc
    c0 = float(ones @ si_one)
    if c0 <= 0 or not np.isfinite(c0):
        raise errors.NumericalBreakdown("1' sigma^-1 1 is not positive")
    gmvp = si_one / c0
    q = sigma_inv - np.outer(si_one, si_one) / c0
    q = (q + q.T) / 2.0
    mu_gmv = float(market.mu @ si_one) / c0
    v_gmv = 1.0 / c0
    slope = float(market.mu @ q @ market.mu)
    if slope < 0:
        # exact value is >= 0; only rounding noise may dip below
        if slope < -1e-12 * max(1.0, float(market.mu @ market.mu)) * np.max(np.abs(q)):
            raise errors.NumericalBreakdown(f"frontier slope came out negative: {slope!r}")
        slope = 0.0
    gmvp.setflags(write=False)
    q.setflags(write=False)
    return MarkowitzContext(gmvp=gmvp, q=q, mu_gmv=mu_gmv, v_gmv=v_gmv, slope=slope, market=market)


def individual_weights(ctx: MarkowitzContext, alpha_i: float) -> tuple[np.ndarray, FrontierPoint]:
    """Optimal unit-sum weights and frontier point for risk aversion ``alpha_i``."""
    if alpha_i <= 0:
        raise errors.NonPositiveAlpha(f"alpha must be > 0, got {alpha_i!r}")
    t = 1.0 / alpha_i
    weights = ctx.gmvp + t * (ctx.q @ ctx.market.mu)
    point = FrontierPoint(mean=ctx.mu_gmv + t * ctx.slope, variance=ctx.v_gmv + t * t * ctx.slope)
    return weights, point


def fund_aggregate(
    ctx: MarkowitzContext, group: InvestorGroup
) -> tuple[np.ndarray, float, FrontierPoint]:
    """Wealth-weighted fund portfolio of a group that ignores mimicking.

    The fund's risk aversion is the weighted harmonic mean of the individual
    ones, and its weights equal the beta-weighted average of the individual
    optima.
    """
    alpha_f = 1.0 / float(np.sum(group.beta / group.alpha))
    t = 1.0 / alpha_f
    weights = ctx.gmvp + t * (ctx.q @ ctx.market.mu)
    point = FrontierPoint(mean=ctx.mu_gmv + t * ctx.slope, variance=ctx.v_gmv + t * t * ctx.slope)
    return weights, alpha_f, point


def mv_utility(market: MarketModel, weights, alpha: float) -> float:
    """Mean-variance utility ``w'mu - (alpha/2) w'sigma w`` of unit-sum weights."""
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] != market.k:
        raise errors.DimensionMismatch(
            f"weights must be a length-{market.k} vector, got shape {w.shape}"
        )
    off = abs(float(w.sum()) - 1.0)
    if off > COLUMN_SUM_TOL:
        raise errors.ConstraintViolated(f"weights sum to {w.sum()!r}, not 1")
    return float(w @ market.mu - 0.5 * alpha * (w @ market.sigma @ w))
