"""CSV ingestion of return histories and sample-moment estimation.

File format: UTF-8, comma-separated, first row is the asset-name header,
each following row holds one period's simple returns as decimal fractions,
in chronological order.  Decimal point is '.', no thousands separators.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import errors
from .model import MarketModel, build_market


@dataclass(frozen=True)
class ReturnSample:
    """A ``T x k`` matrix of observed per-period returns with asset names.

    Requires ``T >= k + 2`` (sample covariance is only generically positive
    definite for T > k; one extra row of margin) and finite entries.
    """

    returns: np.ndarray
    asset_names: tuple[str, ...]

    def __post_init__(self):
        arr = np.array(self.returns, dtype=float)
        if arr.ndim != 2:
            raise errors.DimensionMismatch(f"returns must be 2-D, got shape {arr.shape}")
        names = tuple(str(s) for s in self.asset_names)
        if len(names) != arr.shape[1]:
            raise errors.DimensionMismatch(
                f"{len(names)} asset names for {arr.shape[1]} return columns"
            )
        if not np.all(np.isfinite(arr)):
            row, col = np.argwhere(~np.isfinite(arr))[0]
            raise errors.NonFiniteValue(
                f"non-finite return at observation {row + 1}, column {col + 1}"
            )
        if arr.shape[0] < arr.shape[1] + 2:
            raise errors.TooFewObservations(
                f"need at least k + 2 = {arr.shape[1] + 2} observations, got {arr.shape[0]}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "returns", arr)
        object.__setattr__(self, "asset_names", names)

    @property
    def t(self) -> int:
        """Observation count."""
        return self.returns.shape[0]

    @property
    def k(self) -> int:
        """Asset count."""
        return self.returns.shape[1]


def load_csv(path) -> ReturnSample:
    """Parse a return-history CSV into a validated :class:`ReturnSample`.

    Parse failures name the offending row (1-based physical line, header is
    row 1) and column.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            rows = list(reader)
    except OSError as exc:
        raise errors.IoError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise errors.ParseError(f"{path}: file is empty")
    header = [cell.strip() for cell in rows[0]]
    if not header or any(not name for name in header):
        raise errors.ParseError(f"{path}: row 1: header must name every column")
    k = len(header)
    values = np.empty((len(rows) - 1, k))
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != k:
            raise errors.ParseError(
                f"{path}: row {line_no}: expected {k} fields, got {len(row)}"
            )
        for col_no, cell in enumerate(row, start=1):
            text = cell.strip()
            if not text:
                raise errors.ParseError(f"{path}: row {line_no}, column {col_no}: empty cell")
            try:
                value = float(text)
            except ValueError:
                raise errors.ParseError(
                    f"{path}: row {line_no}, column {col_no}: not a number: {text!r}"
                ) from None
            if not np.isfinite(value):
                raise errors.NonFiniteValue(
                    f"{path}: row {line_no}, column {col_no}: non-finite value {text!r}"
                )
            values[line_no - 2, col_no - 1] = value
    return ReturnSample(returns=values, asset_names=tuple(header))


def estimate(sample: ReturnSample, periods_per_year: Optional[int] = None) -> MarketModel:
    """Sample moments of a return history, optionally annualized.

    Means are column averages, the covariance uses the unbiased ``T - 1``
    divisor; with ``periods_per_year = P`` both moments are scaled by ``P``
    (i.i.d. convention).  The result passes full market validation, so
    degenerate data surfaces as :class:`errors.NotPositiveDefinite`.
    """
    mu = sample.returns.mean(axis=0)
    sigma = np.cov(sample.returns, rowvar=False, ddof=1)
    sigma = np.atleast_2d(sigma)
    if periods_per_year is not None:
        if not isinstance(periods_per_year, (int, np.integer)) or periods_per_year < 1:
            raise errors.ConstraintViolated(
                f"periods_per_year must be a positive integer, got {periods_per_year!r}"
            )
        mu = mu * periods_per_year
        sigma = sigma * periods_per_year
    return build_market(mu, sigma)
